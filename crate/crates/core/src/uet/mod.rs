// SPDX-License-Identifier: Apache-2.0

//! Matrices unitarily equivalent to their transposes (UET), tuples that are
//! collectively so (CUET), and the PPT block matrices built from them.
//!
//! A unitary `Q` in the canonical form
//!
//! ```text
//! Q = Q₊ ⊕ Q₋ ⊕ ⨁ᵢ [[0, λᵢXᵢᵗ], [Xᵢ, 0]]
//! ```
//!
//! with `Q₊` symmetric, `Q₋` skew-symmetric and each `Xᵢ` unitary, admits
//! many `T` with `T = Q Tᵗ Q*`. Sharing one such `Q` across a tuple makes it
//! CUET, and a Hermitian block matrix whose blocks form a CUET tuple has a
//! partial transpose unitarily similar to itself, hence is PPT after a
//! shift by a multiple of the identity.

mod search;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{
    hermitian_eigenvalues, min_eigenvalue, partial_transpose, random, BipartiteDims, CMat, C64,
    ZERO,
};

pub use search::{
    arveson_default, arveson_pair, cuet_random_search, halmos_matrix, uet_random_search,
    SearchOutcome,
};

/// Tolerance on the structural properties of the blocks of `Q`.
pub const STRUCTURE_TOL: f64 = 1e-12;
/// Tolerance of the post-construction identities.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Shift added on top of `|λ_min|` when a tuple member is made PSD.
pub const PSD_EPSILON: f64 = 1e-6;

/// One `[[0, λXᵗ], [X, 0]]` summand of `Q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OffPair {
    pub lambda: C64,
    pub x: CMat,
}

/// The canonical block structure of a UET witness.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct QStructure {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_plus: Option<CMat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_minus: Option<CMat>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub off_pairs: Vec<OffPair>,
}

#[derive(Debug, Clone)]
enum Sector<'a> {
    Plus(usize, &'a CMat),
    Minus(usize, &'a CMat),
    Pair(usize, &'a OffPair),
}

impl QStructure {
    /// `Q = Q₊` alone.
    pub fn plus(q: CMat) -> Self {
        QStructure {
            q_plus: Some(q),
            ..Self::default()
        }
    }

    /// The order-reversing permutation of side `n`, which is symmetric.
    pub fn reversal(n: usize) -> Self {
        Self::plus(CMat::from_fn(n, n, |i, j| {
            if i + j + 1 == n {
                crate::matrix::ONE
            } else {
                ZERO
            }
        }))
    }

    pub fn side(&self) -> usize {
        self.q_plus.as_ref().map_or(0, CMat::rows)
            + self.q_minus.as_ref().map_or(0, CMat::rows)
            + self.off_pairs.iter().map(|p| 2 * p.x.rows()).sum::<usize>()
    }

    fn sectors(&self) -> Vec<Sector<'_>> {
        let mut out = Vec::new();
        let mut at = 0;
        if let Some(q) = &self.q_plus {
            out.push(Sector::Plus(at, q));
            at += q.rows();
        }
        if let Some(q) = &self.q_minus {
            out.push(Sector::Minus(at, q));
            at += q.rows();
        }
        for p in &self.off_pairs {
            out.push(Sector::Pair(at, p));
            at += 2 * p.x.rows();
        }
        out
    }

    /// Checks every block invariant.
    ///
    /// Unitarity of the assembled `Q` forces `|λᵢ| = 1`: the pair block
    /// times its adjoint is `|λᵢ|²I ⊕ I`. Together with `λᵢ ≠ ±1` that is
    /// what is enforced here.
    pub fn validate(&self) -> Result<()> {
        let invalid = |m: String| Err(Error::Validation(m));
        if self.side() == 0 {
            return invalid("Q has no blocks".into());
        }
        if let Some(q) = &self.q_plus {
            if !q.is_unitary(STRUCTURE_TOL) {
                return invalid("q_plus is not unitary".into());
            }
            if q.max_abs_diff(&q.transpose()) > STRUCTURE_TOL {
                return invalid("q_plus is not symmetric".into());
            }
        }
        if let Some(q) = &self.q_minus {
            if !q.is_unitary(STRUCTURE_TOL) {
                return invalid("q_minus is not unitary".into());
            }
            if q.max_abs_diff(&q.transpose().scale_real(-1.0)) > STRUCTURE_TOL {
                return invalid("q_minus is not skew-symmetric".into());
            }
        }
        for (i, p) in self.off_pairs.iter().enumerate() {
            if !p.x.is_unitary(STRUCTURE_TOL) {
                return invalid(format!("X of off-pair {i} is not unitary"));
            }
            if ((p.lambda - 1.0).norm() <= STRUCTURE_TOL)
                || ((p.lambda + 1.0).norm() <= STRUCTURE_TOL)
            {
                return invalid(format!("lambda of off-pair {i} must differ from +1 and -1"));
            }
            if (p.lambda.norm() - 1.0).abs() > STRUCTURE_TOL {
                return invalid(format!(
                    "lambda of off-pair {i} has modulus {}, but a unitary Q needs |lambda| = 1",
                    p.lambda.norm()
                ));
            }
        }
        Ok(())
    }
}

/// Assembles the block-diagonal `Q` after validating its blocks.
pub fn assemble_q(spec: &QStructure) -> Result<CMat> {
    spec.validate()?;
    let n = spec.side();
    let mut q = CMat::zeros(n, n);
    for sector in spec.sectors() {
        match sector {
            Sector::Plus(at, b) | Sector::Minus(at, b) => place(&mut q, at, at, b),
            Sector::Pair(at, p) => {
                let k = p.x.rows();
                place(&mut q, at, at + k, &p.x.transpose().scale(p.lambda));
                place(&mut q, at + k, at, &p.x);
            }
        }
    }
    if !q.is_unitary(STRUCTURE_TOL) {
        return Err(Error::Validation("assembled Q is not unitary".into()));
    }
    Ok(q)
}

fn place(target: &mut CMat, row: usize, col: usize, block: &CMat) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            target[(row + i, col + j)] = block[(i, j)];
        }
    }
}

fn require_same_square(t: &CMat, q: &CMat) -> Result<usize> {
    if !t.is_square() || !q.is_square() || t.rows() != q.rows() {
        return Err(Error::size(format!(
            "need square matrices of equal side, got {}x{} and {}x{}",
            t.rows(),
            t.cols(),
            q.rows(),
            q.cols()
        )));
    }
    Ok(t.rows())
}

/// `‖TQ − QTᵗ‖_max ≤ tol · max(1, ‖T‖·‖Q‖)`, with max-entry norms.
pub fn is_uet_pair(t: &CMat, q: &CMat, tol: f64) -> Result<bool> {
    Ok(uet_residual(t, q)? <= tol)
}

/// The scaled residual used by [`is_uet_pair`].
pub fn uet_residual(t: &CMat, q: &CMat) -> Result<f64> {
    require_same_square(t, q)?;
    let lhs = t * q;
    let rhs = q * &t.transpose();
    Ok(lhs.max_abs_diff(&rhs) / (t.max_abs() * q.max_abs()).max(1.0))
}

/// `‖Y − U Yᵗ U*‖_max / max(1, ‖Y‖_max)`.
pub fn cuet_residual(y: &CMat, u: &CMat) -> Result<f64> {
    require_same_square(y, u)?;
    let back = &(u * &y.transpose()) * &u.adjoint();
    Ok(y.max_abs_diff(&back) / y.max_abs().max(1.0))
}

/// `(M + Q Mᵗ Q*) / 2` for a symmetric or skew-symmetric unitary `Q`.
///
/// The average satisfies `T = Q Tᵗ Q*` because `Q·conj(Q) = ±I`, and the
/// result is checked rather than assumed.
pub fn project_t_sector(m: &CMat, q: &CMat) -> Result<CMat> {
    require_same_square(m, q)?;
    let t = (m + &(&(q * &m.transpose()) * &q.adjoint())).scale_real(0.5);
    let res = cuet_residual(&t, q)?;
    if res > IDENTITY_TOL {
        return Err(Error::Construction(format!(
            "projected block violates T = Q T^t Q* (residual {res:.3e}); Q conj(Q) is not +-I"
        )));
    }
    Ok(t)
}

/// Matrices sharing the witness `u` with `Yⱼ = U Yⱼᵗ U*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuetTuple {
    pub matrices: Vec<CMat>,
    pub witness: CMat,
}

impl CuetTuple {
    /// `count` zero matrices, CUET with any witness.
    pub fn zeros(q: &QStructure, count: usize) -> Result<Self> {
        let witness = assemble_q(q)?;
        let n = witness.rows();
        Ok(CuetTuple {
            matrices: vec![CMat::zeros(n, n); count],
            witness,
        })
    }
}

/// Checks `Yⱼ = U Yⱼᵗ U*` for every member, with residuals scaled as in
/// [`cuet_residual`].
pub fn cuet_check(tuple: &CuetTuple, tol: f64) -> bool {
    tuple
        .matrices
        .iter()
        .all(|y| cuet_residual(y, &tuple.witness).is_ok_and(|r| r <= tol))
}

/// One random matrix satisfying `Y = Q Yᵗ Q*`, built sector by sector.
fn random_cuet_member<R: Rng + ?Sized>(rng: &mut R, spec: &QStructure) -> Result<CMat> {
    let n = spec.side();
    let mut y = CMat::zeros(n, n);
    for sector in spec.sectors() {
        match sector {
            Sector::Plus(at, q) | Sector::Minus(at, q) => {
                let m = random::gaussian(rng, q.rows(), q.rows());
                place(&mut y, at, at, &project_t_sector(&m, q)?);
            }
            Sector::Pair(at, p) => {
                let k = p.x.rows();
                let a = random::gaussian(rng, k, k);
                let b = &(&p.x * &a.transpose()) * &p.x.adjoint();
                place(&mut y, at, at, &a);
                place(&mut y, at + k, at + k, &b);
            }
        }
    }
    Ok(y)
}

/// Hermitian part, then shifted up by `|λ_min| + ε`. Both steps keep the
/// relation `Y = Q Yᵗ Q*`: it passes to `Y*`, and the identity satisfies
/// it for every unitary `Q`.
fn make_psd(y: &CMat) -> Result<CMat> {
    let h = y.hermitian_part();
    let lo = min_eigenvalue(&h, IDENTITY_TOL)?;
    let shift = lo.abs() + PSD_EPSILON;
    Ok(&h + &CMat::identity(h.rows()).scale_real(shift))
}

/// A seeded CUET tuple with witness `assemble_q(q)`; the first
/// `psd_prefix` members are positive definite.
pub fn generate_cuet_tuple(
    q: &QStructure,
    count: usize,
    seed: u64,
    psd_prefix: usize,
) -> Result<CuetTuple> {
    if psd_prefix > count {
        return Err(Error::domain(format!(
            "psd_prefix {psd_prefix} exceeds tuple size {count}"
        )));
    }
    let witness = assemble_q(q)?;
    let mut rng = random::rng(seed);
    let mut matrices = Vec::with_capacity(count);
    for j in 0..count {
        let y = random_cuet_member(&mut rng, q)?;
        matrices.push(if j < psd_prefix { make_psd(&y)? } else { y });
    }
    let tuple = CuetTuple { matrices, witness };
    if let Some((j, res)) = tuple
        .matrices
        .iter()
        .map(|y| cuet_residual(y, &tuple.witness))
        .enumerate()
        .find_map(|(j, r)| r.ok().filter(|&r| r > IDENTITY_TOL).map(|r| (j, r)))
    {
        return Err(Error::Construction(format!(
            "tuple member {j} has CUET residual {res:.3e}"
        )));
    }
    Ok(tuple)
}

/// `Ũ* [A_jk] Ũ` for `Ũ = U ⊕ … ⊕ U`, checked against the blockwise
/// transpose `[A_jkᵗ]`.
///
/// The identity holds exactly when every block satisfies
/// `A_jk = U A_jkᵗ U*`, so a mismatch means the blocks are not CUET with
/// this `U`.
pub fn block_conjugation_transpose(blocks: &[Vec<CMat>], u: &CMat) -> Result<CMat> {
    let n = u.rows();
    if !u.is_unitary(STRUCTURE_TOL) {
        return Err(Error::Validation(
            "block conjugation needs a unitary U".into(),
        ));
    }
    let a = CMat::from_blocks(blocks)?;
    if a.rows() != blocks.len() * n {
        return Err(Error::size("block side differs from the side of U"));
    }
    let g = blocks.len();
    let u_adj = u.adjoint();
    let conj = CMat::from_blocks(
        &(0..g)
            .map(|j| (0..g).map(|k| &(&u_adj * &blocks[j][k]) * u).collect())
            .collect::<Vec<Vec<CMat>>>(),
    )?;
    let pt = partial_transpose(&a, BipartiteDims::new(g, n)?)?;
    let dev = conj.max_abs_diff(&pt);
    let scale = a.max_abs().max(1.0);
    if dev > IDENTITY_TOL * scale {
        return Err(Error::Construction(format!(
            "U* A_jk U differs from A_jk^t by {dev:.3e}; blocks are not CUET with U"
        )));
    }
    Ok(conj)
}

/// How the CUET tuple behind a PPT construction is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TupleMode {
    #[default]
    Random,
    Zero,
}

/// A PPT matrix `A = B + a·I` together with the data that certifies it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PptConstruction {
    pub n: usize,
    /// Smallest `a ≥ 0` with `B + a·I ≥ 0`.
    pub a0: f64,
    pub margin: f64,
    /// `a0 + margin`.
    pub shift: f64,
    pub hermitian_part: CMat,
    pub matrix: CMat,
    pub witness: CMat,
    /// Ascending spectrum of `A`.
    pub eigenvalues: Vec<f64>,
    /// Ascending spectrum of the partial transpose of `A`.
    pub pt_eigenvalues: Vec<f64>,
    /// Whether `A` is entangled is not decided.
    pub separability: crate::choi::Separability,
}

/// Builds an `n²×n²` PPT matrix from `n(n+1)/2` CUET matrices sharing the
/// witness `Q`: the first `n` (positive) go on the block diagonal, the
/// rest fill the upper triangle, and the lower triangle is their adjoint.
pub fn construct_ppt(
    n: usize,
    q: &QStructure,
    seed: u64,
    mode: TupleMode,
) -> Result<PptConstruction> {
    if n < 2 {
        return Err(Error::domain("construct_ppt needs n >= 2"));
    }
    if q.side() != n {
        return Err(Error::size(format!("Q has side {} but n = {n}", q.side())));
    }
    let m = n * (n + 1) / 2;
    let tuple = match mode {
        TupleMode::Random => generate_cuet_tuple(q, m, seed, n)?,
        TupleMode::Zero => CuetTuple::zeros(q, m)?,
    };
    let mut grid = vec![vec![CMat::zeros(n, n); n]; n];
    let mut rest = tuple.matrices[n..].iter();
    for j in 0..n {
        grid[j][j] = tuple.matrices[j].clone();
        for k in (j + 1)..n {
            let y = rest.next().expect("tuple has n(n+1)/2 members").clone();
            grid[k][j] = y.adjoint();
            grid[j][k] = y;
        }
    }
    let b = CMat::from_blocks(&grid)?;
    let lo = min_eigenvalue(&b, IDENTITY_TOL)?;
    let a0 = (-lo).max(0.0);
    let margin = 1e-6 * b.max_abs().max(1.0);
    let shift = a0 + margin;
    let a = &b + &CMat::identity(n * n).scale_real(shift);

    let dims = BipartiteDims::new(n, n)?;
    let eigenvalues = hermitian_eigenvalues(&a, IDENTITY_TOL)?;
    let pt_eigenvalues = hermitian_eigenvalues(&partial_transpose(&a, dims)?, IDENTITY_TOL)?;
    if eigenvalues[0] < -IDENTITY_TOL {
        return Err(Error::Construction(format!(
            "A has eigenvalue {:.3e} below -1e-10",
            eigenvalues[0]
        )));
    }
    if pt_eigenvalues[0] < -IDENTITY_TOL {
        return Err(Error::Construction(format!(
            "partial transpose of A has eigenvalue {:.3e} below -1e-10",
            pt_eigenvalues[0]
        )));
    }
    let a_grid: Vec<Vec<CMat>> = (0..n)
        .map(|j| (0..n).map(|k| a.block(j, k, n)).collect())
        .collect();
    block_conjugation_transpose(&a_grid, &tuple.witness)?;

    Ok(PptConstruction {
        n,
        a0,
        margin,
        shift,
        hermitian_part: b,
        matrix: a,
        witness: tuple.witness,
        eigenvalues,
        pt_eigenvalues,
        separability: crate::choi::Separability::Undecidable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{c, is_psd, r, ONE};

    fn skew_unitary_2() -> CMat {
        CMat::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0]).unwrap()
    }

    fn mixed_structure(seed: u64) -> QStructure {
        let mut g = random::rng(seed);
        QStructure {
            q_plus: Some(random::symmetric_unitary(&mut g, 2)),
            q_minus: Some(skew_unitary_2()),
            off_pairs: vec![OffPair {
                lambda: c(0.6, 0.8),
                x: random::haar_unitary(&mut g, 2),
            }],
        }
    }

    #[test]
    fn assemble_trivial_and_reversal() {
        assert_eq!(
            assemble_q(&QStructure::plus(CMat::identity(1))).unwrap(),
            CMat::identity(1)
        );
        let q = assemble_q(&QStructure::reversal(3)).unwrap();
        assert_eq!(q[(0, 2)], ONE);
        assert_eq!(q[(1, 1)], ONE);
    }

    #[test]
    fn off_pair_pattern_and_modulus() {
        let spec = QStructure {
            off_pairs: vec![OffPair {
                lambda: c(0.0, 1.0),
                x: CMat::identity(2),
            }],
            ..Default::default()
        };
        let q = assemble_q(&spec).unwrap();
        assert_eq!(q[(0, 2)], c(0.0, 1.0));
        assert_eq!(q[(1, 3)], c(0.0, 1.0));
        assert_eq!(q[(2, 0)], ONE);
        assert_eq!(q[(3, 1)], ONE);

        let bad = QStructure {
            off_pairs: vec![OffPair {
                lambda: r(2.0),
                x: CMat::identity(2),
            }],
            ..Default::default()
        };
        let err = assemble_q(&bad).unwrap_err().to_string();
        assert!(err.contains("|lambda| = 1"), "{err}");
        let bad = QStructure {
            off_pairs: vec![OffPair {
                lambda: r(-1.0),
                x: CMat::identity(2),
            }],
            ..Default::default()
        };
        assert!(assemble_q(&bad).is_err());
    }

    #[test]
    fn rejects_malformed_blocks() {
        let not_sym = CMat::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0]).unwrap();
        assert!(assemble_q(&QStructure::plus(not_sym)).is_err());
        assert!(assemble_q(&QStructure::plus(CMat::identity(2).scale_real(2.0))).is_err());
        let minus = QStructure {
            q_minus: Some(CMat::identity(2)),
            ..Default::default()
        };
        assert!(assemble_q(&minus).is_err());
        assert!(assemble_q(&QStructure::default()).is_err());
    }

    #[test]
    fn toeplitz_is_uet_with_reversal() {
        let mut g = random::rng(11);
        for n in 2..=6 {
            let t = random::toeplitz(&mut g, n);
            let q = assemble_q(&QStructure::reversal(n)).unwrap();
            assert!(is_uet_pair(&t, &q, 1e-12).unwrap());
        }
        let s = random::gaussian(&mut g, 3, 3);
        let s = &s + &s.transpose();
        assert!(is_uet_pair(&s, &CMat::identity(3), 1e-12).unwrap());
        assert!(is_uet_pair(&s, &CMat::identity(2), 1e-12).is_err());
    }

    #[test]
    fn projection_cases() {
        let mut g = random::rng(5);
        let m = random::gaussian(&mut g, 3, 3);
        let sym = &m + &m.transpose();
        assert!(
            project_t_sector(&sym, &CMat::identity(3))
                .unwrap()
                .max_abs_diff(&sym)
                < 1e-15
        );
        let rev = assemble_q(&QStructure::reversal(3)).unwrap();
        let t = project_t_sector(&m, &rev).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                // persymmetric: t[i,j] = t[2-j, 2-i]
                assert!((t[(i, j)] - t[(2 - j, 2 - i)]).norm() < 1e-14);
            }
        }
        assert_eq!(
            project_t_sector(&CMat::zeros(3, 3), &rev).unwrap(),
            CMat::zeros(3, 3)
        );
        let skew = skew_unitary_2();
        let t = project_t_sector(&random::gaussian(&mut g, 2, 2), &skew).unwrap();
        assert!(cuet_residual(&t, &skew).unwrap() < 1e-14);
    }

    #[test]
    fn projection_surfaces_obstruction() {
        // a unitary that is neither symmetric nor skew: Q conj(Q) != +-I
        let q = random::haar_unitary(&mut random::rng(2), 3);
        let m = random::gaussian(&mut random::rng(3), 3, 3);
        assert!(matches!(
            project_t_sector(&m, &q),
            Err(Error::Construction(_))
        ));
    }

    #[test]
    fn generated_tuples_are_cuet() {
        for seed in 0..20 {
            let spec = mixed_structure(seed);
            let t = generate_cuet_tuple(&spec, 4, seed, 2).unwrap();
            assert!(cuet_check(&t, 1e-10));
            for y in &t.matrices[..2] {
                assert!(y.hermiticity_deviation() < 1e-14);
                assert!(is_psd(y, 1e-12).unwrap());
                assert!(min_eigenvalue(y, 1e-12).unwrap() > 0.0);
            }
        }
        let single = generate_cuet_tuple(&QStructure::plus(CMat::identity(3)), 1, 9, 0).unwrap();
        let y = &single.matrices[0];
        assert_eq!(y.max_abs_diff(&y.transpose()), 0.0);
        assert!(generate_cuet_tuple(&QStructure::reversal(2), 1, 0, 2).is_err());
    }

    #[test]
    fn diagonal_real_tuple_is_cuet_with_identity() {
        let t = CuetTuple {
            matrices: vec![CMat::diag_real(&[1.0, -2.0]), CMat::diag_real(&[0.5, 3.0])],
            witness: CMat::identity(2),
        };
        assert!(cuet_check(&t, 1e-12));
    }

    #[test]
    fn block_conjugation_matches_partial_transpose() {
        let spec = QStructure::reversal(3);
        let t = generate_cuet_tuple(&spec, 9, 4, 0).unwrap();
        let grid: Vec<Vec<CMat>> = t.matrices.chunks(3).map(|row| row.to_vec()).collect();
        let out = block_conjugation_transpose(&grid, &t.witness).unwrap();
        let a = CMat::from_blocks(&grid).unwrap();
        let pt = partial_transpose(&a, BipartiteDims::new(3, 3).unwrap()).unwrap();
        assert!(out.max_abs_diff(&pt) < 1e-10);

        let sym: Vec<Vec<CMat>> = vec![vec![CMat::diag_real(&[1.0, 2.0]); 2]; 2];
        let out = block_conjugation_transpose(&sym, &CMat::identity(2)).unwrap();
        assert_eq!(out, CMat::from_blocks(&sym).unwrap());

        let mut g = random::rng(8);
        let junk: Vec<Vec<CMat>> = (0..2)
            .map(|_| (0..2).map(|_| random::gaussian(&mut g, 2, 2)).collect())
            .collect();
        assert!(block_conjugation_transpose(&junk, &CMat::identity(2)).is_err());
    }

    #[test]
    fn ppt_construction_small() {
        let out = construct_ppt(2, &QStructure::reversal(2), 17, TupleMode::Random).unwrap();
        assert!(out.eigenvalues[0] >= -1e-10);
        assert!(out.pt_eigenvalues[0] >= -1e-10);
        assert!(out.matrix.hermiticity_deviation() < 1e-14);
        let tr = out.matrix.trace().re;
        let rho = out.matrix.scale_real(1.0 / tr);
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        if out.a0 > 0.0 {
            let below = &out.hermitian_part + &CMat::identity(4).scale_real(out.a0 - 1e-3);
            assert!(min_eigenvalue(&below, 1e-10).unwrap() < 0.0);
        }
    }

    #[test]
    fn ppt_construction_zero_tuple() {
        let out = construct_ppt(3, &QStructure::reversal(3), 0, TupleMode::Zero).unwrap();
        assert_eq!(out.a0, 0.0);
        assert_eq!(out.matrix, CMat::identity(9).scale_real(out.shift));
    }

    #[test]
    fn ppt_construction_guards() {
        assert!(construct_ppt(1, &QStructure::reversal(1), 0, TupleMode::Random).is_err());
        assert!(construct_ppt(3, &QStructure::reversal(2), 0, TupleMode::Random).is_err());
    }

    #[test]
    fn q_structure_json_round_trip() {
        let spec = mixed_structure(3);
        let json = serde_json::to_string(&spec).unwrap();
        let back: QStructure = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
        let minimal: QStructure =
            serde_json::from_str(r#"{"q_plus":{"rows":1,"cols":1,"re":[1.0],"im":[0.0]}}"#)
                .unwrap();
        assert_eq!(assemble_q(&minimal).unwrap(), CMat::identity(1));
    }
}
