// SPDX-License-Identifier: Apache-2.0

//! The circulant algebra `D(a,b,c)` and linear maps on `M_n` that preserve
//! the split of a matrix into its diagonal and off-diagonal parts.
//!
//! A [`FoliatedMap`] acts on the diagonal coordinates through an `n×n`
//! matrix (`lambda1`, columns are the diagonal images of `E_11, …, E_nn`)
//! and on the off-diagonal part as `α·X + β·Xᵗ`. The three families used
//! throughout the crate are
//!
//! * `rho[a,b,c,d]   = D(a,b,c) ⊕ d·Id`
//! * `tau[a,b,c,d]   = D(a,b,c) ⊕ d·transpose`
//! * `theta[a,c1,c2,c3] = T(a,c1,c2,c3) ⊕ (−Id)`

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{c, r, CMat, C64, ONE, ZERO};

/// Primitive cube root of unity `−1/2 + (√3/2)i`.
pub fn omega() -> C64 {
    C64::from_polar(1.0, 2.0 * PI / 3.0)
}

/// Parameters of the 3×3 circulant with rows `(a,b,c), (c,a,b), (b,c,a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirculantParams {
    pub a: C64,
    pub b: C64,
    pub c: C64,
}

impl CirculantParams {
    pub fn new(a: C64, b: C64, c: C64) -> Self {
        CirculantParams { a, b, c }
    }

    pub fn real(a: f64, b: f64, c: f64) -> Self {
        CirculantParams::new(r(a), r(b), r(c))
    }

    /// `a³ + b³ + c³ − 3abc`.
    pub fn det(&self) -> C64 {
        let CirculantParams { a, b, c } = *self;
        a * a * a + b * b * b + c * c * c - 3.0 * a * b * c
    }

    /// Parameters of the adjugate: `D(p)·D(adjugate) = det·I`.
    pub fn adjugate(&self) -> Self {
        let CirculantParams { a, b, c } = *self;
        CirculantParams::new(a * a - b * c, c * c - a * b, b * b - a * c)
    }
}

pub fn circulant_matrix(p: &CirculantParams) -> CMat {
    let CirculantParams { a, b, c } = *p;
    CMat::from_vec(3, 3, vec![a, b, c, c, a, b, b, c, a]).expect("3x3 circulant")
}

/// Parameters of `D(p)·D(q)`.
pub fn circulant_mul(p: &CirculantParams, q: &CirculantParams) -> CirculantParams {
    let (a1, b1, c1) = (p.a, p.b, p.c);
    let (a, b, c) = (q.a, q.b, q.c);
    CirculantParams::new(
        a1 * a + b1 * c + c1 * b,
        c1 * c + a1 * b + b1 * a,
        b1 * b + c1 * a + a1 * c,
    )
}

/// Eigenvalues `(a+b+c, a+bω+cω², a+bω²+cω)`, in the order of the columns
/// of [`dft3_unitary`].
pub fn circulant_eigentriple(p: &CirculantParams) -> (C64, C64, C64) {
    let w = omega();
    let w2 = w * w;
    (
        p.a + p.b + p.c,
        p.a + p.b * w + p.c * w2,
        p.a + p.b * w2 + p.c * w,
    )
}

/// `W = (1/√3)[[1,1,1],[1,ω,ω²],[1,ω²,ω]]`.
pub fn dft3_unitary() -> CMat {
    let w = omega();
    let s = 1.0 / 3f64.sqrt();
    CMat::from_fn(3, 3, |j, k| w.powu((j * k) as u32) * s)
}

/// `T(a,c1,c2,c3) = [[a,0,c1],[c2,a,0],[0,c3,a]]`.
pub fn theta_block(a: f64, c1: f64, c2: f64, c3: f64) -> CMat {
    CMat::from_real(3, 3, &[a, 0.0, c1, c2, a, 0.0, 0.0, c3, a]).expect("3x3 block")
}

/// Off-diagonal action `X_off ↦ identity·X_off + transpose·X_offᵗ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffDiagAction {
    pub identity: C64,
    pub transpose: C64,
}

/// The two pure off-diagonal kinds, when the action is one of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OffDiagKind {
    Scale,
    TransposeScale,
}

impl OffDiagAction {
    pub fn scale(d: C64) -> Self {
        OffDiagAction {
            identity: d,
            transpose: ZERO,
        }
    }

    pub fn transpose_scale(d: C64) -> Self {
        OffDiagAction {
            identity: ZERO,
            transpose: d,
        }
    }

    /// `(α₁ + β₁T)(α₂ + β₂T) = (α₁α₂ + β₁β₂) + (α₁β₂ + β₁α₂)T`, since `T² = 1`.
    pub fn then(&self, inner: &OffDiagAction) -> OffDiagAction {
        OffDiagAction {
            identity: self.identity * inner.identity + self.transpose * inner.transpose,
            transpose: self.identity * inner.transpose + self.transpose * inner.identity,
        }
    }

    /// `Some((kind, coefficient))` for a pure action; `None` when both parts
    /// are nonzero. The zero action reports as `Scale` with coefficient 0.
    pub fn kind(&self) -> Option<(OffDiagKind, C64)> {
        match (self.identity == ZERO, self.transpose == ZERO) {
            (_, true) => Some((OffDiagKind::Scale, self.identity)),
            (true, false) => Some((OffDiagKind::TransposeScale, self.transpose)),
            (false, false) => None,
        }
    }
}

/// Linear map `Λ₁ ⊕ Λ₂` on `M_n` with no mixing between the diagonal and
/// off-diagonal subspaces.
#[derive(Debug, Clone, PartialEq)]
pub struct FoliatedMap {
    lambda1: CMat,
    offdiag: OffDiagAction,
}

impl FoliatedMap {
    pub fn new(lambda1: CMat, offdiag: OffDiagAction) -> Result<Self> {
        lambda1.require_square("FoliatedMap diagonal part")?;
        Ok(FoliatedMap { lambda1, offdiag })
    }

    pub fn identity(n: usize) -> Self {
        FoliatedMap {
            lambda1: CMat::identity(n),
            offdiag: OffDiagAction::scale(ONE),
        }
    }

    pub fn dim(&self) -> usize {
        self.lambda1.rows()
    }

    pub fn lambda1(&self) -> &CMat {
        &self.lambda1
    }

    pub fn offdiag(&self) -> OffDiagAction {
        self.offdiag
    }

    pub fn apply(&self, x: &CMat) -> Result<CMat> {
        let n = self.dim();
        if x.rows() != n || x.cols() != n {
            return Err(Error::size(format!(
                "map acts on {n}x{n} matrices, got {}x{}",
                x.rows(),
                x.cols()
            )));
        }
        let OffDiagAction {
            identity,
            transpose,
        } = self.offdiag;
        Ok(CMat::from_fn(n, n, |i, j| {
            if i == j {
                (0..n).map(|k| self.lambda1[(i, k)] * x[(k, k)]).sum()
            } else {
                identity * x[(i, j)] + transpose * x[(j, i)]
            }
        }))
    }

    /// `self ∘ inner`, i.e. apply `inner` first.
    pub fn compose(&self, inner: &FoliatedMap) -> Result<FoliatedMap> {
        if self.dim() != inner.dim() {
            return Err(Error::size("cannot compose maps on different matrix sizes"));
        }
        Ok(FoliatedMap {
            lambda1: &self.lambda1 * &inner.lambda1,
            offdiag: self.offdiag.then(&inner.offdiag),
        })
    }

    /// Matrix of the map on row-major vectorized `M_n`: column `p·n+q` is
    /// `vec(Λ(E_pq))`.
    pub fn superoperator(&self) -> CMat {
        let n = self.dim();
        let mut s = CMat::zeros(n * n, n * n);
        for p in 0..n {
            for q in 0..n {
                let img = self
                    .apply(&CMat::unit(n, p, q))
                    .expect("basis element has map size");
                let col = p * n + q;
                for (row, z) in img.data().iter().enumerate() {
                    s[(row, col)] = *z;
                }
            }
        }
        s
    }

    /// Circulant parameters when `lambda1` is a 3×3 circulant.
    pub fn circulant_params(&self) -> Option<CirculantParams> {
        if self.dim() != 3 {
            return None;
        }
        let l = &self.lambda1;
        let p = CirculantParams::new(l[(0, 0)], l[(0, 1)], l[(0, 2)]);
        (circulant_matrix(&p) == *l).then_some(p)
    }
}

/// `rho[a,b,c,d] = D(a,b,c) ⊕ d·Id`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoSpec {
    #[serde(with = "decimal")]
    pub a: f64,
    #[serde(with = "decimal")]
    pub b: f64,
    #[serde(with = "decimal")]
    pub c: f64,
    #[serde(with = "decimal")]
    pub d: f64,
}

/// `tau[a,b,c,d] = D(a,b,c) ⊕ d·transpose`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauSpec {
    #[serde(with = "decimal")]
    pub a: f64,
    #[serde(with = "decimal")]
    pub b: f64,
    #[serde(with = "decimal")]
    pub c: f64,
    #[serde(with = "decimal")]
    pub d: f64,
}

/// `theta[a,c1,c2,c3] = T(a,c1,c2,c3) ⊕ (−Id)`. The off-diagonal part is
/// fixed; there is no coefficient to set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaSpec {
    #[serde(with = "decimal")]
    pub a: f64,
    #[serde(with = "decimal")]
    pub c1: f64,
    #[serde(with = "decimal")]
    pub c2: f64,
    #[serde(with = "decimal")]
    pub c3: f64,
}

impl RhoSpec {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        RhoSpec { a, b, c, d }
    }

    /// The `d = −1` normalization `rho[a,b,c]`.
    pub fn choi_type(a: f64, b: f64, c: f64) -> Self {
        RhoSpec { a, b, c, d: -1.0 }
    }

    pub fn circulant(&self) -> CirculantParams {
        CirculantParams::real(self.a, self.b, self.c)
    }

    pub fn to_tau(self) -> TauSpec {
        TauSpec::new(self.a, self.b, self.c, self.d)
    }

    pub fn build(&self) -> FoliatedMap {
        FoliatedMap {
            lambda1: circulant_matrix(&self.circulant()),
            offdiag: OffDiagAction::scale(r(self.d)),
        }
    }
}

impl TauSpec {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        TauSpec { a, b, c, d }
    }

    pub fn to_rho(self) -> RhoSpec {
        RhoSpec::new(self.a, self.b, self.c, self.d)
    }

    pub fn build(&self) -> FoliatedMap {
        FoliatedMap {
            lambda1: circulant_matrix(&CirculantParams::real(self.a, self.b, self.c)),
            offdiag: OffDiagAction::transpose_scale(r(self.d)),
        }
    }
}

impl ThetaSpec {
    pub fn new(a: f64, c1: f64, c2: f64, c3: f64) -> Self {
        ThetaSpec { a, c1, c2, c3 }
    }

    pub fn build(&self) -> FoliatedMap {
        FoliatedMap {
            lambda1: theta_block(self.a, self.c1, self.c2, self.c3),
            offdiag: OffDiagAction::scale(r(-1.0)),
        }
    }
}

/// Any of the three map families, tagged by `"family"` on the wire:
/// `{"family":"rho","a":"1","b":"0.5","c":"2","d":"1"}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum MapSpec {
    Rho(RhoSpec),
    Tau(TauSpec),
    Theta(ThetaSpec),
}

impl MapSpec {
    pub fn build(&self) -> FoliatedMap {
        match self {
            MapSpec::Rho(s) => s.build(),
            MapSpec::Tau(s) => s.build(),
            MapSpec::Theta(s) => s.build(),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            MapSpec::Rho(_) => "rho",
            MapSpec::Tau(_) => "tau",
            MapSpec::Theta(_) => "theta",
        }
    }

    pub fn params(&self) -> [f64; 4] {
        match *self {
            MapSpec::Rho(RhoSpec { a, b, c, d }) | MapSpec::Tau(TauSpec { a, b, c, d }) => {
                [a, b, c, d]
            }
            MapSpec::Theta(ThetaSpec { a, c1, c2, c3 }) => [a, c1, c2, c3],
        }
    }

    pub fn param_names(&self) -> [&'static str; 4] {
        match self {
            MapSpec::Rho(_) | MapSpec::Tau(_) => ["a", "b", "c", "d"],
            MapSpec::Theta(_) => ["a", "c1", "c2", "c3"],
        }
    }

    /// Builds a spec from a family name and four parameters.
    pub fn from_family(family: &str, p: [f64; 4]) -> Result<Self> {
        if let Some(i) = p.iter().position(|x| !x.is_finite()) {
            return Err(Error::domain(format!("parameter {} is not finite", i + 1)));
        }
        match family {
            "rho" => Ok(MapSpec::Rho(RhoSpec::new(p[0], p[1], p[2], p[3]))),
            "tau" => Ok(MapSpec::Tau(TauSpec::new(p[0], p[1], p[2], p[3]))),
            "theta" => Ok(MapSpec::Theta(ThetaSpec::new(p[0], p[1], p[2], p[3]))),
            other => Err(Error::domain(format!(
                "unknown map family {other:?} (expected rho, tau or theta)"
            ))),
        }
    }
}

/// Free-function form of [`MapSpec::build`].
pub fn build_map(spec: &MapSpec) -> FoliatedMap {
    spec.build()
}

/// Reals as shortest round-trip decimal strings; numbers are accepted too.
pub(crate) mod decimal {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Str(String),
        Num(f64),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let x = match Repr::deserialize(d)? {
            Repr::Str(s) => s.trim().parse::<f64>().map_err(de::Error::custom)?,
            Repr::Num(x) => x,
        };
        if x.is_finite() {
            Ok(x)
        } else {
            Err(de::Error::custom("parameter must be finite"))
        }
    }
}

/// Complex helper for `a + ib` used by tests and callers that build
/// circulants from complex parameters.
pub fn cparams(a: (f64, f64), b: (f64, f64), cc: (f64, f64)) -> CirculantParams {
    CirculantParams::new(c(a.0, a.1), c(b.0, b.1), c(cc.0, cc.1))
}
