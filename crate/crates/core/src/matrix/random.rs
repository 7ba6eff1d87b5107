// SPDX-License-Identifier: Apache-2.0

//! Seeded random matrices: complex Gaussian (Ginibre) matrices and Haar
//! unitaries from their QR factorization.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{CMat, C64};

/// Deterministic generator used throughout the crate.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    gaussian(rng, n, n).hermitian_part()
}

/// Haar-distributed unitary.
///
/// Gram–Schmidt on a Ginibre matrix yields an `R` factor with positive
/// real diagonal, which is exactly the phase normalization that makes `Q`
/// Haar distributed. Each column is orthogonalized twice.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    loop {
        let g = gaussian(rng, n, n);
        if let Some(q) = orthonormalize_columns(&g) {
            return q;
        }
    }
}

fn orthonormalize_columns(g: &CMat) -> Option<CMat> {
    let n = g.rows();
    let mut cols: Vec<Vec<C64>> = (0..g.cols())
        .map(|j| (0..n).map(|i| g[(i, j)]).collect())
        .collect();
    for j in 0..cols.len() {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: C64 = cols[k]
                    .iter()
                    .zip(&cols[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let (done, rest) = cols.split_at_mut(j);
                for (x, y) in rest[0].iter_mut().zip(&done[k]) {
                    *x -= proj * y;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return None;
        }
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
    let mut q = CMat::zeros(n, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            q[(i, j)] = z;
        }
    }
    Some(q)
}

/// Complex symmetric unitary `V Vᵗ` for a Haar `V`.
pub fn symmetric_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let v = haar_unitary(rng, n);
    &v * &v.transpose()
}

/// Random Toeplitz matrix of side `n` (constant along diagonals).
pub fn toeplitz<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let diags = gaussian(rng, 1, 2 * n - 1);
    CMat::from_fn(n, n, |i, j| diags[(0, n - 1 + j - i)])
}
