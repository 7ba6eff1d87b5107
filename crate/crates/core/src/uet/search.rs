// SPDX-License-Identifier: Apache-2.0

//! Randomized searches for a UET or CUET witness among Haar unitaries.
//!
//! A failed search is evidence, not proof: it only says that no sampled
//! unitary brought the residual below the threshold.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{cuet_residual, uet_residual};
use crate::error::{Error, Result};
use crate::matrix::{c, r, random, CMat};

const CHUNK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub samples: usize,
    pub threshold: f64,
    /// Smallest residual over all samples.
    pub best_residual: f64,
    pub found: bool,
}

/// `[[0, 1, 0], [0, 0, 2], [0, 0, 0]]`, which is not UET.
pub fn halmos_matrix() -> CMat {
    CMat::from_real(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0]).expect("3x3 data")
}

/// `([[0, λ, 1], [0, 0, 0], [0, 0, 0]], [[0, 0, μ], [0, 1, 0], [0, −λ, 0]])`.
///
/// Each matrix is UET on its own; for non-real `λ` and `|μ| = √2` the
/// pair is not CUET.
pub fn arveson_pair(lambda: crate::matrix::C64, mu: crate::matrix::C64) -> [CMat; 2] {
    let z = r(0.0);
    let y1 = CMat::from_vec(3, 3, vec![z, lambda, r(1.0), z, z, z, z, z, z]).expect("3x3 data");
    let y2 = CMat::from_vec(3, 3, vec![z, z, mu, z, r(1.0), z, z, -lambda, z]).expect("3x3 data");
    [y1, y2]
}

fn search(
    side: usize,
    samples: usize,
    seed: u64,
    threshold: f64,
    residual: impl Fn(&CMat) -> f64 + Sync,
) -> SearchOutcome {
    let chunks = samples.div_ceil(CHUNK);
    let best_residual = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut g = random::rng(
                seed.wrapping_add(k as u64)
                    .wrapping_mul(0x9E37_79B9_7F4A_7C15),
            );
            let count = CHUNK.min(samples - k * CHUNK);
            (0..count)
                .map(|_| residual(&random::haar_unitary(&mut g, side)))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min);
    SearchOutcome {
        samples,
        threshold,
        best_residual,
        found: best_residual <= threshold,
    }
}

/// Samples `samples` Haar unitaries `Q` and records the smallest
/// [`uet_residual`]`(t, Q)`.
pub fn uet_random_search(
    t: &CMat,
    samples: usize,
    seed: u64,
    threshold: f64,
) -> Result<SearchOutcome> {
    if !t.is_square() {
        return Err(Error::size("UET search needs a square matrix"));
    }
    Ok(search(t.rows(), samples, seed, threshold, |q| {
        uet_residual(t, q).unwrap_or(f64::INFINITY)
    }))
}

/// As [`uet_random_search`], with the residual of a tuple taken as the
/// largest [`cuet_residual`] over its members.
pub fn cuet_random_search(
    matrices: &[CMat],
    samples: usize,
    seed: u64,
    threshold: f64,
) -> Result<SearchOutcome> {
    let side = matrices
        .first()
        .ok_or_else(|| Error::domain("CUET search needs at least one matrix"))?
        .rows();
    if matrices
        .iter()
        .any(|m| m.rows() != side || m.cols() != side)
    {
        return Err(Error::size(
            "CUET search needs square matrices of equal side",
        ));
    }
    Ok(search(side, samples, seed, threshold, |u| {
        matrices
            .iter()
            .map(|y| cuet_residual(y, u).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }))
}

/// The default Arveson parameters `λ = i`, `μ = √2`.
pub fn arveson_default() -> [CMat; 2] {
    arveson_pair(c(0.0, 1.0), r(std::f64::consts::SQRT_2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_is_always_uet() {
        let out = uet_random_search(&CMat::identity(1).scale_real(3.0), 10, 0, 1e-8).unwrap();
        assert!(out.found);
    }

    #[test]
    fn halmos_smoke() {
        let out = uet_random_search(&halmos_matrix(), 5_000, 1, 1e-8).unwrap();
        assert!(!out.found);
        assert!(out.best_residual > 1e-3);
    }

    #[test]
    fn arveson_smoke() {
        let out = cuet_random_search(&arveson_default(), 5_000, 2, 1e-8).unwrap();
        assert!(!out.found);
        let sym = [CMat::diag_real(&[1.0, 2.0, 3.0])];
        assert!(cuet_random_search(&sym, 1, 0, 1e-8).is_ok());
    }

    #[test]
    fn search_is_deterministic() {
        let a = uet_random_search(&halmos_matrix(), 3000, 9, 1e-8).unwrap();
        let b = uet_random_search(&halmos_matrix(), 3000, 9, 1e-8).unwrap();
        assert_eq!(a, b);
    }
}
