// SPDX-License-Identifier: Apache-2.0

//! Singular values by one-sided (Hestenes) Jacobi.
//!
//! Working on columns directly keeps small singular values accurate, which
//! squaring into `M* M` would not.

use super::eigen::jacobi_rotation;
use super::{CMat, C64};

const MAX_SWEEPS: usize = 80;

/// Singular values in descending order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    // Orthogonalize the columns of the taller orientation.
    let work = if m.rows() >= m.cols() {
        m.clone()
    } else {
        m.adjoint()
    };
    let (rows, cols) = (work.rows(), work.cols());
    let mut cols_v: Vec<Vec<C64>> = (0..cols)
        .map(|j| (0..rows).map(|i| work[(i, j)]).collect())
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha: f64 = cols_v[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols_v[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols_v[p]
                    .iter()
                    .zip(&cols_v[q])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                if gamma.norm() <= f64::EPSILON * (alpha * beta).sqrt() || gamma.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                let (j11, j12, j21, j22) = jacobi_rotation(alpha, beta, gamma);
                for k in 0..rows {
                    let xp = cols_v[p][k];
                    let xq = cols_v[q][k];
                    cols_v[p][k] = xp * j11 + xq * j21;
                    cols_v[q][k] = xp * j12 + xq * j22;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = cols_v
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Number of singular values above `rel_tol · σ_max · max(rows, cols)`.
/// The zero matrix has rank 0.
pub fn numerical_rank(m: &CMat, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    let cutoff = rel_tol * smax * m.rows().max(m.cols()) as f64;
    sv.iter().filter(|&&s| s > cutoff).count()
}
