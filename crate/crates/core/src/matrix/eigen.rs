// SPDX-License-Identifier: Apache-2.0

//! Cyclic Jacobi eigensolver for complex Hermitian matrices.

use super::{CMat, C64, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Unitary 2×2 rotation `J` with `J* H J` diagonal for the Hermitian pair
/// `[[app, apq], [conj(apq), aqq]]`. Returned as `(j11, j12, j21, j22)`.
///
/// `J = diag(1, e^{-iφ}) · [[c, s], [-s, c]]` where `apq = |apq| e^{iφ}`:
/// the phase factor makes the off-diagonal entry real, then a real Jacobi
/// rotation annihilates it.
pub(super) fn jacobi_rotation(app: f64, aqq: f64, apq: C64) -> (C64, C64, C64, C64) {
    let mag = apq.norm();
    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;
    let ph = phase.conj();
    (C64::new(cs, 0.0), C64::new(sn, 0.0), ph * (-sn), ph * cs)
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// Returns eigenvalues in ascending order and the unitary whose columns are
/// the matching eigenvectors. `tol` bounds the accepted deviation from
/// Hermiticity, relative to `max(1, ‖M‖_max)`.
pub fn hermitian_eigen(m: &CMat, tol: f64) -> Result<(Vec<f64>, CMat)> {
    let n = m.require_square("hermitian_eigen")?;
    let scale = m.max_abs().max(1.0);
    let deviation = m.hermiticity_deviation();
    if deviation > tol * scale {
        return Err(Error::NotHermitian { deviation });
    }

    let mut a = m.hermitian_part();
    let mut v = CMat::identity(n);

    let norm = a.frobenius();
    if norm > 0.0 {
        for _ in 0..MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[(i, j)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= f64::EPSILON * norm * 1e-2 {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    if apq.norm() <= f64::MIN_POSITIVE {
                        continue;
                    }
                    let (j11, j12, j21, j22) = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, apq);
                    // A <- A J
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = akp * j11 + akq * j21;
                        a[(k, q)] = akp * j12 + akq * j22;
                    }
                    // A <- J* A
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = j11.conj() * apk + j21.conj() * aqk;
                        a[(q, k)] = j12.conj() * apk + j22.conj() * aqk;
                    }
                    a[(p, q)] = ZERO;
                    a[(q, p)] = ZERO;
                    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                    // V <- V J
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * j11 + vkq * j21;
                        v[(k, q)] = vkp * j12 + vkq * j22;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMat::from_fn(n, n, |row, col| v[(row, order[col])]);
    Ok((values, vectors))
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &CMat, tol: f64) -> Result<Vec<f64>> {
    hermitian_eigen(m, tol).map(|(vals, _)| vals)
}

pub fn min_eigenvalue(m: &CMat, tol: f64) -> Result<f64> {
    Ok(hermitian_eigenvalues(m, tol)?[0])
}

/// The eigenvalue floor below which a matrix is declared not PSD:
/// `-tol · max(1, ‖M‖_max)`.
pub fn psd_threshold(m: &CMat, tol: f64) -> f64 {
    -tol * m.max_abs().max(1.0)
}

/// `true` iff the smallest eigenvalue is at least `-tol · max(1, ‖M‖_max)`.
pub fn is_psd(m: &CMat, tol: f64) -> Result<bool> {
    Ok(min_eigenvalue(m, tol)? >= psd_threshold(m, tol))
}
