// SPDX-License-Identifier: Apache-2.0

//! Closed-form facts about the three families: the Choi rank table,
//! Schmidt numbers of the structured densities, and the two-candidate PPTE
//! witness.

use serde::{Deserialize, Serialize};

use super::ChoiMatrix;
use crate::error::{Error, Result};
use crate::foliated::{MapSpec, RhoSpec};
use crate::matrix::{min_eigenvalue, psd_threshold};

/// Exact-arithmetic style comparison that absorbs only representation
/// round-off.
fn same(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0)
}

fn zero(x: f64) -> bool {
    same(x, 0.0)
}

/// Rank of the Choi matrix when the parameters fall inside the closed-form
/// case table, `None` otherwise.
///
/// * `rho` with `a, b, c ≠ 0`: 7 if `a = d`, 8 if `a = −2d`, else 9.
/// * `tau` with `a ≠ 0`: 9 if `bc ≠ d²`; 6 if `bc = d² ≠ 0`; 6 if
///   `d = 0` and exactly one of `b, c` is nonzero; 3 if `b = c = d = 0`.
/// * `theta` with `c1, c2, c3 ≠ 0`: 5 if `a = 2`, else 6.
pub fn choi_rank_analytic(spec: &MapSpec) -> Option<usize> {
    match *spec {
        MapSpec::Rho(s) => {
            if zero(s.a) || zero(s.b) || zero(s.c) {
                None
            } else if same(s.a, s.d) {
                Some(7)
            } else if same(s.a, -2.0 * s.d) {
                Some(8)
            } else {
                Some(9)
            }
        }
        MapSpec::Tau(s) => {
            if zero(s.a) {
                return None;
            }
            let gap = s.b * s.c - s.d * s.d;
            if !zero(gap) {
                Some(9)
            } else if !zero(s.d) {
                Some(6)
            } else if zero(s.b) && zero(s.c) {
                Some(3)
            } else {
                // d = 0 = bc with b² + c² ≠ 0: exactly one of b, c vanishes.
                Some(6)
            }
        }
        MapSpec::Theta(s) => {
            if zero(s.c1) || zero(s.c2) || zero(s.c3) {
                None
            } else if same(s.a, 2.0) {
                Some(5)
            } else {
                Some(6)
            }
        }
    }
}

/// Schmidt number of the trace-normalized Choi matrix, for the structured
/// densities where it is known in closed form.
///
/// The rules are scale invariant, so unnormalized parameters are accepted:
///
/// * `rho` with `a ≥ max(d, −2d)`, `d ≠ 0`: 2 if `a + 2d = 0`, else 3.
/// * `tau` with `bc ≥ d²`, `d ≠ 0`: 2.
/// * `theta` with `a ≥ 2`: 2 if `a = 2`, else 3.
pub fn schmidt_number_structured(spec: &MapSpec) -> Result<u8> {
    match *spec {
        MapSpec::Rho(s) => {
            if s.d == 0.0 {
                return Err(Error::domain("Schmidt rule needs d != 0"));
            }
            if s.a < s.d {
                return Err(Error::domain("Schmidt rule needs a >= d"));
            }
            if s.a < -2.0 * s.d {
                return Err(Error::domain("Schmidt rule needs a >= -2d"));
            }
            Ok(if s.a + 2.0 * s.d == 0.0 { 2 } else { 3 })
        }
        MapSpec::Tau(s) => {
            if s.d == 0.0 {
                return Err(Error::domain("Schmidt rule needs d != 0"));
            }
            if s.b * s.c < s.d * s.d {
                return Err(Error::domain("Schmidt rule needs bc >= d^2"));
            }
            Ok(2)
        }
        MapSpec::Theta(s) => {
            if s.a < 2.0 {
                return Err(Error::domain("Schmidt rule needs a >= 2"));
            }
            Ok(if s.a == 2.0 { 2 } else { 3 })
        }
    }
}

/// The `d < a < 2d` and `2(b + c) < 2d − a` condition under which a
/// normalized `rho` state is claimed to have Schmidt number above two.
/// Reported as a flag only; the structured rule is the cross-check.
pub fn schmidt_above_two_flag(a: f64, b: f64, c: f64, d: f64) -> bool {
    d < a && a < 2.0 * d && 2.0 * (b + c) < 2.0 * d - a
}

/// A positive map `xi = rho[a',b',c',−1]` whose composition with the
/// classified map is not CP.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub xi: RhoSpec,
    pub composed_min_eigenvalue: f64,
    /// The composed Choi matrix has an eigenvalue below the PSD threshold.
    pub certified: bool,
}

/// Tries the two candidate witnesses for a PPT `rho[a,b,c,d]` with `d > 0`:
/// `rho[1,0,1]` when `a + b < 2d`, `rho[1,1,0]` when `a + c < 2d`.
pub fn pptes_witness(spec: &RhoSpec, tol: f64) -> Result<Option<Witness>> {
    let RhoSpec { a, b, c, d } = *spec;
    if d <= 0.0 {
        return Err(Error::domain("witness needs d > 0"));
    }
    if a < d {
        return Err(Error::domain("witness needs a >= d"));
    }
    if b * c < d * d {
        return Err(Error::domain("witness needs bc >= d^2"));
    }
    let xi = if a + b < 2.0 * d {
        RhoSpec::choi_type(1.0, 0.0, 1.0)
    } else if a + c < 2.0 * d {
        RhoSpec::choi_type(1.0, 1.0, 0.0)
    } else {
        return Ok(None);
    };
    let composed = xi.build().compose(&spec.build())?;
    let choi = super::choi_matrix(&composed);
    let min = min_eigenvalue(&choi.mat, tol)?;
    Ok(Some(Witness {
        xi,
        composed_min_eigenvalue: min,
        certified: min < psd_threshold(&choi.mat, tol),
    }))
}

/// The central block `[a d d; d a d; d d a]` of a `rho` Choi matrix.
pub fn central_block(choi: &ChoiMatrix) -> crate::matrix::CMat {
    let idx = [0, 4, 8];
    crate::matrix::CMat::from_fn(3, 3, |i, j| choi.mat[(idx[i], idx[j])])
}
