// SPDX-License-Identifier: Apache-2.0

//! Two small semigroups on `M_2`: a foliated decay semigroup, and a
//! Pauli-basis semigroup whose value at zero is an idempotent rather than
//! the identity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foliated::{FoliatedMap, OffDiagAction};
use crate::matrix::{r, CMat};

/// `Λ_t = [[1, 0], [1 − e^{−t}, e^{−t}]] ⊕ e^{−t/2}·Id` on `M_2`.
///
/// Amplitude damping towards `E_11`, which is CP but not PPT for `t > 0`.
pub fn decay_semigroup(t: f64) -> Result<FoliatedMap> {
    if !(t >= 0.0) {
        return Err(Error::domain("semigroup time must be >= 0"));
    }
    let e = (-t).exp();
    let l1 = CMat::from_real(2, 2, &[1.0, 0.0, 1.0 - e, e])?;
    FoliatedMap::new(l1, OffDiagAction::scale(r((-0.5 * t).exp())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PauliScaling {
    /// `T_t`, carrying the overall factor `2^{−t}`.
    Halved,
    /// `S_t`, without it.
    Unscaled,
}

/// The 4×4 matrix, in the Pauli basis `(σ0, σ1, σ2, σ3)`, of
///
/// ```text
/// [[1, 0,   0, √(1−u²)],
///  [0, u^t, 0, 0      ],
///  [0, 0,   0, 0      ],
///  [0, 0,   0, 0      ]]
/// ```
///
/// times `2^{−t}` for [`PauliScaling::Halved`]. Here `u = sin 2θ ∈ (0, 1]`.
pub fn pauli_semigroup(t: f64, u: f64, scaling: PauliScaling) -> Result<CMat> {
    if !(t >= 0.0) {
        return Err(Error::domain("semigroup time must be >= 0"));
    }
    if !(u > 0.0 && u <= 1.0) {
        return Err(Error::domain("u must lie in (0, 1]"));
    }
    let k = (1.0 - u * u).sqrt();
    let m = CMat::from_real(
        4,
        4,
        &[
            1.0,
            0.0,
            0.0,
            k, //
            0.0,
            u.powf(t),
            0.0,
            0.0, //
            0.0,
            0.0,
            0.0,
            0.0, //
            0.0,
            0.0,
            0.0,
            0.0,
        ],
    )?;
    Ok(match scaling {
        PauliScaling::Halved => m.scale_real(0.5f64.powf(t)),
        PauliScaling::Unscaled => m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choi::choi_matrix;
    use crate::matrix::{is_psd, min_eigenvalue};

    #[test]
    fn decay_starts_at_identity() {
        let m = decay_semigroup(0.0).unwrap();
        let id = FoliatedMap::identity(2);
        assert_eq!(m.lambda1(), id.lambda1());
        assert_eq!(m.offdiag(), id.offdiag());
    }

    #[test]
    fn decay_semigroup_law() {
        for (s, t) in [(0.3, 0.7), (1.0, 2.5), (0.0, 4.0)] {
            let st = decay_semigroup(s)
                .unwrap()
                .compose(&decay_semigroup(t).unwrap())
                .unwrap();
            let sum = decay_semigroup(s + t).unwrap();
            assert!(st.lambda1().max_abs_diff(sum.lambda1()) < 1e-14);
            assert!((st.offdiag().identity - sum.offdiag().identity).norm() < 1e-14);
        }
    }

    #[test]
    fn decay_is_cp_but_not_ppt() {
        for t in [0.1, 1.0, 5.0] {
            let c = choi_matrix(&decay_semigroup(t).unwrap());
            assert!(is_psd(&c.mat, 1e-12).unwrap());
            assert!(min_eigenvalue(&c.partial_transpose(), 1e-12).unwrap() < -1e-3);
        }
    }

    #[test]
    fn pauli_initial_value_is_idempotent() {
        let u = (2.0 * 0.4f64).sin();
        let t0 = pauli_semigroup(0.0, u, PauliScaling::Halved).unwrap();
        let s0 = pauli_semigroup(0.0, u, PauliScaling::Unscaled).unwrap();
        assert_eq!(t0, s0);
        assert!(t0.matmul(&t0).unwrap().max_abs_diff(&t0) < 1e-15);
    }

    #[test]
    fn pauli_semigroup_law() {
        let u = 0.6;
        for scaling in [PauliScaling::Halved, PauliScaling::Unscaled] {
            for (s, t) in [(0.25, 1.5), (2.0, 0.5), (0.0, 1.0)] {
                let a = pauli_semigroup(s, u, scaling).unwrap();
                let b = pauli_semigroup(t, u, scaling).unwrap();
                let ab = a.matmul(&b).unwrap();
                assert!(ab.max_abs_diff(&pauli_semigroup(s + t, u, scaling).unwrap()) < 1e-14);
            }
        }
    }

    #[test]
    fn pauli_domain() {
        assert!(pauli_semigroup(1.0, 0.0, PauliScaling::Halved).is_err());
        assert!(pauli_semigroup(1.0, 1.5, PauliScaling::Halved).is_err());
        assert!(pauli_semigroup(-1.0, 0.5, PauliScaling::Halved).is_err());
        assert!(decay_semigroup(f64::NAN).is_err());
    }
}
