// SPDX-License-Identifier: Apache-2.0

//! Matrix exponential by scaling and squaring of a truncated Taylor series.
//!
//! This is the independent oracle for the closed-form semigroup formulas,
//! so it deliberately knows nothing about circulant structure.

use super::{CMat, C64};
use crate::error::Result;

/// Scaled argument norm bound before the series is summed.
const SCALED_NORM: f64 = 0.25;
const MAX_TERMS: usize = 40;

/// `exp(t·M)`.
pub fn expm(m: &CMat, t: f64) -> Result<CMat> {
    let n = m.require_square("expm")?;
    let a = m.scale(C64::new(t, 0.0));
    let norm = a.norm_one();
    if norm == 0.0 {
        return Ok(CMat::identity(n));
    }

    let squarings = if norm > SCALED_NORM {
        (norm / SCALED_NORM).log2().ceil() as u32
    } else {
        0
    };
    let x = a.scale_real(0.5f64.powi(squarings as i32));

    // Horner-free accumulation: term_k = x^k / k!
    let mut sum = CMat::identity(n);
    let mut term = CMat::identity(n);
    for k in 1..=MAX_TERMS {
        term = (&term * &x).scale_real(1.0 / k as f64);
        sum = &sum + &term;
        if term.max_abs() <= f64::EPSILON * 1e-3 * sum.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}
