// SPDX-License-Identifier: Apache-2.0

//! Closed-form evolution of the semigroups `e^{t·rho[a,b,c,d]}` and
//! `e^{t·tau[a,b,c,d]}`, and the time at which `rho(t)` becomes PPT.
//!
//! With `u = (b+c)/2`, `v = (b−c)/2` and `w = a − d`, the circulant part of
//! `e^{t·rho}` is `D(a(t), b(t), c(t))` where
//!
//! ```text
//! a(t) = (1/3)·e^{t(a−u)}·[e^{3tu} + 2cos(√3·vt)]
//! b(t) = (1/3)·e^{t(a−u)}·[e^{3tu} + 2cos(√3·vt − 2π/3)]
//! c(t) = (1/3)·e^{t(a−u)}·[e^{3tu} + 2cos(√3·vt + 2π/3)]
//! ```
//!
//! and the off-diagonal part is `d(t) = e^{td}` for `rho`, or
//! `cosh(td)·Id + sinh(td)·transpose` for `tau`.

mod examples;
mod scan;

use serde::{Deserialize, Serialize};

use crate::choi::{choi_matrix, schmidt_number_structured, ChoiMatrix};
use crate::error::{Error, Result};
use crate::foliated::{
    circulant_eigentriple, circulant_matrix, omega, CirculantParams, FoliatedMap, MapSpec,
    OffDiagAction, RhoSpec, TauSpec,
};
use crate::matrix::{is_psd, min_eigenvalue, psd_threshold, r, C64};

pub use examples::{decay_semigroup, pauli_semigroup, PauliScaling};
pub use scan::{
    property_holds, trajectory, trajectory_csv, trajectory_csv_header, trajectory_point,
    trichotomy_scan, Property, TrajectoryPoint, TrichotomyResult, TrichotomyVerdict,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorFamily {
    Rho,
    Tau,
}

/// Generator `rho[a,b,c,d]` or `tau[a,b,c,d]` of a one-parameter semigroup.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: GeneratorFamily,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// `(a(t), b(t), c(t), d(t))` with `d(t) = e^{td}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Abcd {
    pub at: f64,
    pub bt: f64,
    pub ct: f64,
    pub dt: f64,
}

impl GeneratorSpec {
    pub fn rho(a: f64, b: f64, c: f64, d: f64) -> Self {
        GeneratorSpec {
            family: GeneratorFamily::Rho,
            a,
            b,
            c,
            d,
        }
    }

    pub fn tau(a: f64, b: f64, c: f64, d: f64) -> Self {
        GeneratorSpec {
            family: GeneratorFamily::Tau,
            ..GeneratorSpec::rho(a, b, c, d)
        }
    }

    pub fn u(&self) -> f64 {
        (self.b + self.c) / 2.0
    }

    pub fn v(&self) -> f64 {
        (self.b - self.c) / 2.0
    }

    pub fn w(&self) -> f64 {
        self.a - self.d
    }

    /// The generator with every parameter negated, whose semigroup is the
    /// inverse.
    pub fn negated(&self) -> Self {
        GeneratorSpec {
            family: self.family,
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }

    /// The generator itself as a map on `M_3`.
    pub fn generator_map(&self) -> FoliatedMap {
        match self.family {
            GeneratorFamily::Rho => RhoSpec::new(self.a, self.b, self.c, self.d).build(),
            GeneratorFamily::Tau => TauSpec::new(self.a, self.b, self.c, self.d).build(),
        }
    }

    pub fn parse_family(name: &str, p: [f64; 4]) -> Result<Self> {
        if let Some(i) = p.iter().position(|x| !x.is_finite()) {
            return Err(Error::domain(format!("parameter {} is not finite", i + 1)));
        }
        match name {
            "rho" => Ok(GeneratorSpec::rho(p[0], p[1], p[2], p[3])),
            "tau" => Ok(GeneratorSpec::tau(p[0], p[1], p[2], p[3])),
            other => Err(Error::domain(format!(
                "unknown generator family {other:?} (expected rho or tau)"
            ))),
        }
    }
}

/// Real-form closed expressions for `(a(t), b(t), c(t), d(t))`.
pub fn abc_of_t(gen: &GeneratorSpec, t: f64) -> Abcd {
    let (u, v) = (gen.u(), gen.v());
    let pre = (t * (gen.a - u)).exp() / 3.0;
    let grow = (3.0 * t * u).exp();
    let phase = 3f64.sqrt() * v * t;
    // cos(φ ∓ 2π/3) expanded, so that t = 0 gives b = c = 0 exactly
    let (cs, sn) = (phase.cos(), 0.5 * 3f64.sqrt() * phase.sin());
    Abcd {
        at: pre * (grow + 2.0 * cs),
        bt: pre * (grow - cs + 2.0 * sn),
        ct: pre * (grow - cs - 2.0 * sn),
        dt: (t * gen.d).exp(),
    }
}

/// The same quantities from the complex eigenvalue form
/// `a(t) = (1/3)Σ e^{tλ_m}`, `b(t) = (1/3)Σ ω^{-m} e^{tλ_m}`,
/// `c(t) = (1/3)Σ ω^{m} e^{tλ_m}`. Used as a cross-check.
pub fn abc_of_t_complex(gen: &GeneratorSpec, t: f64) -> (C64, C64, C64, C64) {
    let (l0, l1, l2) = circulant_eigentriple(&CirculantParams::real(gen.a, gen.b, gen.c));
    let e = [(l0 * t).exp(), (l1 * t).exp(), (l2 * t).exp()];
    let w = omega();
    let w2 = w * w;
    let third = r(1.0 / 3.0);
    (
        (e[0] + e[1] + e[2]) * third,
        (e[0] + w2 * e[1] + w * e[2]) * third,
        (e[0] + w * e[1] + w2 * e[2]) * third,
        r((gen.d * t).exp()),
    )
}

/// Central-difference derivatives of `(a(t), b(t), c(t), d(t))` at zero
/// minus `(a, b, c, d)`.
pub fn derivative_check(gen: &GeneratorSpec, step: f64) -> [f64; 4] {
    let p = abc_of_t(gen, step);
    let m = abc_of_t(gen, -step);
    let h2 = 2.0 * step;
    [
        (p.at - m.at) / h2 - gen.a,
        (p.bt - m.bt) / h2 - gen.b,
        (p.ct - m.ct) / h2 - gen.c,
        (p.dt - m.dt) / h2 - gen.d,
    ]
}

/// `e^{t·gen}` as a map on `M_3`. Negative `t` gives the inverse map.
pub fn evolve(gen: &GeneratorSpec, t: f64) -> FoliatedMap {
    let Abcd { at, bt, ct, dt } = abc_of_t(gen, t);
    let lambda1 = circulant_matrix(&CirculantParams::real(at, bt, ct));
    let offdiag = match gen.family {
        GeneratorFamily::Rho => OffDiagAction::scale(r(dt)),
        GeneratorFamily::Tau => OffDiagAction {
            identity: r((t * gen.d).cosh()),
            transpose: r((t * gen.d).sinh()),
        },
    };
    FoliatedMap::new(lambda1, offdiag).expect("3x3 circulant is square")
}

/// Largest entrywise deviation of `evolve(s)∘evolve(t)` from
/// `evolve(s+t)` over the nine matrix units.
pub fn semigroup_law_check(gen: &GeneratorSpec, s: f64, t: f64) -> f64 {
    let composed = evolve(gen, s).compose(&evolve(gen, t)).expect("same size");
    let direct = evolve(gen, s + t);
    max_basis_deviation(&composed, &direct)
}

pub(crate) fn max_basis_deviation(f: &FoliatedMap, g: &FoliatedMap) -> f64 {
    let n = f.dim();
    let mut worst = 0.0f64;
    for j in 0..n {
        for k in 0..n {
            let e = crate::matrix::CMat::unit(n, j, k);
            let d = f
                .apply(&e)
                .expect("size")
                .max_abs_diff(&g.apply(&e).expect("size"));
            worst = worst.max(d);
        }
    }
    worst
}

/// `h(t) = b(t)·c(t) − d(t)²`; `rho(t)` is co-CP exactly when `h(t) ≥ 0`.
pub fn h_of_t(gen: &GeneratorSpec, t: f64) -> f64 {
    let Abcd { bt, ct, dt, .. } = abc_of_t(gen, t);
    bt * ct - dt * dt
}

/// `g(t) = 9·e^{−2ta}·h(t)`, written out so that it can be evaluated
/// without the exponential prefactor:
/// `e^{4ut} − e^{−2ut} − 9e^{−2wt} − 2e^{ut}cos(√3vt) + 2e^{−2ut}cos(2√3vt)`.
pub fn g_of_t(gen: &GeneratorSpec, t: f64) -> f64 {
    let (u, v, w) = (gen.u(), gen.v(), gen.w());
    let s3 = 3f64.sqrt();
    (4.0 * u * t).exp()
        - (-2.0 * u * t).exp()
        - 9.0 * (-2.0 * w * t).exp()
        - 2.0 * (u * t).exp() * (s3 * v * t).cos()
        + 2.0 * (-2.0 * u * t).exp() * (2.0 * s3 * v * t).cos()
}

/// Checks the preconditions under which `g` is strictly increasing with a
/// single root, naming the first one that fails.
pub fn transition_preconditions(gen: &GeneratorSpec) -> Result<()> {
    if gen.family != GeneratorFamily::Rho {
        return Err(Error::domain(
            "transition time is defined for rho generators",
        ));
    }
    if gen.b < 0.0 || gen.c < 0.0 {
        return Err(Error::domain("transition time needs b >= 0 and c >= 0"));
    }
    if gen.b == 0.0 && gen.c == 0.0 {
        return Err(Error::domain("transition time needs (b, c) != (0, 0)"));
    }
    if gen.w() < 0.0 {
        return Err(Error::domain("transition time needs w = a - d >= 0"));
    }
    if gen.u() < 2f64.sqrt() * gen.v().abs() {
        return Err(Error::domain(
            "transition time needs b + c >= sqrt(2)|b - c| (u >= sqrt(2)|v|)",
        ));
    }
    Ok(())
}

const BRACKET_LIMIT: f64 = 1e6;

/// The unique `t₀ > 0` with `h(t₀) = 0`: `rho(t)` is not PPT before it and
/// PPT after it.
///
/// Brackets the root of `g` by doubling from `[0, 1]`, bisects down to
/// adjacent floating-point numbers (a width far below `1e-13` for any
/// realistic `t₀`), then checks the PPT verdict on both sides.
pub fn transition_time(gen: &GeneratorSpec, tol: f64) -> Result<f64> {
    transition_preconditions(gen)?;
    let g = |t: f64| g_of_t(gen, t);
    let (mut lo, mut hi) = (0.0, 1.0);
    while g(hi) <= 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > BRACKET_LIMIT {
            return Err(Error::Divergence(format!(
                "no sign change of g below t = {BRACKET_LIMIT}"
            )));
        }
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t0 = if g(lo).abs() <= g(hi).abs() { lo } else { hi };

    let before = is_ppt_at(gen, t0 * (1.0 - 1e-3), tol)?;
    let after = is_ppt_at(gen, t0 * (1.0 + 1e-3), tol)?;
    if before || !after {
        return Err(Error::PropertyViolation(format!(
            "PPT verdict does not flip across t0 = {t0}: before {before}, after {after}"
        )));
    }
    Ok(t0)
}

/// Numerical PPT verdict for `e^{t·gen}`.
pub fn is_ppt_at(gen: &GeneratorSpec, t: f64, tol: f64) -> Result<bool> {
    let choi = choi_matrix(&evolve(gen, t));
    Ok(is_psd(&choi.mat, tol)? && is_psd(&choi.partial_transpose(), tol)?)
}

/// Choi matrix of the `tau` semigroup at time `t`, with the closed-form
/// positivity predicate alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct TauChoi {
    pub choi: ChoiMatrix,
    pub abcd: Abcd,
    pub cosh: f64,
    pub sinh: f64,
}

impl TauChoi {
    /// `a(t) ≥ cosh(td)`, `b(t), c(t) ≥ 0` and `b(t)c(t) ≥ sinh²(td)`.
    pub fn predicate(&self) -> bool {
        let Abcd { at, bt, ct, .. } = self.abcd;
        at >= self.cosh && bt >= 0.0 && ct >= 0.0 && bt * ct >= self.sinh * self.sinh
    }

    /// `3(a(t) + b(t) + c(t))`.
    pub fn trace_formula(&self) -> f64 {
        3.0 * (self.abcd.at + self.abcd.bt + self.abcd.ct)
    }

    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        let m = &self.choi.mat;
        Ok(min_eigenvalue(m, tol)? >= psd_threshold(m, tol))
    }

    /// Schmidt number of the trace-normalized matrix by the structured
    /// rule applied to its central block `[a(t), cosh, cosh; …]`.
    pub fn schmidt_number(&self) -> Result<u8> {
        let Abcd { at, bt, ct, .. } = self.abcd;
        schmidt_number_structured(&MapSpec::Rho(RhoSpec::new(at, bt, ct, self.cosh)))
    }
}

pub fn tau_choi(gen: &GeneratorSpec, t: f64) -> Result<TauChoi> {
    if gen.family != GeneratorFamily::Tau {
        return Err(Error::domain("tau_choi needs a tau generator"));
    }
    Ok(TauChoi {
        choi: choi_matrix(&evolve(gen, t)),
        abcd: abc_of_t(gen, t),
        cosh: (t * gen.d).cosh(),
        sinh: (t * gen.d).sinh(),
    })
}
