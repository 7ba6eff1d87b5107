// SPDX-License-Identifier: Apache-2.0

//! Property scans along a semigroup trajectory.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    abc_of_t, evolve, transition_preconditions, transition_time, GeneratorFamily, GeneratorSpec,
};
use crate::choi::{choi_matrix, pptes_witness, schmidt_number_structured};
use crate::error::{Error, Result};
use crate::foliated::{MapSpec, RhoSpec};
use crate::format::g15;
use crate::matrix::{min_eigenvalue, psd_threshold};

/// A property of `e^{t·gen}` whose true-set along `t ≥ 0` is expected to
/// be empty, everything, or a right half-line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "r")]
pub enum Property {
    /// PPT and no witness certifies entanglement.
    SeparableProxy,
    Ppt,
    /// Schmidt number at most `r` by the structured rule.
    SchmidtLe(u8),
    Cp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum TrichotomyVerdict {
    AlwaysHolds,
    TransitionAt {
        #[serde(with = "g15_string")]
        t0: f64,
    },
    NeverHolds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrichotomyResult {
    pub property: Property,
    #[serde(flatten)]
    pub verdict: TrichotomyVerdict,
    pub scan_grid: Vec<(f64, bool)>,
}

mod g15_string {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&crate::format::g15(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let s = String::deserialize(d)?;
        crate::format::parse_real(&s).map_err(de::Error::custom)
    }
}

/// Evaluates `property` for `e^{t·gen}`.
pub fn property_holds(gen: &GeneratorSpec, property: Property, t: f64, tol: f64) -> Result<bool> {
    let map = evolve(gen, t);
    let choi = choi_matrix(&map);
    let cp = min_eigenvalue(&choi.mat, tol)? >= psd_threshold(&choi.mat, tol);
    if property == Property::Cp {
        return Ok(cp);
    }
    let pt = choi.partial_transpose();
    let ppt = cp && min_eigenvalue(&pt, tol)? >= psd_threshold(&pt, tol);
    match property {
        Property::Cp => unreachable!("handled above"),
        Property::Ppt => Ok(ppt),
        Property::SeparableProxy => {
            if !ppt || gen.family == GeneratorFamily::Tau {
                return Ok(ppt);
            }
            let x = abc_of_t(gen, t);
            let spec = RhoSpec::new(x.at, x.bt, x.ct, x.dt);
            let witnessed = x.at >= x.dt
                && x.bt * x.ct >= x.dt * x.dt
                && pptes_witness(&spec, tol)?.is_some_and(|w| w.certified);
            Ok(!witnessed)
        }
        Property::SchmidtLe(r) => {
            if gen.family == GeneratorFamily::Tau {
                return Err(Error::domain("Schmidt rule covers rho trajectories only"));
            }
            let x = abc_of_t(gen, t);
            let spec = MapSpec::Rho(RhoSpec::new(x.at, x.bt, x.ct, x.dt));
            let k = schmidt_number_structured(&spec)
                .map_err(|e| Error::domain(format!("at t = {}: {e}", g15(t))))?;
            Ok(k <= r)
        }
    }
}

/// Scans `property` on `steps` equally spaced times in `[0, t_max]` and
/// classifies the true-set.
///
/// A true-set that is not a right half-line is reported as a
/// property violation rather than smoothed over. A crossing is refined by
/// [`transition_time`] for PPT of `rho` generators that meet its
/// preconditions, and by bisection on the property otherwise.
pub fn trichotomy_scan(
    gen: &GeneratorSpec,
    property: Property,
    t_max: f64,
    steps: usize,
    tol: f64,
) -> Result<TrichotomyResult> {
    if steps < 2 {
        return Err(Error::domain("scan needs at least 2 steps"));
    }
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::domain("scan needs a finite t_max > 0"));
    }
    let times: Vec<f64> = (0..steps)
        .map(|i| t_max * i as f64 / (steps - 1) as f64)
        .collect();
    let flags = times
        .par_iter()
        .map(|&t| property_holds(gen, property, t, tol))
        .collect::<Result<Vec<bool>>>()?;
    let scan_grid: Vec<(f64, bool)> = times.iter().copied().zip(flags.iter().copied()).collect();

    let first_true = flags.iter().position(|&f| f);
    if let Some(k) = first_true {
        if let Some(j) = flags[k..].iter().position(|&f| !f) {
            return Err(Error::PropertyViolation(format!(
                "{property:?} holds at t = {} but fails again at t = {}",
                g15(times[k]),
                g15(times[k + j])
            )));
        }
    }
    let verdict = match first_true {
        None => TrichotomyVerdict::NeverHolds,
        Some(0) => TrichotomyVerdict::AlwaysHolds,
        Some(k) => {
            let (lo, hi) = (times[k - 1], times[k]);
            let t0 = if property == Property::Ppt && transition_preconditions(gen).is_ok() {
                let t0 = transition_time(gen, tol)?;
                if t0 < lo || t0 > hi {
                    return Err(Error::PropertyViolation(format!(
                        "closed-form transition {} lies outside the scan crossing [{}, {}]",
                        g15(t0),
                        g15(lo),
                        g15(hi)
                    )));
                }
                t0
            } else {
                bisect_property(gen, property, lo, hi, tol)?
            };
            TrichotomyVerdict::TransitionAt { t0 }
        }
    };
    Ok(TrichotomyResult {
        property,
        verdict,
        scan_grid,
    })
}

fn bisect_property(
    gen: &GeneratorSpec,
    property: Property,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64> {
    while hi - lo > 1e-12 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if property_holds(gen, property, mid, tol)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// One row of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub at: f64,
    pub bt: f64,
    pub ct: f64,
    pub dt: f64,
    pub min_eig_choi: f64,
    pub min_eig_pt_choi: f64,
    pub cp: bool,
    pub ppt: bool,
}

pub fn trajectory_point(gen: &GeneratorSpec, t: f64, tol: f64) -> Result<TrajectoryPoint> {
    let x = abc_of_t(gen, t);
    let choi = choi_matrix(&evolve(gen, t));
    let pt = choi.partial_transpose();
    let min_eig_choi = min_eigenvalue(&choi.mat, tol)?;
    let min_eig_pt_choi = min_eigenvalue(&pt, tol)?;
    let cp = min_eig_choi >= psd_threshold(&choi.mat, tol);
    Ok(TrajectoryPoint {
        t,
        at: x.at,
        bt: x.bt,
        ct: x.ct,
        dt: x.dt,
        min_eig_choi,
        min_eig_pt_choi,
        cp,
        ppt: cp && min_eig_pt_choi >= psd_threshold(&pt, tol),
    })
}

/// `steps` equally spaced points on `[0, t_max]`, evaluated in parallel and
/// returned in time order.
pub fn trajectory(
    gen: &GeneratorSpec,
    t_max: f64,
    steps: usize,
    tol: f64,
) -> Result<Vec<TrajectoryPoint>> {
    if steps == 0 {
        return Ok(Vec::new());
    }
    let denom = (steps.max(2) - 1) as f64;
    (0..steps)
        .into_par_iter()
        .map(|i| trajectory_point(gen, t_max * i as f64 / denom, tol))
        .collect()
}

pub fn trajectory_csv_header() -> &'static str {
    "t,at,bt,ct,dt,min_eig_choi,min_eig_pt_choi,cp,ppt"
}

pub fn trajectory_csv(points: &[TrajectoryPoint]) -> String {
    let mut out = String::from(trajectory_csv_header());
    out.push('\n');
    for p in points {
        let row = [
            p.t,
            p.at,
            p.bt,
            p.ct,
            p.dt,
            p.min_eig_choi,
            p.min_eig_pt_choi,
        ]
        .iter()
        .map(|&x| g15(x))
        .collect::<Vec<_>>()
        .join(",");
        out.push_str(&format!("{row},{},{}\n", p.cp, p.ppt));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    #[test]
    fn never_ppt_for_diagonal_generator() {
        let r = trichotomy_scan(
            &GeneratorSpec::rho(1.0, 0.0, 0.0, 1.0),
            Property::Ppt,
            10.0,
            101,
            TOL,
        )
        .unwrap();
        assert_eq!(r.verdict, TrichotomyVerdict::NeverHolds);
    }

    #[test]
    fn always_cp_for_diagonal_generator() {
        let r = trichotomy_scan(
            &GeneratorSpec::rho(1.5, 0.0, 0.0, 0.5),
            Property::Cp,
            5.0,
            51,
            TOL,
        )
        .unwrap();
        assert_eq!(r.verdict, TrichotomyVerdict::AlwaysHolds);
    }

    #[test]
    fn ppt_transition_uses_closed_form() {
        let gen = GeneratorSpec::rho(1.0, 1.0, 1.0, 1.0);
        let r = trichotomy_scan(&gen, Property::Ppt, 3.0, 300, TOL).unwrap();
        let t0 = transition_time(&gen, TOL).unwrap();
        assert_eq!(r.verdict, TrichotomyVerdict::TransitionAt { t0 });
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains(&format!(r#""t0":"{}""#, g15(t0))));
        let back: TrichotomyResult = serde_json::from_str(&json).unwrap();
        assert_eq!(back.scan_grid, r.scan_grid);
    }

    #[test]
    fn bisection_fallback_matches_closed_form() {
        let gen = GeneratorSpec::rho(1.0, 1.0, 1.0, 1.0);
        let t0 = transition_time(&gen, TOL).unwrap();
        let b = bisect_property(&gen, Property::Ppt, 0.0, 2.0, TOL).unwrap();
        assert!((b - t0).abs() < 1e-4, "{b} vs {t0}");
    }

    #[test]
    fn schmidt_rule_along_trajectory() {
        // a = 0 > d: the structured rule gives 3 at every t > 0
        let gen = GeneratorSpec::rho(0.0, 0.5, 0.5, -1.0);
        for t in [0.5, 1.0, 2.0] {
            assert!(!property_holds(&gen, Property::SchmidtLe(2), t, TOL).unwrap());
            assert!(property_holds(&gen, Property::SchmidtLe(3), t, TOL).unwrap());
        }
    }

    #[test]
    fn trajectory_rows_in_order() {
        let pts = trajectory(&GeneratorSpec::rho(1.0, 1.0, 1.0, 1.0), 3.0, 31, TOL).unwrap();
        assert_eq!(pts.len(), 31);
        assert!(pts.windows(2).all(|w| w[0].t < w[1].t));
        assert_eq!(pts[0].t, 0.0);
        assert_eq!(pts[30].t, 3.0);
        let flips = pts.windows(2).filter(|w| w[0].ppt != w[1].ppt).count();
        assert_eq!(flips, 1);
        let csv = trajectory_csv(&pts);
        assert_eq!(csv.lines().count(), 32);
    }

    #[test]
    fn scan_rejects_bad_grids() {
        let gen = GeneratorSpec::rho(1.0, 1.0, 1.0, 1.0);
        assert!(trichotomy_scan(&gen, Property::Ppt, 1.0, 1, TOL).is_err());
        assert!(trichotomy_scan(&gen, Property::Ppt, -1.0, 10, TOL).is_err());
    }
}
