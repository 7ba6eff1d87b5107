// SPDX-License-Identifier: Apache-2.0

//! Parameter grids and classification sweeps over them.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::choi::{classify, ClassificationReport};
use crate::error::{Error, Result};
use crate::foliated::MapSpec;
use crate::format::{g15, parse_real};

/// Largest number of grid points a sweep accepts.
pub const MAX_GRID_POINTS: usize = 10_000_000;

/// Inclusive range `start, start + step, …` up to `stop`.
///
/// `start > stop` gives an empty range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl ParamRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::domain("range bounds must be finite"));
        }
        if step <= 0.0 {
            return Err(Error::domain(format!("range step must be > 0, got {step}")));
        }
        Ok(ParamRange { start, stop, step })
    }

    pub fn single(x: f64) -> Self {
        ParamRange {
            start: x,
            stop: x,
            step: 1.0,
        }
    }

    pub fn len(&self) -> usize {
        if self.start > self.stop {
            return 0;
        }
        // absorb round-off so that 0:3:0.25 has 13 points
        let span = (self.stop - self.start) / self.step;
        let n = (span + 1e-9 * span.max(1.0)).floor();
        if n >= MAX_GRID_POINTS as f64 {
            MAX_GRID_POINTS + 1
        } else {
            n as usize + 1
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The `i`-th point, computed as `start + i·step` without accumulation.
    pub fn value(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }
}

/// `start:stop:step`, or a single value.
impl FromStr for ParamRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [x] => Ok(ParamRange::single(parse_real(x)?)),
            [a, b, c] => ParamRange::new(parse_real(a)?, parse_real(b)?, parse_real(c)?),
            _ => Err(Error::Parse(format!(
                "range {s:?} must be a number or start:stop:step"
            ))),
        }
    }
}

impl fmt::Display for ParamRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}",
            g15(self.start),
            g15(self.stop),
            g15(self.step)
        )
    }
}

/// A product grid over the four parameters of one family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub family: String,
    pub ranges: [ParamRange; 4],
}

impl SweepGrid {
    pub fn new(family: &str, ranges: [ParamRange; 4]) -> Result<Self> {
        MapSpec::from_family(family, [0.0; 4])?;
        let grid = SweepGrid {
            family: family.to_string(),
            ranges,
        };
        let total = ranges
            .iter()
            .try_fold(1usize, |acc, r| acc.checked_mul(r.len()));
        match total {
            Some(n) if n <= MAX_GRID_POINTS => Ok(grid),
            _ => Err(Error::domain(format!(
                "grid has more than {MAX_GRID_POINTS} points"
            ))),
        }
    }

    pub fn len(&self) -> usize {
        self.ranges.iter().map(ParamRange::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Point `i` in lexicographic order, the first parameter outermost.
    pub fn point(&self, mut i: usize) -> [f64; 4] {
        let mut p = [0.0; 4];
        for k in (0..4).rev() {
            let n = self.ranges[k].len();
            p[k] = self.ranges[k].value(i % n);
            i /= n;
        }
        p
    }

    pub fn spec(&self, i: usize) -> Result<MapSpec> {
        MapSpec::from_family(&self.family, self.point(i))
    }

    pub fn csv_header(&self) -> String {
        let probe = MapSpec::from_family(&self.family, [0.0; 4]).expect("family checked in new");
        ClassificationReport::csv_header(&probe)
    }
}

/// Classifies every grid point, in parallel, returning reports in grid
/// order.
pub fn sweep(grid: &SweepGrid, tol: f64) -> Result<Vec<ClassificationReport>> {
    (0..grid.len())
        .into_par_iter()
        .map(|i| classify(&grid.spec(i)?, tol))
        .collect()
}

/// CSV with a header line and one row per report.
pub fn sweep_csv(grid: &SweepGrid, reports: &[ClassificationReport]) -> String {
    let mut out = grid.csv_header();
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        let r: ParamRange = "0:3:0.25".parse().unwrap();
        assert_eq!(r.len(), 13);
        assert_eq!(r.value(12), 3.0);
        let r: ParamRange = "-1.5:1.5:0.25".parse().unwrap();
        assert_eq!(r.len(), 13);
        let r: ParamRange = "2".parse().unwrap();
        assert_eq!((r.len(), r.value(0)), (1, 2.0));
        let r: ParamRange = "1:0:0.5".parse().unwrap();
        assert!(r.is_empty());
        assert!("0:1:0".parse::<ParamRange>().is_err());
        assert!("0:1".parse::<ParamRange>().is_err());
        assert!("a:1:2".parse::<ParamRange>().is_err());
        assert_eq!("0:1:0.1".parse::<ParamRange>().unwrap().len(), 11);
    }

    #[test]
    fn lexicographic_order() {
        let r = |s: &str| s.parse::<ParamRange>().unwrap();
        let g = SweepGrid::new("rho", [r("0:1:1"), r("5"), r("0:2:1"), r("-1")]).unwrap();
        assert_eq!(g.len(), 6);
        let pts: Vec<[f64; 4]> = (0..6).map(|i| g.point(i)).collect();
        assert_eq!(pts[0], [0.0, 5.0, 0.0, -1.0]);
        assert_eq!(pts[2], [0.0, 5.0, 2.0, -1.0]);
        assert_eq!(pts[3], [1.0, 5.0, 0.0, -1.0]);
    }

    #[test]
    fn guard_and_family() {
        let big = ParamRange::new(0.0, 1e6, 1.0).unwrap();
        let one = ParamRange::single(0.0);
        assert!(SweepGrid::new("rho", [big, big, one, one]).is_err());
        assert!(SweepGrid::new("sigma", [one; 4]).is_err());
        let empty = ParamRange::new(1.0, 0.0, 1.0).unwrap();
        let g = SweepGrid::new("theta", [empty, one, one, one]).unwrap();
        let reports = sweep(&g, 1e-9).unwrap();
        assert_eq!(sweep_csv(&g, &reports).lines().count(), 1);
    }

    #[test]
    fn small_sweep_agrees() {
        let r = |s: &str| s.parse::<ParamRange>().unwrap();
        let g = SweepGrid::new("rho", [r("0:2:1"), r("0:2:1"), r("0:2:1"), r("-1:1:1")]).unwrap();
        let reports = sweep(&g, 1e-9).unwrap();
        assert_eq!(reports.len(), 81);
        assert!(reports.iter().all(ClassificationReport::all_agree));
        let csv = sweep_csv(&g, &reports);
        assert_eq!(csv.lines().count(), 82);
        assert!(csv.lines().nth(1).unwrap().starts_with("rho,0,0,0,-1,"));
    }
}
