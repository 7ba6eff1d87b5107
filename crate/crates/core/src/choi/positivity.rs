// SPDX-License-Identifier: Apache-2.0

//! Numerical positivity test for maps with a real diagonal part and a pure
//! off-diagonal action.
//!
//! A map is positive iff it sends every rank-one projection `vv*` to a PSD
//! matrix. Write `p_i = |v_i|²`. For `Λ = Λ₁ ⊕ s·Id` the image is
//! `diag(Λ₁p) + s·(vv* − diag(p))`, and conjugating by the diagonal unitary
//! of the phases of `v` turns it into the real symmetric matrix
//!
//! ```text
//! M(p) = diag(Λ₁p − s·p) + s·√p√pᵀ
//! ```
//!
//! The transpose kind gives `(vv*)ᵗ = v̄vᵀ`, which has the same moduli, so
//! `M(p)` is the same. Positivity is therefore `min_{p ∈ simplex} λ_min(M(p)) ≥ 0`,
//! which this module approximates from above by a simplex grid followed by
//! Nelder–Mead refinement. Every value it reports is attained, so a
//! negative result is a genuine counterexample.

use crate::error::{Error, Result};
use crate::foliated::FoliatedMap;

type Sym3 = [[f64; 3]; 3];

/// Outcome of [`positivity_search`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivitySearch {
    /// Smallest `λ_min(M(p))` found.
    pub min_eigenvalue: f64,
    /// The simplex point where it was found.
    pub argmin: [f64; 3],
    /// Values below this count as a violation.
    pub threshold: f64,
}

impl PositivitySearch {
    pub fn is_positive(&self) -> bool {
        self.min_eigenvalue >= self.threshold
    }
}

const GRID: usize = 24;
const LOG_STEPS: usize = 12;
const STARTS: usize = 4;
const NM_ITERS: usize = 240;

/// Searches for a rank-one input whose image has a negative eigenvalue.
///
/// Requires a 3×3 real diagonal part and an off-diagonal action that is a
/// real multiple of the identity or of the transpose. The search stops
/// early once a violation below the threshold is found.
pub fn positivity_search(map: &FoliatedMap, tol: f64) -> Result<PositivitySearch> {
    if map.dim() != 3 {
        return Err(Error::size(
            "positivity search is implemented for maps on M_3",
        ));
    }
    let (_, s) = map
        .offdiag()
        .kind()
        .ok_or_else(|| Error::domain("positivity search needs a pure off-diagonal action"))?;
    let l1 = map.lambda1();
    if !l1.is_real() || s.im != 0.0 {
        return Err(Error::domain(
            "positivity search needs real map coefficients",
        ));
    }
    let mut lam = [[0.0; 3]; 3];
    for (i, row) in lam.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = l1[(i, j)].re;
        }
    }
    let s = s.re;
    let scale = l1.max_abs().max(s.abs()).max(1.0);
    let threshold = -tol * scale;
    let f = |p: &[f64; 3]| sym3_min_eigenvalue(&image_matrix(&lam, s, p));

    let mut seeds: Vec<(f64, [f64; 3])> = candidate_points().map(|p| (f(&p), p)).collect();
    seeds.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut best = seeds[0];
    if best.0 < threshold {
        return Ok(PositivitySearch {
            min_eigenvalue: best.0,
            argmin: best.1,
            threshold,
        });
    }

    for &(_, p0) in seeds.iter().take(STARTS) {
        let u0 = p0.map(|x| x.max(1e-30).ln());
        let (val, u) = nelder_mead(|u| f(&softmax(u)), u0);
        if val < best.0 {
            best = (val, softmax(&u));
        }
        if best.0 < threshold {
            break;
        }
    }
    Ok(PositivitySearch {
        min_eigenvalue: best.0,
        argmin: best.1,
        threshold,
    })
}

fn image_matrix(lam: &Sym3, s: f64, p: &[f64; 3]) -> Sym3 {
    let q = p.map(|x| x.max(0.0).sqrt());
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = if i == j {
                (0..3).map(|k| lam[i][k] * p[k]).sum::<f64>()
            } else {
                s * q[i] * q[j]
            };
        }
    }
    m
}

/// Log coordinates keep the search able to reach the strongly graded
/// inputs `p₁ ≫ p₃ ≫ p₂` where violations of some maps live.
fn softmax(u: &[f64; 3]) -> [f64; 3] {
    let top = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e = u.map(|x| (x - top).max(-700.0).exp());
    let total: f64 = e.iter().sum();
    e.map(|x| x / total)
}

/// Barycentric grid plus a logarithmic grid `p ∝ (1, 10^-s, 10^-t)` in
/// every coordinate order, which covers inputs close to the boundary.
fn candidate_points() -> impl Iterator<Item = [f64; 3]> {
    let grid = (0..=GRID).flat_map(|i| {
        (0..=GRID - i).map(move |j| {
            let k = GRID - i - j;
            [i, j, k].map(|x| x as f64 / GRID as f64)
        })
    });
    let graded = (0..3).flat_map(|lead| {
        (0..=LOG_STEPS).flat_map(move |si| {
            (0..=LOG_STEPS).map(move |ti| {
                let mut p = [0.0; 3];
                p[lead] = 1.0;
                p[(lead + 1) % 3] = 10f64.powf(-(si as f64) * 0.5);
                p[(lead + 2) % 3] = 10f64.powf(-(ti as f64) * 0.5);
                let total: f64 = p.iter().sum();
                p.map(|x| x / total)
            })
        })
    });
    grid.chain(graded)
}

fn nelder_mead(f: impl Fn(&[f64; 3]) -> f64, x0: [f64; 3]) -> (f64, [f64; 3]) {
    let mut pts: Vec<[f64; 3]> = vec![x0];
    for i in 0..3 {
        let mut x = x0;
        x[i] += 1.0;
        pts.push(x);
    }
    let mut vals: Vec<f64> = pts.iter().map(&f).collect();

    for _ in 0..NM_ITERS {
        let mut order: Vec<usize> = (0..4).collect();
        order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        pts = order.iter().map(|&i| pts[i]).collect();
        vals = order.iter().map(|&i| vals[i]).collect();
        if (vals[3] - vals[0]).abs() <= 1e-15 * vals[0].abs().max(1e-300) {
            break;
        }

        let mut centroid = [0.0; 3];
        for p in &pts[..3] {
            for k in 0..3 {
                centroid[k] += p[k] / 3.0;
            }
        }
        let along = |t: f64| -> [f64; 3] {
            let mut x = [0.0; 3];
            for k in 0..3 {
                x[k] = centroid[k] + t * (pts[3][k] - centroid[k]);
            }
            x
        };

        let xr = along(-1.0);
        let fr = f(&xr);
        if fr < vals[0] {
            let xe = along(-2.0);
            let fe = f(&xe);
            if fe < fr {
                pts[3] = xe;
                vals[3] = fe;
            } else {
                pts[3] = xr;
                vals[3] = fr;
            }
        } else if fr < vals[2] {
            pts[3] = xr;
            vals[3] = fr;
        } else {
            let xc = if fr < vals[3] {
                along(-0.5)
            } else {
                along(0.5)
            };
            let fc = f(&xc);
            if fc < vals[3].min(fr) {
                pts[3] = xc;
                vals[3] = fc;
            } else {
                for i in 1..4 {
                    for k in 0..3 {
                        pts[i][k] = pts[0][k] + 0.5 * (pts[i][k] - pts[0][k]);
                    }
                    vals[i] = f(&pts[i]);
                }
            }
        }
    }
    let i = (0..4)
        .min_by(|&i, &j| vals[i].total_cmp(&vals[j]))
        .unwrap_or(0);
    (vals[i], pts[i])
}

/// Smallest eigenvalue of a real symmetric 3×3 matrix by cyclic Jacobi.
pub(crate) fn sym3_min_eigenvalue(m: &Sym3) -> f64 {
    let mut a = *m;
    for _ in 0..32 {
        let off = a[0][1].abs() + a[0][2].abs() + a[1][2].abs();
        let diag = a[0][0].abs() + a[1][1].abs() + a[2][2].abs();
        if off <= f64::EPSILON * 1e-2 * (diag + off) || off == 0.0 {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let apq = a[p][q];
            if apq == 0.0 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            for k in 0..3 {
                let akp = a[k][p];
                let akq = a[k][q];
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let apk = a[p][k];
                let aqk = a[q][k];
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
            a[p][q] = 0.0;
            a[q][p] = 0.0;
        }
    }
    a[0][0].min(a[1][1]).min(a[2][2])
}
