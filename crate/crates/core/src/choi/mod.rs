// SPDX-License-Identifier: Apache-2.0

//! Choi matrices and the classification of the `rho`, `tau` and `theta`
//! families.
//!
//! Every property gets two sub-verdicts. The analytic one comes from the
//! closed-form parameter inequalities; the numerical one from spectra of
//! the Choi matrix, its partial transpose, or a search over rank-one
//! inputs. A report whose sub-verdicts disagree is the library's main
//! self-test signal.

mod positivity;
mod structured;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foliated::{FoliatedMap, MapSpec, RhoSpec, TauSpec, ThetaSpec};
use crate::format::g15;
use crate::matrix::{
    min_eigenvalue, numerical_rank, partial_transpose, psd_threshold, BipartiteDims, CMat,
    DEFAULT_RANK_TOL,
};

pub use positivity::{positivity_search, PositivitySearch};
pub use structured::{
    central_block, choi_rank_analytic, pptes_witness, schmidt_above_two_flag,
    schmidt_number_structured, Witness,
};

/// `C = Σ E_jk ⊗ Λ(E_jk)` in the lexicographic product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    pub mat: CMat,
    pub dims: BipartiteDims,
    pub source: Option<MapSpec>,
}

impl ChoiMatrix {
    pub fn of_spec(spec: &MapSpec) -> Self {
        ChoiMatrix {
            source: Some(*spec),
            ..choi_matrix(&spec.build())
        }
    }

    pub fn partial_transpose(&self) -> CMat {
        partial_transpose(&self.mat, self.dims).expect("Choi matrix matches its dims")
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }
}

pub fn choi_matrix(map: &FoliatedMap) -> ChoiMatrix {
    let n = map.dim();
    let grid: Vec<Vec<CMat>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    map.apply(&CMat::unit(n, j, k))
                        .expect("basis element has map size")
                })
                .collect()
        })
        .collect();
    ChoiMatrix {
        mat: CMat::from_blocks(&grid).expect("square grid of equal blocks"),
        dims: BipartiteDims { m: n, n },
        source: None,
    }
}

/// Choi matrix of the map with row-major superoperator `s` on `M_n`.
pub fn choi_from_superoperator(s: &CMat, n: usize) -> Result<ChoiMatrix> {
    let side = n * n;
    if s.rows() != side || s.cols() != side {
        return Err(Error::size(format!(
            "superoperator on M_{n} must be {side}x{side}, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    let mat = CMat::from_fn(side, side, |row, col| {
        let (j, p) = (row / n, row % n);
        let (k, q) = (col / n, col % n);
        s[(p * n + q, j * n + k)]
    });
    Ok(ChoiMatrix {
        mat,
        dims: BipartiteDims { m: n, n },
        source: None,
    })
}

/// Analytic and numerical sub-verdicts for one property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub analytic: bool,
    /// Absent when no independent numerical test exists for the property.
    pub numerical: Option<bool>,
    pub agree: bool,
}

impl Verdict {
    pub fn new(analytic: bool, numerical: bool) -> Self {
        Verdict {
            analytic,
            numerical: Some(numerical),
            agree: analytic == numerical,
        }
    }

    pub fn analytic_only(analytic: bool) -> Self {
        Verdict {
            analytic,
            numerical: None,
            agree: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Separability {
    DecidedYes,
    DecidedNo,
    Undecidable,
}

impl Separability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Separability::DecidedYes => "decided_yes",
            Separability::DecidedNo => "decided_no",
            Separability::Undecidable => "undecidable",
        }
    }
}

/// Extra fields for a Choi matrix read as a bipartite state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateInfo {
    pub trace: f64,
    /// Trace one and PSD.
    pub density: Verdict,
    /// PPT and certified entangled by a witness.
    pub pptes: bool,
    /// The `d < a < 2d`, `2(b+c) < 2d − a` condition for `rho` states;
    /// absent for `tau`.
    pub schmidt_above_two: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub spec: MapSpec,
    pub tol: f64,
    /// Populated for the `d = −1` normalization and for `theta`.
    pub positive: Option<Verdict>,
    pub completely_positive: Verdict,
    pub completely_copositive: Verdict,
    pub ppt: Verdict,
    pub decomposable: Option<Verdict>,
    pub atomic: Option<Verdict>,
    pub separable: Separability,
    pub witness: Option<Witness>,
    pub choi_rank: usize,
    /// `None` when the parameters fall outside the closed-form rank table.
    pub choi_rank_analytic: Option<usize>,
    pub schmidt_number: Option<u8>,
    pub min_eig_choi: f64,
    pub min_eig_pt_choi: f64,
    /// Smallest eigenvalue found by the rank-one positivity search.
    pub positivity_min: Option<f64>,
    pub state: Option<StateInfo>,
}

impl ClassificationReport {
    /// `true` iff every populated pair of sub-verdicts agrees, the rank
    /// table matches the numerical rank where listed, and any witness was
    /// confirmed numerically.
    pub fn all_agree(&self) -> bool {
        let verdicts = [
            self.positive,
            Some(self.completely_positive),
            Some(self.completely_copositive),
            Some(self.ppt),
            self.decomposable,
            self.atomic,
            self.state.map(|s| s.density),
        ];
        verdicts.iter().flatten().all(|v| v.agree)
            && self
                .choi_rank_analytic
                .map_or(true, |r| r == self.choi_rank)
            && self.witness.map_or(true, |w| w.certified)
    }

    pub fn csv_header(spec: &MapSpec) -> String {
        let names = spec.param_names().join(",");
        format!(
            "family,{names},positive_a,positive_n,cp_a,cp_n,cocp_a,cocp_n,ppt,decomposable,atomic,separable,rank_a,rank_n,schmidt,agree"
        )
    }

    /// One CSV row; absent values print as empty fields.
    pub fn csv_row(&self) -> String {
        let b = |x: bool| if x { "true" } else { "false" };
        let ob = |x: Option<bool>| x.map(b).unwrap_or("");
        let params: Vec<String> = self.spec.params().iter().map(|&x| g15(x)).collect();
        [
            self.spec.family().to_string(),
            params.join(","),
            ob(self.positive.map(|v| v.analytic)).into(),
            ob(self.positive.and_then(|v| v.numerical)).into(),
            b(self.completely_positive.analytic).into(),
            ob(self.completely_positive.numerical).into(),
            b(self.completely_copositive.analytic).into(),
            ob(self.completely_copositive.numerical).into(),
            b(self.ppt.analytic).into(),
            ob(self.decomposable.map(|v| v.analytic)).into(),
            ob(self.atomic.map(|v| v.analytic)).into(),
            self.separable.as_str().into(),
            self.choi_rank_analytic
                .map(|r| r.to_string())
                .unwrap_or_default(),
            self.choi_rank.to_string(),
            self.schmidt_number
                .map(|s| s.to_string())
                .unwrap_or_default(),
            b(self.all_agree()).into(),
        ]
        .join(",")
    }
}

pub fn classify(spec: &MapSpec, tol: f64) -> Result<ClassificationReport> {
    match spec {
        MapSpec::Rho(s) => classify_rho(s, tol),
        MapSpec::Tau(s) => classify_tau(s, tol),
        MapSpec::Theta(s) => classify_theta(s, tol),
    }
}

fn require_nonnegative(names: &[&str], values: &[f64]) -> Result<()> {
    for (name, &x) in names.iter().zip(values) {
        if !x.is_finite() {
            return Err(Error::domain(format!("{name} must be finite")));
        }
        if x < 0.0 {
            return Err(Error::domain(format!(
                "{name} must be nonnegative, got {x}"
            )));
        }
    }
    Ok(())
}

/// Cho–Kye–Lee positivity of `rho[a,b,c]`.
fn choi_type_positive(a: f64, b: f64, c: f64) -> bool {
    a + b + c >= 2.0 && (!(0.0..=1.0).contains(&a) || b * c >= (1.0 - a).powi(2))
}

fn choi_type_decomposable(a: f64, b: f64, c: f64) -> Option<bool> {
    (0.0..2.0)
        .contains(&a)
        .then(|| b * c >= (1.0 - a / 2.0).powi(2))
}

/// Spectral facts shared by every report.
struct Spectra {
    min_eig_choi: f64,
    min_eig_pt: f64,
    cp: bool,
    cocp: bool,
    rank: usize,
}

fn spectra(spec: &MapSpec, tol: f64) -> Result<Spectra> {
    let choi = ChoiMatrix::of_spec(spec);
    let pt = choi.partial_transpose();
    let min_eig_choi = min_eigenvalue(&choi.mat, tol)?;
    let min_eig_pt = min_eigenvalue(&pt, tol)?;
    Ok(Spectra {
        cp: min_eig_choi >= psd_threshold(&choi.mat, tol),
        cocp: min_eig_pt >= psd_threshold(&pt, tol),
        rank: numerical_rank(&choi.mat, DEFAULT_RANK_TOL),
        min_eig_choi,
        min_eig_pt,
    })
}

fn positivity_verdict(spec: &MapSpec, analytic: bool, tol: f64) -> Result<(Verdict, f64)> {
    let search = positivity_search(&spec.build(), tol)?;
    Ok((
        Verdict::new(analytic, search.is_positive()),
        search.min_eigenvalue,
    ))
}

fn separability(d: f64, ppt: bool, witness: Option<&Witness>) -> Separability {
    if !ppt {
        Separability::DecidedNo
    } else if d == 0.0 {
        Separability::DecidedYes
    } else if witness.is_some_and(|w| w.certified) {
        Separability::DecidedNo
    } else {
        Separability::Undecidable
    }
}

/// Classifies `rho[a,b,c,d] = D(a,b,c) ⊕ d·Id`.
pub fn classify_rho(spec: &RhoSpec, tol: f64) -> Result<ClassificationReport> {
    let RhoSpec { a, b, c, d } = *spec;
    require_nonnegative(&["a", "b", "c"], &[a, b, c])?;
    if !d.is_finite() {
        return Err(Error::domain("d must be finite"));
    }
    let map_spec = MapSpec::Rho(*spec);
    let sp = spectra(&map_spec, tol)?;

    let cp_a = a >= d && a >= -2.0 * d;
    let cocp_a = b * c >= d * d;
    let (positive, positivity_min) = if d == -1.0 {
        let (v, m) = positivity_verdict(&map_spec, choi_type_positive(a, b, c), tol)?;
        (Some(v), Some(m))
    } else {
        (None, None)
    };
    let decomposable = if d == -1.0 {
        choi_type_decomposable(a, b, c).map(Verdict::analytic_only)
    } else {
        None
    };

    let ppt = Verdict::new(cp_a && cocp_a, sp.cp && sp.cocp);
    let witness = if d > 0.0 && cp_a && cocp_a {
        pptes_witness(spec, tol)?
    } else {
        None
    };

    Ok(ClassificationReport {
        spec: map_spec,
        tol,
        positive,
        completely_positive: Verdict::new(cp_a, sp.cp),
        completely_copositive: Verdict::new(cocp_a, sp.cocp),
        separable: separability(d, ppt.analytic, witness.as_ref()),
        ppt,
        decomposable,
        atomic: None,
        witness,
        choi_rank: sp.rank,
        choi_rank_analytic: choi_rank_analytic(&map_spec),
        schmidt_number: schmidt_number_structured(&map_spec).ok(),
        min_eig_choi: sp.min_eig_choi,
        min_eig_pt_choi: sp.min_eig_pt,
        positivity_min,
        state: None,
    })
}

/// Classifies `tau[a,b,c,d] = D(a,b,c) ⊕ d·transpose`.
///
/// `tau` is `rho` followed by the transpose, so positivity and
/// decomposability carry over unchanged while CP and co-CP swap.
pub fn classify_tau(spec: &TauSpec, tol: f64) -> Result<ClassificationReport> {
    let TauSpec { a, b, c, d } = *spec;
    require_nonnegative(&["a", "b", "c"], &[a, b, c])?;
    if !d.is_finite() {
        return Err(Error::domain("d must be finite"));
    }
    let map_spec = MapSpec::Tau(*spec);
    let sp = spectra(&map_spec, tol)?;

    let cp_a = b * c >= d * d;
    let cocp_a = a >= d && a >= -2.0 * d;
    let (positive, positivity_min) = if d == -1.0 {
        let (v, m) = positivity_verdict(&map_spec, choi_type_positive(a, b, c), tol)?;
        (Some(v), Some(m))
    } else {
        (None, None)
    };
    let decomposable = if d == -1.0 {
        choi_type_decomposable(a, b, c).map(Verdict::analytic_only)
    } else {
        None
    };

    let ppt = Verdict::new(cp_a && cocp_a, sp.cp && sp.cocp);
    // The Choi matrix of tau is the partial transpose of that of rho, and
    // entanglement survives partial transposition.
    let witness = if d > 0.0 && cp_a && cocp_a {
        pptes_witness(&spec.to_rho(), tol)?
    } else {
        None
    };

    Ok(ClassificationReport {
        spec: map_spec,
        tol,
        positive,
        completely_positive: Verdict::new(cp_a, sp.cp),
        completely_copositive: Verdict::new(cocp_a, sp.cocp),
        separable: separability(d, ppt.analytic, witness.as_ref()),
        ppt,
        decomposable,
        atomic: None,
        witness,
        choi_rank: sp.rank,
        choi_rank_analytic: choi_rank_analytic(&map_spec),
        schmidt_number: schmidt_number_structured(&map_spec).ok(),
        min_eig_choi: sp.min_eig_choi,
        min_eig_pt_choi: sp.min_eig_pt,
        positivity_min,
        state: None,
    })
}

/// Classifies `theta[a,c1,c2,c3] = T(a,c1,c2,c3) ⊕ (−Id)`.
///
/// The partial transpose of its Choi matrix has the principal block
/// `[[c2, −1], [−1, 0]]` on `(e2, e4)`, so `theta` is never co-CP.
pub fn classify_theta(spec: &ThetaSpec, tol: f64) -> Result<ClassificationReport> {
    let ThetaSpec { a, c1, c2, c3 } = *spec;
    require_nonnegative(&["a", "c1", "c2", "c3"], &[a, c1, c2, c3])?;
    let map_spec = MapSpec::Theta(*spec);
    let sp = spectra(&map_spec, tol)?;

    let cube = (2.0 - a).powi(3);
    let positive_a = a >= 1.0 && c1 * c2 * c3 >= cube;
    let cp_a = a >= 2.0;
    // At a = 2 the map is CP, hence not atomic.
    let atomic_a = (1.0..2.0).contains(&a) && c1 * c2 * c3 >= cube;
    let (positive, positivity_min) = positivity_verdict(&map_spec, positive_a, tol)?;
    let ppt = Verdict::new(false, sp.cp && sp.cocp);

    Ok(ClassificationReport {
        spec: map_spec,
        tol,
        positive: Some(positive),
        completely_positive: Verdict::new(cp_a, sp.cp),
        completely_copositive: Verdict::new(false, sp.cocp),
        separable: separability(1.0, ppt.analytic, None),
        ppt,
        decomposable: None,
        atomic: Some(Verdict::analytic_only(atomic_a)),
        witness: None,
        choi_rank: sp.rank,
        choi_rank_analytic: choi_rank_analytic(&map_spec),
        schmidt_number: schmidt_number_structured(&map_spec).ok(),
        min_eig_choi: sp.min_eig_choi,
        min_eig_pt_choi: sp.min_eig_pt,
        positivity_min: Some(positivity_min),
        state: None,
    })
}

/// Classifies the Choi matrix of a `rho` or `tau` spec as a bipartite
/// state. Requires `a + b + c = 1/3`, which makes the trace one.
pub fn classify_state(spec: &MapSpec, tol: f64) -> Result<ClassificationReport> {
    let [a, b, c, d] = spec.params();
    if matches!(spec, MapSpec::Theta(_)) {
        return Err(Error::domain(
            "state classification covers rho and tau only",
        ));
    }
    if ((a + b + c) - 1.0 / 3.0).abs() > 1e-12 {
        return Err(Error::domain(format!(
            "state normalization needs a + b + c = 1/3, got {}",
            g15(a + b + c)
        )));
    }
    let mut report = classify(spec, tol)?;
    let choi = ChoiMatrix::of_spec(spec);
    let trace = choi.trace();
    let density_a = report.completely_positive.analytic;
    let density_n =
        (trace - 1.0).abs() <= 1e-12 && report.completely_positive.numerical == Some(true);
    let pptes = report.ppt.analytic && report.witness.is_some_and(|w| w.certified);
    let schmidt_above_two = match spec {
        MapSpec::Rho(_) => Some(schmidt_above_two_flag(a, b, c, d)),
        _ => None,
    };
    report.state = Some(StateInfo {
        trace,
        density: Verdict::new(density_a, density_n),
        pptes,
        schmidt_above_two,
    });
    Ok(report)
}
