// SPDX-License-Identifier: Apache-2.0

//! C ABI for `choi-dynamics`.
//!
//! Every function returns a [`ChoiStatus`]. On failure the message is kept
//! per thread and can be read with [`choi_last_error`]. Results that own
//! memory are returned through opaque handles, each with its own `_free`
//! function. Strings returned by the library are freed with
//! [`choi_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use choi_dynamics::choi::{classify, ClassificationReport, Separability};
use choi_dynamics::foliated::MapSpec;
use choi_dynamics::semigroup::{abc_of_t, transition_time, GeneratorSpec};
use choi_dynamics::uet::{construct_ppt, PptConstruction, QStructure, TupleMode};
use choi_dynamics::Error;

/// Outcome of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChoiStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Construction = 4,
    Numerical = 5,
    Panic = 6,
}

/// Separability verdict of a report.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChoiSeparability {
    Yes = 0,
    No = 1,
    Undecidable = 2,
}

/// Analytic verdicts of a report; `positive` is -1 when not populated.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChoiVerdicts {
    pub positive: i32,
    pub completely_positive: bool,
    pub completely_copositive: bool,
    pub ppt: bool,
    pub separable: ChoiSeparability,
    pub choi_rank: usize,
    pub all_agree: bool,
}

/// Opaque classification report.
pub struct ChoiReport(ClassificationReport);

/// Opaque PPT construction.
pub struct ChoiPpt(PptConstruction);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ChoiStatus {
    match e {
        Error::Domain(_) | Error::Validation(_) => ChoiStatus::Domain,
        Error::Size(_) | Error::Parse(_) => ChoiStatus::InvalidArgument,
        Error::Construction(_) => ChoiStatus::Construction,
        Error::NotHermitian { .. }
        | Error::NonFinite { .. }
        | Error::Divergence(_)
        | Error::PropertyViolation(_) => ChoiStatus::Numerical,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (ChoiStatus, String)>) -> ChoiStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ChoiStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            ChoiStatus::Panic
        }
    }
}

fn lib(e: Error) -> (ChoiStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (ChoiStatus, String) {
    (ChoiStatus::NullPointer, format!("{name} is NULL"))
}

/// # Safety
/// `s` must be NULL or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, name: &str) -> Result<&'a str, (ChoiStatus, String)> {
    if s.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (ChoiStatus::InvalidArgument, format!("{name} is not UTF-8")))
}

/// # Safety
/// `p` must be NULL or point to four readable doubles.
unsafe fn read_params(p: *const f64) -> Result<[f64; 4], (ChoiStatus, String)> {
    if p.is_null() {
        return Err(null("params"));
    }
    let s = std::slice::from_raw_parts(p, 4);
    Ok([s[0], s[1], s[2], s[3]])
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn choi_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn choi_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Classifies `family[params]` (`"rho"`, `"tau"` or `"theta"`).
///
/// # Safety
/// `family` must be a NUL-terminated string, `params` must point to four
/// doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn choi_classify(
    family: *const c_char,
    params: *const f64,
    tol: f64,
    out: *mut *mut ChoiReport,
) -> ChoiStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let family = read_str(family, "family")?;
        let spec = MapSpec::from_family(family, read_params(params)?).map_err(lib)?;
        let report = classify(&spec, tol).map_err(lib)?;
        *out = Box::into_raw(Box::new(ChoiReport(report)));
        Ok(())
    })
}

/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn choi_report_verdicts(
    report: *const ChoiReport,
    out: *mut ChoiVerdicts,
) -> ChoiStatus {
    guard(|| {
        let r = &report.as_ref().ok_or_else(|| null("report"))?.0;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ChoiVerdicts {
            positive: r.positive.map_or(-1, |v| v.analytic as i32),
            completely_positive: r.completely_positive.analytic,
            completely_copositive: r.completely_copositive.analytic,
            ppt: r.ppt.analytic,
            separable: match r.separable {
                Separability::DecidedYes => ChoiSeparability::Yes,
                Separability::DecidedNo => ChoiSeparability::No,
                Separability::Undecidable => ChoiSeparability::Undecidable,
            },
            choi_rank: r.choi_rank,
            all_agree: r.all_agree(),
        };
        Ok(())
    })
}

/// The full report as JSON; free with [`choi_string_free`].
///
/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn choi_report_json(
    report: *const ChoiReport,
    out: *mut *mut c_char,
) -> ChoiStatus {
    guard(|| {
        let r = &report.as_ref().ok_or_else(|| null("report"))?.0;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let json = serde_json::to_string(r).map_err(|e| (ChoiStatus::Numerical, e.to_string()))?;
        *out = to_c_string(json);
        Ok(())
    })
}

/// # Safety
/// `report` must be NULL or a handle from [`choi_classify`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn choi_report_free(report: *mut ChoiReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Time at which `e^{t·rho[a,b,c,d]}` becomes PPT.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn choi_transition_time(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    tol: f64,
    out: *mut f64,
) -> ChoiStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = transition_time(&GeneratorSpec::rho(a, b, c, d), tol).map_err(lib)?;
        Ok(())
    })
}

/// `(a(t), b(t), c(t), d(t))` of `e^{t·rho[params]}` written to `out[0..4]`.
///
/// # Safety
/// `params` must point to four doubles and `out` to four writable doubles.
#[no_mangle]
pub unsafe extern "C" fn choi_evolve_params(
    params: *const f64,
    t: f64,
    out: *mut f64,
) -> ChoiStatus {
    guard(|| {
        let [a, b, c, d] = read_params(params)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let x = abc_of_t(&GeneratorSpec::rho(a, b, c, d), t);
        std::slice::from_raw_parts_mut(out, 4).copy_from_slice(&[x.at, x.bt, x.ct, x.dt]);
        Ok(())
    })
}

/// Builds an `n²×n²` PPT matrix with the reversal permutation as witness.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn choi_construct_ppt(
    n: usize,
    seed: u64,
    zero_tuple: bool,
    out: *mut *mut ChoiPpt,
) -> ChoiStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        let mode = if zero_tuple {
            TupleMode::Zero
        } else {
            TupleMode::Random
        };
        let built = construct_ppt(n, &QStructure::reversal(n), seed, mode).map_err(lib)?;
        *out = Box::into_raw(Box::new(ChoiPpt(built)));
        Ok(())
    })
}

/// Side of the matrix, the shift `a0` and the smallest eigenvalues of the
/// matrix and of its partial transpose. Any output pointer may be NULL.
///
/// # Safety
/// `ppt` must be a live handle; non-NULL outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn choi_ppt_summary(
    ppt: *const ChoiPpt,
    side: *mut usize,
    a0: *mut f64,
    min_eig: *mut f64,
    min_eig_pt: *mut f64,
) -> ChoiStatus {
    guard(|| {
        let p = &ppt.as_ref().ok_or_else(|| null("ppt"))?.0;
        if let Some(s) = side.as_mut() {
            *s = p.matrix.rows();
        }
        if let Some(x) = a0.as_mut() {
            *x = p.a0;
        }
        if let Some(x) = min_eig.as_mut() {
            *x = p.eigenvalues[0];
        }
        if let Some(x) = min_eig_pt.as_mut() {
            *x = p.pt_eigenvalues[0];
        }
        Ok(())
    })
}

/// Copies the matrix in row-major order as interleaved `(re, im)` pairs
/// into `buf`, which must hold `2·side²` doubles.
///
/// # Safety
/// `ppt` must be a live handle and `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn choi_ppt_matrix(
    ppt: *const ChoiPpt,
    buf: *mut f64,
    len: usize,
) -> ChoiStatus {
    guard(|| {
        let p = &ppt.as_ref().ok_or_else(|| null("ppt"))?.0;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let data = p.matrix.data();
        if len < 2 * data.len() {
            return Err((
                ChoiStatus::InvalidArgument,
                format!("buffer holds {len} doubles, need {}", 2 * data.len()),
            ));
        }
        let out = std::slice::from_raw_parts_mut(buf, 2 * data.len());
        for (k, z) in data.iter().enumerate() {
            out[2 * k] = z.re;
            out[2 * k + 1] = z.im;
        }
        Ok(())
    })
}

/// # Safety
/// `ppt` must be NULL or a handle from [`choi_construct_ppt`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn choi_ppt_free(ppt: *mut ChoiPpt) {
    if !ppt.is_null() {
        drop(Box::from_raw(ppt));
    }
}
