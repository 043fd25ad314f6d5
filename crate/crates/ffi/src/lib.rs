//! C ABI over `hypotest`.
//!
//! Every function returns an [`HtStatus`]; results go through out-pointers.
//! On a non-OK status a message is kept in thread-local storage and can be
//! read with [`ht_last_error`]. Strings returned by the library are owned by
//! the caller and must be released with [`ht_string_free`]; sweep reports
//! with [`ht_report_free`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hypotest::hyp2f1::{self, EvalConfig, ParamTriple};
use hypotest::inequalities::{self, CheckOptions, ParamKind, Params, Point, PointKind, PointPair, TheoremId};
use hypotest::specfun;
use hypotest::verifier::{run_sweep_with, SweepReport, SweepSpec};
use hypotest::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HtStatus {
    Ok = 0,
    /// A check or sweep ran to completion and something failed.
    Failures = 1,
    /// Domain, regime or configuration error.
    Domain = 2,
    Hypothesis = 3,
    /// No convergence, overflow or a degenerate functional.
    Numeric = 4,
    NullPointer = 5,
    InvalidArgument = 6,
    Panic = 7,
}

/// Result of [`ht_eval`].
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct HtEvalResult {
    pub value: f64,
    pub abs_error_est: f64,
    pub terms_used: u64,
}

/// Result of [`ht_check`]. Absent bounds and margins are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct HtCheckResult {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub margin_lower: f64,
    pub margin_upper: f64,
    pub eval_error_budget: f64,
    pub pass: bool,
    pub strictness_unresolved: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct HtTotals {
    pub checks: u64,
    pub passed: u64,
    pub failed: u64,
    pub errors: u64,
    pub skipped: u64,
    pub strictness_unresolved: u64,
}

/// Opaque sweep report.
pub struct HtSweepReport {
    inner: SweepReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(HtStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::HypothesisViolation { .. } => HtStatus::Hypothesis,
            e if e.is_input_error() => HtStatus::Domain,
            _ => HtStatus::Numeric,
        };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(HtStatus::NullPointer, format!("{what} is NULL"))
}

/// Run `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<HtStatus, Fail>) -> HtStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HtStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(())
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail(HtStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

fn into_c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Fail(HtStatus::InvalidArgument, "string contains NUL".into()))
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn ht_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ht_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `F(a, b; c; x)` for `x` in `[0, 1)`.
///
/// # Safety
/// `out` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ht_eval(a: f64, b: f64, c: f64, x: f64, out: *mut HtEvalResult) -> HtStatus {
    guard(|| {
        let t = ParamTriple::new(a, b, c)?;
        let r = hyp2f1::eval_with(&t, x, &EvalConfig::DEFAULT)?;
        write(
            out,
            HtEvalResult {
                value: r.value,
                abs_error_est: r.abs_error_est,
                terms_used: r.terms_used as u64,
            },
        )?;
        Ok(HtStatus::Ok)
    })
}

/// # Safety
/// `out` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ht_gamma(x: f64, out: *mut f64) -> HtStatus {
    guard(|| {
        write(out, specfun::gamma(x)?.value)?;
        Ok(HtStatus::Ok)
    })
}

/// # Safety
/// `out` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ht_beta(x: f64, y: f64, out: *mut f64) -> HtStatus {
    guard(|| {
        write(out, specfun::beta(x, y)?.value)?;
        Ok(HtStatus::Ok)
    })
}

/// `R(a, b) = -2 γ - ψ(a) - ψ(b)`.
///
/// # Safety
/// `out` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ht_r_coeff(a: f64, b: f64, out: *mut f64) -> HtStatus {
    guard(|| {
        write(out, specfun::r_coeff(a, b)?.value)?;
        Ok(HtStatus::Ok)
    })
}

/// Check theorem `id` (e.g. `"T3_5_1"`).
///
/// Triple predicates take `(p0, p1, p2) = (a, b, c)`; pair predicates take
/// `(p0, p1) = (c, d)` and ignore `p2`. Point predicates use `(x, y)`;
/// scalar ones take `t = x`. Returns `Ok` if the predicate holds and
/// `Failures` if it does not; `out` is filled in both cases.
///
/// # Safety
/// `id` must be NULL or a NUL-terminated string; `out` NULL or valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn ht_check(
    id: *const c_char,
    p0: f64,
    p1: f64,
    p2: f64,
    x: f64,
    y: f64,
    out: *mut HtCheckResult,
) -> HtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let id: TheoremId = read_str(id, "theorem id")?.parse()?;
        let params = match id.param_kind() {
            ParamKind::Triple => Params::Triple { a: p0, b: p1, c: p2 },
            ParamKind::Pair => Params::Pair { c: p0, d: p1 },
        };
        let point = match id.point_kind() {
            PointKind::Pair => Point::Pair(PointPair::new(x, y)?),
            PointKind::Scalar => Point::Scalar(x),
            PointKind::None => Point::None,
        };
        let r = inequalities::check(id, &params, &point, &CheckOptions::default())?;
        let nan = |v: Option<f64>| v.unwrap_or(f64::NAN);
        write(
            out,
            HtCheckResult {
                value: r.value,
                lower: nan(r.lower),
                upper: nan(r.upper),
                margin_lower: nan(r.margin_lower),
                margin_upper: nan(r.margin_upper),
                eval_error_budget: r.eval_error_budget,
                pass: r.pass,
                strictness_unresolved: r.strictness_unresolved,
            },
        )?;
        Ok(if r.pass { HtStatus::Ok } else { HtStatus::Failures })
    })
}

/// Run the sweep described by the JSON document `spec_json` on `threads`
/// workers (0 means one per core). On `Ok` or `Failures` `*out` receives a
/// report to be released with [`ht_report_free`]; otherwise it is set to
/// NULL.
///
/// # Safety
/// `spec_json` must be NULL or a NUL-terminated string; `out` NULL or valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn ht_sweep_run_json(
    spec_json: *const c_char,
    threads: u32,
    out: *mut *mut HtSweepReport,
) -> HtStatus {
    guard(|| {
        write(out, ptr::null_mut())?;
        let spec = SweepSpec::from_json(read_str(spec_json, "spec")?)?;
        let threads = (threads > 0).then_some(threads as usize);
        let inner = run_sweep_with(&spec, &CheckOptions::default(), threads)?;
        let status = if inner.passed() { HtStatus::Ok } else { HtStatus::Failures };
        out.write(Box::into_raw(Box::new(HtSweepReport { inner })));
        Ok(status)
    })
}

unsafe fn report<'a>(r: *const HtSweepReport) -> Result<&'a SweepReport, Fail> {
    r.as_ref().map(|r| &r.inner).ok_or_else(|| null("report"))
}

/// # Safety
/// `report` must be NULL or a live report; `out` NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ht_report_totals(report_ptr: *const HtSweepReport, out: *mut HtTotals) -> HtStatus {
    guard(|| {
        let t = &report(report_ptr)?.totals;
        write(
            out,
            HtTotals {
                checks: t.checks as u64,
                passed: t.passed as u64,
                failed: t.failed as u64,
                errors: t.errors as u64,
                skipped: t.skipped as u64,
                strictness_unresolved: t.strictness_unresolved as u64,
            },
        )?;
        Ok(HtStatus::Ok)
    })
}

/// The report as JSON; free with [`ht_string_free`].
///
/// # Safety
/// `report` must be NULL or a live report; `out` NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ht_report_to_json(report_ptr: *const HtSweepReport, out: *mut *mut c_char) -> HtStatus {
    guard(|| {
        let r = report(report_ptr)?;
        let s = serde_json::to_string_pretty(r).map_err(|e| Fail(HtStatus::Numeric, e.to_string()))?;
        write(out, into_c_string(s)?)?;
        Ok(HtStatus::Ok)
    })
}

/// Per-check records as CSV; free with [`ht_string_free`].
///
/// # Safety
/// `report` must be NULL or a live report; `out` NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ht_report_to_csv(report_ptr: *const HtSweepReport, out: *mut *mut c_char) -> HtStatus {
    guard(|| {
        let s = report(report_ptr)?.to_csv_string()?;
        write(out, into_c_string(s)?)?;
        Ok(HtStatus::Ok)
    })
}

/// # Safety
/// `report` must be NULL or a report from [`ht_sweep_run_json`], not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn ht_report_free(report_ptr: *mut HtSweepReport) {
    if !report_ptr.is_null() {
        drop(Box::from_raw(report_ptr));
    }
}
