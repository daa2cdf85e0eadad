//! C ABI for `trapfn`.
//!
//! Every fallible call returns a [`TrapfnStatus`]; on failure a message is
//! kept per thread and can be read with [`trapfn_last_error`]. Convergence
//! studies are returned through the opaque [`TrapfnReport`] handle, which
//! the caller releases with [`trapfn_report_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use trapfn::catalog::{self, Function};
use trapfn::tables;
use trapfn::{ConvergenceReport, Error, ErrorKind, MeshSpec, ScaledReal};

/// Result codes. The numeric values match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrapfnStatus {
    Ok = 0,
    /// Null pointer, unknown function name or wrong parameter count.
    InvalidArgument = 1,
    /// Parameters outside the function's domain, or a pole.
    Domain = 2,
    /// Overflow, term cap, non-finite term or imaginary residual too large.
    Accuracy = 3,
    /// A golden-table comparison failed.
    CheckFailed = 4,
    /// The library panicked; this is a bug.
    Panic = 5,
}

/// One mesh level of a report: value `sig × 10^exp10` at mesh size `h`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapfnLevel {
    pub h: f64,
    pub sig: f64,
    pub exp10: i32,
    pub terms: usize,
}

/// Opaque convergence study.
pub struct TrapfnReport {
    report: ConvergenceReport<ScaledReal>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(TrapfnStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.kind() {
            ErrorKind::Domain => TrapfnStatus::Domain,
            ErrorKind::Accuracy => TrapfnStatus::Accuracy,
        };
        Failure(code, e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(TrapfnStatus::InvalidArgument, msg.into())
}

/// Runs `body`, turning errors and panics into status codes.
fn guard<F>(body: F) -> TrapfnStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            clear_last_error();
            TrapfnStatus::Ok
        }
        Ok(Err(Failure(code, msg))) => {
            set_last_error(msg);
            code
        }
        Err(_) => {
            set_last_error("internal panic".to_string());
            TrapfnStatus::Panic
        }
    }
}

unsafe fn function_from(name: *const c_char) -> Result<Function, Failure> {
    if name.is_null() {
        return Err(invalid("function name is NULL"));
    }
    let s = CStr::from_ptr(name)
        .to_str()
        .map_err(|_| invalid("function name is not UTF-8"))?;
    s.parse::<Function>().map_err(|e| invalid(e.to_string()))
}

unsafe fn params_from<'a>(f: Function, params: *const f64, n: usize) -> Result<&'a [f64], Failure> {
    let want = f.param_names().len();
    if n != want {
        return Err(invalid(format!(
            "{f} takes {want} parameters ({}), got {n}",
            f.param_names().join(", ")
        )));
    }
    if n == 0 {
        return Ok(&[]);
    }
    if params.is_null() {
        return Err(invalid("params is NULL"));
    }
    Ok(std::slice::from_raw_parts(params, n))
}

unsafe fn evaluate(name: *const c_char, params: *const f64, n_params: usize) -> Result<ScaledReal, Failure> {
    let f = function_from(name)?;
    let p = params_from(f, params, n_params)?;
    let plan = f.default_plan(p)?;
    Ok(catalog::converge(f, p, &plan, &MeshSpec::default())?.final_value)
}

/// Evaluates `function` at `params`, refining the mesh until two levels
/// agree, and stores the value as a double (which may be infinite or zero
/// when the result leaves the double range; see [`trapfn_eval_scaled`]).
///
/// Function names and parameter orders are those of the CLI, e.g.
/// `"gamma-p"` with `{s, x}` or `"chf"` with `{a, b, x}`.
///
/// # Safety
/// `function` must be a NUL-terminated string, `params` must point to
/// `n_params` doubles, and `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trapfn_eval(
    function: *const c_char,
    params: *const f64,
    n_params: usize,
    out_value: *mut f64,
) -> TrapfnStatus {
    guard(|| {
        if out_value.is_null() {
            return Err(invalid("out_value is NULL"));
        }
        let v = evaluate(function, params, n_params)?;
        *out_value = v.to_f64();
        Ok(())
    })
}

/// Like [`trapfn_eval`] but returns the value as `sig × 10^exp10`.
///
/// # Safety
/// As [`trapfn_eval`]; `out_sig` and `out_exp10` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trapfn_eval_scaled(
    function: *const c_char,
    params: *const f64,
    n_params: usize,
    out_sig: *mut f64,
    out_exp10: *mut i32,
) -> TrapfnStatus {
    guard(|| {
        if out_sig.is_null() || out_exp10.is_null() {
            return Err(invalid("output pointer is NULL"));
        }
        let v = evaluate(function, params, n_params)?;
        *out_sig = v.significand;
        *out_exp10 = v.exp10;
        Ok(())
    })
}

/// Runs a mesh-halving study over all requested levels.
///
/// `h0 <= 0` and `levels == 0` select the function's defaults. On success
/// `*out_report` owns a new report that must be released with
/// [`trapfn_report_free`].
///
/// # Safety
/// As [`trapfn_eval`]; `out_report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trapfn_converge(
    function: *const c_char,
    params: *const f64,
    n_params: usize,
    h0: f64,
    levels: usize,
    out_report: *mut *mut TrapfnReport,
) -> TrapfnStatus {
    guard(|| {
        if out_report.is_null() {
            return Err(invalid("out_report is NULL"));
        }
        *out_report = ptr::null_mut();
        let f = function_from(function)?;
        let p = params_from(f, params, n_params)?;
        let mut plan = f.default_plan(p)?;
        if h0 > 0.0 {
            plan.h0 = h0;
        }
        if levels > 0 {
            plan.max_levels = levels;
        }
        let report = catalog::sweep(f, p, &plan, &MeshSpec::default())?;
        *out_report = Box::into_raw(Box::new(TrapfnReport { report }));
        Ok(())
    })
}

/// Number of levels in `report` (0 for NULL).
///
/// # Safety
/// `report` must be NULL or a live handle from [`trapfn_converge`].
#[no_mangle]
pub unsafe extern "C" fn trapfn_report_level_count(report: *const TrapfnReport) -> usize {
    report.as_ref().map_or(0, |r| r.report.levels.len())
}

/// Copies level `index` into `*out`.
///
/// # Safety
/// `report` must be NULL or a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trapfn_report_level(
    report: *const TrapfnReport,
    index: usize,
    out: *mut TrapfnLevel,
) -> TrapfnStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| invalid("report is NULL"))?;
        if out.is_null() {
            return Err(invalid("out is NULL"));
        }
        let l = r.report.levels.get(index).ok_or_else(|| {
            invalid(format!("level {index} out of range (report has {})", r.report.levels.len()))
        })?;
        *out = TrapfnLevel {
            h: l.h,
            sig: l.value.significand,
            exp10: l.value.exp10,
            terms: l.terms_used,
        };
        Ok(())
    })
}

/// Whether the last two levels agreed to the default tolerance.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn trapfn_report_converged(report: *const TrapfnReport) -> bool {
    report.as_ref().is_some_and(|r| r.report.converged)
}

/// Final value as `sig × 10^exp10`.
///
/// # Safety
/// `report` must be NULL or a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn trapfn_report_final(
    report: *const TrapfnReport,
    out_sig: *mut f64,
    out_exp10: *mut i32,
) -> TrapfnStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| invalid("report is NULL"))?;
        if out_sig.is_null() || out_exp10.is_null() {
            return Err(invalid("output pointer is NULL"));
        }
        *out_sig = r.report.final_value.significand;
        *out_exp10 = r.report.final_value.exp10;
        Ok(())
    })
}

/// Releases a report. NULL is ignored.
///
/// # Safety
/// `report` must be NULL or a handle from [`trapfn_converge`] that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn trapfn_report_free(report: *mut TrapfnReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Recomputes golden table `id` (1 to 7) and compares the last printed row
/// of each column. Returns [`TrapfnStatus::CheckFailed`] if any cell is
/// outside its tolerance.
///
/// # Safety
/// `out_max_rel_dev` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn trapfn_table_check(id: u32, out_max_rel_dev: *mut f64) -> TrapfnStatus {
    guard(|| {
        let t = tables::table(id).ok_or_else(|| invalid(format!("no table {id}; expected 1 to 7")))?;
        let runs = tables::run_table(t, 1.0, None, &MeshSpec::default())?;
        let checks = tables::check_runs(&runs);
        let max = checks.iter().map(|c| c.rel_dev).fold(0.0, f64::max);
        if !out_max_rel_dev.is_null() {
            *out_max_rel_dev = max;
        }
        let failed = checks.iter().filter(|c| !c.passed()).count();
        if failed > 0 {
            return Err(Failure(
                TrapfnStatus::CheckFailed,
                format!("{failed} cells of table {id} outside tolerance (max rel dev {max:e})"),
            ));
        }
        Ok(())
    })
}

/// Message for the last failed call on this thread, or NULL after a
/// successful call. Valid until the next call into the library on the same
/// thread.
#[no_mangle]
pub extern "C" fn trapfn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn trapfn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
