//! C ABI over the verification library. Handles are opaque, every entry
//! point returns a status code, and string results stay owned by the
//! handle they came from. Panics are caught at the boundary and reported
//! as evaluation errors.

use finsler_lab::campaign::run_campaign;
use finsler_lab::config::parse_config;
use finsler_lab::report::CampaignReport;
use finsler_lab::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Status codes mirror the CLI exit contract, extended with argument
/// validation codes that only make sense at the ABI boundary.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FinlabStatus {
    Ok = 0,
    CheckFailed = 1,
    ConfigError = 2,
    EvalError = 3,
    NullArgument = 4,
    InvalidUtf8 = 5,
}

/// Opaque campaign handle: a parsed configuration plus, after execution,
/// the report and its serialized forms.
pub struct FinlabRun {
    cfg: finsler_lab::config::RunConfig,
    report: Option<CampaignReport>,
    json: Option<CString>,
    hash: Option<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(e: &Error) -> FinlabStatus {
    match e.exit_code() {
        2 => FinlabStatus::ConfigError,
        _ => FinlabStatus::EvalError,
    }
}

/// ABI revision; bump on any breaking change to this interface.
#[no_mangle]
pub extern "C" fn finlab_abi_version() -> u32 {
    1
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn finlab_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parse a JSON run configuration into a fresh handle. On success the
/// handle is written to `out` and must be released with `finlab_run_free`.
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` a valid
/// location to store a pointer.
#[no_mangle]
pub unsafe extern "C" fn finlab_run_new(
    config_json: *const c_char,
    out: *mut *mut FinlabRun,
) -> FinlabStatus {
    if config_json.is_null() || out.is_null() {
        set_error("null argument");
        return FinlabStatus::NullArgument;
    }
    let text = match CStr::from_ptr(config_json).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("configuration text is not valid UTF-8");
            return FinlabStatus::InvalidUtf8;
        }
    };
    match catch_unwind(|| parse_config(text)) {
        Ok(Ok(cfg)) => {
            let run = Box::new(FinlabRun {
                cfg,
                report: None,
                json: None,
                hash: None,
            });
            *out = Box::into_raw(run);
            FinlabStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic while parsing configuration");
            FinlabStatus::EvalError
        }
    }
}

/// Run the handle's configured checks. Returns Ok when every check
/// passed, CheckFailed when a tolerance was exceeded, EvalError when a
/// check errored or the campaign could not run.
///
/// # Safety
/// `run` must be a live pointer from `finlab_run_new`.
#[no_mangle]
pub unsafe extern "C" fn finlab_run_execute(run: *mut FinlabRun) -> FinlabStatus {
    let Some(run) = run.as_mut() else {
        set_error("null argument");
        return FinlabStatus::NullArgument;
    };
    let outcome = catch_unwind(AssertUnwindSafe(|| run_campaign(&run.cfg)));
    match outcome {
        Ok(Ok(report)) => {
            let json = serde_json_string(&report);
            run.json = CString::new(json).ok();
            run.hash = CString::new(report.content_hash.clone()).ok();
            let status = if report.any_errored() {
                set_error("one or more checks errored");
                FinlabStatus::EvalError
            } else if !report.all_passed() {
                set_error("one or more checks failed");
                FinlabStatus::CheckFailed
            } else {
                FinlabStatus::Ok
            };
            run.report = Some(report);
            status
        }
        Ok(Err(e)) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic while running checks");
            FinlabStatus::EvalError
        }
    }
}

fn serde_json_string(report: &CampaignReport) -> String {
    finsler_lab::report::to_json(report).unwrap_or_else(|e| {
        format!("{{\"serialization_error\": \"{e}\"}}")
    })
}

/// Serialized report of an executed run, owned by the handle; NULL until
/// `finlab_run_execute` produced a report.
///
/// # Safety
/// `run` must be a live pointer from `finlab_run_new`.
#[no_mangle]
pub unsafe extern "C" fn finlab_run_report_json(run: *const FinlabRun) -> *const c_char {
    match run.as_ref().and_then(|r| r.json.as_ref()) {
        Some(s) => s.as_ptr(),
        None => ptr::null(),
    }
}

/// Content hash of an executed run (hex SHA-256 over the clock-free
/// projection of the report); NULL until executed.
///
/// # Safety
/// `run` must be a live pointer from `finlab_run_new`.
#[no_mangle]
pub unsafe extern "C" fn finlab_run_content_hash(run: *const FinlabRun) -> *const c_char {
    match run.as_ref().and_then(|r| r.hash.as_ref()) {
        Some(s) => s.as_ptr(),
        None => ptr::null(),
    }
}

/// Number of checks the handle's configuration selects.
///
/// # Safety
/// `run` must be a live pointer from `finlab_run_new`.
#[no_mangle]
pub unsafe extern "C" fn finlab_run_check_count(run: *const FinlabRun) -> usize {
    match run.as_ref() {
        Some(r) => r.cfg.checks.len(),
        None => 0,
    }
}

/// Evaluate the handle's configured metric scalar at a chart point.
/// `x` and `y` must each hold the metric's dimension of coordinates.
///
/// # Safety
/// `run`, `x`, `y`, `out_l` must be live pointers; `x` and `y` must point
/// to `nx` and `ny` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn finlab_metric_value(
    run: *const FinlabRun,
    x: *const f64,
    nx: usize,
    y: *const f64,
    ny: usize,
    out_l: *mut f64,
) -> FinlabStatus {
    let Some(run) = run.as_ref() else {
        set_error("null argument");
        return FinlabStatus::NullArgument;
    };
    if x.is_null() || y.is_null() || out_l.is_null() {
        set_error("null argument");
        return FinlabStatus::NullArgument;
    }
    let n = run.cfg.metric.n;
    if nx != n || ny != n {
        set_error("coordinate length does not match the metric dimension");
        return FinlabStatus::ConfigError;
    }
    let xs = std::slice::from_raw_parts(x, nx);
    let ys = std::slice::from_raw_parts(y, ny);
    match catch_unwind(AssertUnwindSafe(|| run.cfg.metric.l_value(xs, ys))) {
        Ok(Ok(l)) => {
            *out_l = l;
            FinlabStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic while evaluating the metric");
            FinlabStatus::EvalError
        }
    }
}

/// Release a handle. NULL is a no-op.
///
/// # Safety
/// `run` must be NULL or a pointer from `finlab_run_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn finlab_run_free(run: *mut FinlabRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}
