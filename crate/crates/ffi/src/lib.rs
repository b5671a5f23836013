//! C ABI over the decision pipeline.
//!
//! The interface is handle-based: build a job with [`cw_job_new`], configure
//! it with the setters, attach input JSON, run it, and read back a JSON
//! document. Strings returned through `out_json` are owned by the caller and
//! must be released with [`cw_string_free`]; error messages are owned by the
//! job and live until the next call on it.
//!
//! All functions are panic-safe: internal panics surface as
//! `CW_STATUS_INTERNAL_ERROR` instead of unwinding across the boundary.

#![allow(clippy::missing_safety_doc)] // pointer contracts are documented per function above each signature

use charwit::job::{run, Command, ExitKind, JobConfig, Mode};
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CwStatus {
    /// Success; for `cw_job_run` this means a definitive answer.
    Ok = 0,
    /// The job ran, but the supplied order is below the certification
    /// threshold; output JSON is still produced.
    Inconclusive = 1,
    /// A null handle or null string argument.
    NullPointer = 2,
    /// A string argument is not valid UTF-8.
    Utf8Error = 3,
    /// An argument value is out of range or unrecognized.
    InvalidArgument = 4,
    /// The input document is not valid JSON.
    ParseError = 5,
    /// The job failed; see `cw_job_last_error`.
    RunError = 6,
    /// A panic inside the library.
    InternalError = 7,
}

/// Opaque job handle.
pub struct CwJob {
    config: JobConfig,
    last_error: Option<CString>,
}

impl CwJob {
    fn set_error(&mut self, msg: String) {
        self.last_error = Some(CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap()));
    }
}

unsafe fn job_mut<'a>(job: *mut CwJob) -> Option<&'a mut CwJob> {
    unsafe { job.as_mut() }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, CwStatus> {
    if s.is_null() {
        return Err(CwStatus::NullPointer);
    }
    unsafe { CStr::from_ptr(s) }.to_str().map_err(|_| CwStatus::Utf8Error)
}

/// Creates a job for one of the commands: `decide`, `family`, `lemma9`,
/// `oracle-omega`, `oracle-casimir`, `roundtrip`. Returns null for an
/// unknown command. Free with `cw_job_free`.
#[no_mangle]
pub unsafe extern "C" fn cw_job_new(command: *const c_char) -> *mut CwJob {
    let Ok(name) = (unsafe { read_str(command) }) else {
        return std::ptr::null_mut();
    };
    match Command::parse(name) {
        Some(cmd) => Box::into_raw(Box::new(CwJob {
            config: JobConfig::new(cmd),
            last_error: None,
        })),
        None => std::ptr::null_mut(),
    }
}

/// Releases a job handle. Null is accepted.
#[no_mangle]
pub unsafe extern "C" fn cw_job_free(job: *mut CwJob) {
    if !job.is_null() {
        drop(unsafe { Box::from_raw(job) });
    }
}

/// Sets the truncation order (must be at least 1).
#[no_mangle]
pub unsafe extern "C" fn cw_job_set_order(job: *mut CwJob, order: u32) -> CwStatus {
    let Some(job) = (unsafe { job_mut(job) }) else {
        return CwStatus::NullPointer;
    };
    if order == 0 {
        job.set_error("order must be at least 1".into());
        return CwStatus::InvalidArgument;
    }
    job.config.order = order as usize;
    CwStatus::Ok
}

/// Sets the node budget for the decision procedure.
#[no_mangle]
pub unsafe extern "C" fn cw_job_set_max_nodes(job: *mut CwJob, max_nodes: u32) -> CwStatus {
    let Some(job) = (unsafe { job_mut(job) }) else {
        return CwStatus::NullPointer;
    };
    job.config.max_nodes = max_nodes as usize;
    CwStatus::Ok
}

/// Sets the arithmetic mode: `"exact"` or `"float"`.
#[no_mangle]
pub unsafe extern "C" fn cw_job_set_mode(job: *mut CwJob, mode: *const c_char) -> CwStatus {
    let Some(job) = (unsafe { job_mut(job) }) else {
        return CwStatus::NullPointer;
    };
    let name = match unsafe { read_str(mode) } {
        Ok(s) => s,
        Err(status) => return status,
    };
    match Mode::parse(name) {
        Some(m) => {
            job.config.mode = m;
            CwStatus::Ok
        }
        None => {
            job.set_error(format!("unknown mode {name:?}"));
            CwStatus::InvalidArgument
        }
    }
}

/// Sets the float-mode tolerance (must be positive).
#[no_mangle]
pub unsafe extern "C" fn cw_job_set_tolerance(job: *mut CwJob, tolerance: f64) -> CwStatus {
    let Some(job) = (unsafe { job_mut(job) }) else {
        return CwStatus::NullPointer;
    };
    if !(tolerance > 0.0) {
        job.set_error("tolerance must be positive".into());
        return CwStatus::InvalidArgument;
    }
    job.config.tolerance = tolerance;
    CwStatus::Ok
}

/// Sets the inclusive rank range for family construction.
#[no_mangle]
pub unsafe extern "C" fn cw_job_set_n_range(job: *mut CwJob, lo: u32, hi: u32) -> CwStatus {
    let Some(job) = (unsafe { job_mut(job) }) else {
        return CwStatus::NullPointer;
    };
    if lo > hi {
        job.set_error("empty rank range".into());
        return CwStatus::InvalidArgument;
    }
    job.config.n_range = Some((lo as usize, hi as usize));
    CwStatus::Ok
}

/// Attaches the input document as a JSON string.
#[no_mangle]
pub unsafe extern "C" fn cw_job_set_input_json(job: *mut CwJob, input: *const c_char) -> CwStatus {
    let Some(job) = (unsafe { job_mut(job) }) else {
        return CwStatus::NullPointer;
    };
    let text = match unsafe { read_str(input) } {
        Ok(s) => s,
        Err(status) => return status,
    };
    match serde_json::from_str::<serde_json::Value>(text) {
        Ok(value) => {
            job.config.input = Some(value);
            CwStatus::Ok
        }
        Err(e) => {
            job.set_error(format!("malformed input JSON: {e}"));
            CwStatus::ParseError
        }
    }
}

/// Runs the job. On `CW_STATUS_OK` and `CW_STATUS_INCONCLUSIVE`, `*out_json`
/// receives a NUL-terminated JSON document owned by the caller (release with
/// `cw_string_free`). On error, `*out_json` is set to null and the message
/// is available through `cw_job_last_error`.
#[no_mangle]
pub unsafe extern "C" fn cw_job_run(job: *mut CwJob, out_json: *mut *mut c_char) -> CwStatus {
    if out_json.is_null() {
        return CwStatus::NullPointer;
    }
    unsafe { *out_json = std::ptr::null_mut() };
    let Some(job) = (unsafe { job_mut(job) }) else {
        return CwStatus::NullPointer;
    };
    job.last_error = None;
    let result = catch_unwind(AssertUnwindSafe(|| run(&job.config)));
    match result {
        Ok(Ok(output)) => {
            let text = serde_json::to_string_pretty(&output.json).expect("serializable output");
            let cstr = match CString::new(text) {
                Ok(c) => c,
                Err(_) => {
                    job.set_error("output contained an interior NUL".into());
                    return CwStatus::InternalError;
                }
            };
            unsafe { *out_json = cstr.into_raw() };
            match output.exit {
                ExitKind::Definitive => CwStatus::Ok,
                ExitKind::Inconclusive => CwStatus::Inconclusive,
            }
        }
        Ok(Err(e)) => {
            job.set_error(e.to_string());
            CwStatus::RunError
        }
        Err(_) => {
            job.set_error("internal panic".into());
            CwStatus::InternalError
        }
    }
}

/// Last error message on this job, or null; owned by the job and valid
/// until the next call on it.
#[no_mangle]
pub unsafe extern "C" fn cw_job_last_error(job: *const CwJob) -> *const c_char {
    match unsafe { job.as_ref() }.and_then(|j| j.last_error.as_ref()) {
        Some(msg) => msg.as_ptr(),
        None => std::ptr::null(),
    }
}

/// Releases a string returned by this library. Null is accepted.
#[no_mangle]
pub unsafe extern "C" fn cw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn cw_version() -> *const c_char {
    concat!("charwit ", env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
