//! Exercises the C entry points through their raw signatures.

use charwit_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn run_job(command: &str, input: &str, configure: impl Fn(*mut CwJob)) -> (CwStatus, Option<serde_json::Value>) {
    let cmd = CString::new(command).unwrap();
    let job = unsafe { cw_job_new(cmd.as_ptr()) };
    assert!(!job.is_null(), "command {command:?} should exist");
    let input_c = CString::new(input).unwrap();
    assert_eq!(unsafe { cw_job_set_input_json(job, input_c.as_ptr()) }, CwStatus::Ok);
    configure(job);
    let mut out: *mut std::ffi::c_char = ptr::null_mut();
    let status = unsafe { cw_job_run(job, &mut out) };
    let value = if out.is_null() {
        None
    } else {
        let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
        unsafe { cw_string_free(out) };
        Some(serde_json::from_str(&text).unwrap())
    };
    unsafe { cw_job_free(job) };
    (status, value)
}

#[test]
fn decide_through_the_c_interface() {
    let (status, value) = run_job(
        "decide",
        r#"{"difference": ["0", "10", "60", "370", "2100"]}"#,
        |job| {
            assert_eq!(unsafe { cw_job_set_max_nodes(job, 2) }, CwStatus::Ok);
        },
    );
    assert_eq!(status, CwStatus::Ok);
    let value = value.unwrap();
    assert_eq!(value["status"], "NONZERO_WITNESS");
    assert_eq!(value["witness"]["B"], serde_json::json!(["4"]));
    assert_eq!(value["witness"]["C"], serde_json::json!(["-1"]));
}

#[test]
fn float_mode_and_tolerance() {
    let (status, value) = run_job(
        "decide",
        r#"{"difference": [[0.0, 0.0], [10.0, 0.0], [60.0, 0.0], [370.0, 0.0], [2100.0, 0.0]]}"#,
        |job| {
            let mode = CString::new("float").unwrap();
            assert_eq!(unsafe { cw_job_set_mode(job, mode.as_ptr()) }, CwStatus::Ok);
            assert_eq!(unsafe { cw_job_set_tolerance(job, 1e-9) }, CwStatus::Ok);
            assert_eq!(unsafe { cw_job_set_max_nodes(job, 2) }, CwStatus::Ok);
        },
    );
    assert_eq!(status, CwStatus::Ok);
    assert_eq!(value.unwrap()["status"], "NONZERO_WITNESS");
}

#[test]
fn inconclusive_maps_to_its_own_status() {
    let (status, value) = run_job("decide", r#"{"difference": ["1", "2", "3"]}"#, |job| {
        assert_eq!(unsafe { cw_job_set_max_nodes(job, 2) }, CwStatus::Ok);
    });
    assert_eq!(status, CwStatus::Inconclusive);
    assert_eq!(value.unwrap()["status"], "INCONCLUSIVE");
}

#[test]
fn errors_carry_messages() {
    let cmd = CString::new("decide").unwrap();
    let job = unsafe { cw_job_new(cmd.as_ptr()) };
    // Run with no input.
    let mut out: *mut std::ffi::c_char = ptr::null_mut();
    let status = unsafe { cw_job_run(job, &mut out) };
    assert_eq!(status, CwStatus::RunError);
    assert!(out.is_null());
    let msg = unsafe { cw_job_last_error(job) };
    assert!(!msg.is_null());
    let text = unsafe { CStr::from_ptr(msg) }.to_str().unwrap();
    assert!(text.contains("input"), "got {text:?}");
    // Bad JSON is a parse error.
    let bad = CString::new("{not json").unwrap();
    assert_eq!(unsafe { cw_job_set_input_json(job, bad.as_ptr()) }, CwStatus::ParseError);
    unsafe { cw_job_free(job) };
}

#[test]
fn null_handling() {
    assert!(unsafe { cw_job_new(ptr::null()) }.is_null());
    let bad_cmd = CString::new("no-such-command").unwrap();
    assert!(unsafe { cw_job_new(bad_cmd.as_ptr()) }.is_null());
    assert_eq!(unsafe { cw_job_set_order(ptr::null_mut(), 5) }, CwStatus::NullPointer);
    let mut out: *mut std::ffi::c_char = ptr::null_mut();
    assert_eq!(unsafe { cw_job_run(ptr::null_mut(), &mut out) }, CwStatus::NullPointer);
    unsafe {
        cw_job_free(ptr::null_mut());
        cw_string_free(ptr::null_mut());
    }
}

#[test]
fn oracle_and_family_through_c() {
    let (status, value) = run_job("oracle-casimir", r#"{"lambda": ["3", "1"], "depth": 2}"#, |_| {});
    assert_eq!(status, CwStatus::Ok);
    assert_eq!(value.unwrap()["status"], "pass");

    let (status, value) = run_job(
        "family",
        r#"{"witness": {"B": ["4"], "C": ["-1"]}, "psi": {"moments": ["5", "17", "65", "257"]}}"#,
        |job| {
            assert_eq!(unsafe { cw_job_set_n_range(job, 3, 4) }, CwStatus::Ok);
        },
    );
    assert_eq!(status, CwStatus::Ok);
    assert_eq!(value.unwrap()["verification"]["status"], "pass");
}

#[test]
fn version_is_exposed() {
    let v = cw_version();
    assert!(!v.is_null());
    let text = unsafe { CStr::from_ptr(v) }.to_str().unwrap();
    assert!(text.starts_with("charwit "));
}
