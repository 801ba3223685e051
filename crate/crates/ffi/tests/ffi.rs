//! Exercises the C ABI from Rust (the functions are plain extern "C"
//! symbols) and, as a cross-language check, compiles and runs a small C
//! program against the generated header and shared library.

use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use confray_ffi::*;

fn cstr(text: &str) -> CString {
    CString::new(text).unwrap()
}

unsafe fn take_string(ptr: *mut c_char) -> String {
    assert!(!ptr.is_null());
    let owned = CStr::from_ptr(ptr).to_string_lossy().into_owned();
    confray_string_free(ptr);
    owned
}

unsafe fn last_error() -> String {
    take_string(confray_last_error_message())
}

#[test]
fn field_round_trip_and_analysis() {
    unsafe {
        let mut field: *mut ConfrayField = ptr::null_mut();
        let status = confray_field_parse(cstr("[x0, x1, x2, x3]").as_ptr(), &mut field);
        assert_eq!(status, ConfrayStatus::Ok);

        let mut rendered: *mut c_char = ptr::null_mut();
        assert_eq!(
            confray_field_render(field, &mut rendered),
            ConfrayStatus::Ok
        );
        assert_eq!(take_string(rendered), "[x0, x1, x2, x3]");

        let mut lambda: *mut c_char = ptr::null_mut();
        assert_eq!(
            confray_field_conformal_factor(field, &mut lambda),
            ConfrayStatus::Ok
        );
        assert_eq!(take_string(lambda), "-1");

        let mut decomposition: *mut c_char = ptr::null_mut();
        assert_eq!(
            confray_field_decompose(field, &mut decomposition),
            ConfrayStatus::Ok
        );
        let doc: serde_json::Value = serde_json::from_str(&take_string(decomposition)).unwrap();
        assert_eq!(doc["D"], "1");

        confray_field_free(field);
    }
}

#[test]
fn commutator_matches_standard_generator() {
    unsafe {
        let mut d: *mut ConfrayField = ptr::null_mut();
        let mut p0: *mut ConfrayField = ptr::null_mut();
        assert_eq!(
            confray_field_standard(cstr("D").as_ptr(), &mut d),
            ConfrayStatus::Ok
        );
        assert_eq!(
            confray_field_standard(cstr("P0").as_ptr(), &mut p0),
            ConfrayStatus::Ok
        );

        let mut commutator: *mut ConfrayField = ptr::null_mut();
        assert_eq!(
            confray_field_commutator(d, p0, &mut commutator),
            ConfrayStatus::Ok
        );
        let mut decomposition: *mut c_char = ptr::null_mut();
        assert_eq!(
            confray_field_decompose(commutator, &mut decomposition),
            ConfrayStatus::Ok
        );
        let doc: serde_json::Value = serde_json::from_str(&take_string(decomposition)).unwrap();
        assert_eq!(doc, serde_json::json!({"P0": "1"}));

        confray_field_free(commutator);
        confray_field_free(p0);
        confray_field_free(d);
    }
}

#[test]
fn error_paths_set_messages() {
    unsafe {
        let mut field: *mut ConfrayField = ptr::null_mut();
        let status = confray_field_parse(cstr("[x0, oops]").as_ptr(), &mut field);
        assert_eq!(status, ConfrayStatus::ParseError);
        assert!(last_error().contains("1:6"));

        assert_eq!(
            confray_field_standard(cstr("Q9").as_ptr(), &mut field),
            ConfrayStatus::UnknownName
        );

        // non-conformal field reports the residual
        assert_eq!(
            confray_field_parse(cstr("[x1, 0, 0, 0]").as_ptr(), &mut field),
            ConfrayStatus::Ok
        );
        let mut lambda: *mut c_char = ptr::null_mut();
        assert_eq!(
            confray_field_conformal_factor(field, &mut lambda),
            ConfrayStatus::NotConformal
        );
        assert!(last_error().contains("residual"));
        confray_field_free(field);

        // NULL arguments are rejected, not dereferenced
        assert_eq!(
            confray_field_parse(ptr::null(), &mut field),
            ConfrayStatus::NullArgument
        );
        assert_eq!(
            confray_field_render(ptr::null(), &mut lambda),
            ConfrayStatus::NullArgument
        );
    }
}

#[test]
fn state_loading_and_report() {
    unsafe {
        let json = cstr(
            r#"{"alpha":"1","rays":[
                {"origin":["1","2","0","0"],"momentum":["1","1","0","0"]},
                {"origin":["1","2","0","0"],"momentum":["1","-1","0","0"]}]}"#,
        );
        let mut state: *mut ConfrayState = ptr::null_mut();
        assert_eq!(
            confray_state_from_json(json.as_ptr(), &mut state),
            ConfrayStatus::Ok
        );

        let mut report: *mut c_char = ptr::null_mut();
        assert_eq!(
            confray_state_report_json(state, &mut report),
            ConfrayStatus::Ok
        );
        let doc: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
        assert_eq!(doc["mass_squared"], "4");
        assert_eq!(doc["position"], serde_json::json!(["1", "2", "0", "0"]));
        confray_state_free(state);

        // parallel rays surface as a massless error
        let massless = cstr(
            r#"{"alpha":"1","rays":[
                {"origin":["0","0","0","0"],"momentum":["1","1","0","0"]},
                {"origin":["3","0","1","0"],"momentum":["2","2","0","0"]}]}"#,
        );
        assert_eq!(
            confray_state_from_json(massless.as_ptr(), &mut state),
            ConfrayStatus::Massless
        );
    }
}

#[test]
fn shift_report_with_evaluation() {
    unsafe {
        let mut report: *mut c_char = ptr::null_mut();
        let status = confray_shift_report_json(
            cstr("C0").as_ptr(),
            cstr("1").as_ptr(),
            cstr(r#"["0","0","0","0"]"#).as_ptr(),
            cstr(r#"["2","0","0","0"]"#).as_ptr(),
            &mut report,
        );
        assert_eq!(status, ConfrayStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
        assert_eq!(doc["kind"], "C0");
        assert_eq!(doc["evaluations"][0]["position_shift"][0], "1/4");

        // evaluation at a null total momentum is an error
        let status = confray_shift_report_json(
            cstr("C0").as_ptr(),
            cstr("1").as_ptr(),
            cstr(r#"["0","0","0","0"]"#).as_ptr(),
            cstr(r#"["1","1","0","0"]"#).as_ptr(),
            &mut report,
        );
        assert_eq!(status, ConfrayStatus::EvaluationError);
    }
}

#[test]
fn suite_runner_reports_status() {
    unsafe {
        let mut report: *mut c_char = ptr::null_mut();
        let status = confray_run_suite(
            cstr("canonical").as_ptr(),
            7,
            5,
            cstr("1").as_ptr(),
            cstr("exact").as_ptr(),
            &mut report,
        );
        assert_eq!(status, ConfrayStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
        assert_eq!(doc["suite"], "canonical");
        assert_eq!(doc["seed"], 7);

        let status = confray_run_suite(
            cstr("bogus").as_ptr(),
            0,
            5,
            cstr("1").as_ptr(),
            cstr("exact").as_ptr(),
            &mut report,
        );
        assert_eq!(status, ConfrayStatus::UnknownName);

        let status = confray_run_suite(
            cstr("rays").as_ptr(),
            0,
            0,
            cstr("1").as_ptr(),
            cstr("exact").as_ptr(),
            &mut report,
        );
        assert_eq!(status, ConfrayStatus::BadConfig);
    }
}

#[test]
fn version_is_static() {
    let version = unsafe { CStr::from_ptr(confray_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

/// Compile and run a C client against the generated header and the cdylib.
#[test]
fn c_client_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include_dir = manifest.join("include");
    // target/debug holds the cdylib; tests run from target/debug/deps
    let lib_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    assert!(
        lib_dir.join("libconfray_ffi.so").exists(),
        "cdylib not found in {}",
        lib_dir.display()
    );

    let scratch = std::env::temp_dir().join("confray-ffi-c-client");
    std::fs::create_dir_all(&scratch).unwrap();
    let source = scratch.join("client.c");
    std::fs::write(
        &source,
        r#"
#include <stdio.h>
#include <string.h>
#include "confray.h"

int main(void) {
    ConfrayField *field = NULL;
    if (confray_field_parse("C1", &field) != CONFRAY_STATUS_OK) return 1;

    char *lambda = NULL;
    if (confray_field_conformal_factor(field, &lambda) != CONFRAY_STATUS_OK) return 2;
    if (strcmp(lambda, "2*x1") != 0) { printf("lambda=%s\n", lambda); return 3; }
    confray_string_free(lambda);
    confray_field_free(field);

    char *report = NULL;
    if (confray_run_suite("conformal-factor", 0, 2, "7/3", "exact", &report)
        != CONFRAY_STATUS_OK) return 4;
    if (strstr(report, "\"failures\": []") == NULL) { printf("%s\n", report); return 5; }
    confray_string_free(report);

    puts("c client ok");
    return 0;
}
"#,
    )
    .unwrap();

    let binary = scratch.join("client");
    let compile = Command::new("cc")
        .arg(&source)
        .arg("-I")
        .arg(&include_dir)
        .arg("-L")
        .arg(&lib_dir)
        .arg("-lconfray_ffi")
        .arg("-o")
        .arg(&binary)
        .output()
        .expect("cc is available");
    assert!(
        compile.status.success(),
        "cc failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&binary)
        .env("LD_LIBRARY_PATH", &lib_dir)
        .output()
        .unwrap();
    assert!(
        run.status.success(),
        "client exited {:?}: {}",
        run.status,
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "c client ok");
}
