//! Exercises the C ABI through the exported symbols, the way a foreign
//! binding would: JSON in, status codes and JSON out, explicit frees.

use std::ffi::{c_int, CStr, CString};
use std::ptr;

use arrangelab_capi::{
    arrangelab_analyze_json, arrangelab_arrangement, arrangelab_arrangement_free,
    arrangelab_arrangement_from_json, arrangelab_arrangement_generate,
    arrangelab_arrangement_line_count, arrangelab_arrangement_to_json,
    arrangelab_last_error_message, arrangelab_restrict_json, arrangelab_status,
    arrangelab_string_free, arrangelab_verify_json, arrangelab_version,
};

fn take_string(ptr: *mut std::ffi::c_char) -> String {
    assert!(!ptr.is_null());
    let s = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string();
    unsafe { arrangelab_string_free(ptr) };
    s
}

#[test]
fn version_is_a_static_string() {
    let v = unsafe { CStr::from_ptr(arrangelab_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn parse_analyze_and_free() {
    let doc = CString::new(
        r#"{
  "field": { "kind": "rational" },
  "lines": [["1","0","0"], ["0","1","0"], ["0","0","1"],
            ["1","-1","0"], ["1","0","-1"], ["0","1","-1"]]
}"#,
    )
    .unwrap();
    let mut handle: *mut arrangelab_arrangement = ptr::null_mut();
    let status = unsafe { arrangelab_arrangement_from_json(doc.as_ptr(), &mut handle) };
    assert_eq!(status, arrangelab_status::ARRANGELAB_OK);
    assert_eq!(unsafe { arrangelab_arrangement_line_count(handle) }, 6);

    let mut out = ptr::null_mut();
    let status = unsafe { arrangelab_analyze_json(handle, &mut out) };
    assert_eq!(status, arrangelab_status::ARRANGELAB_OK);
    let report: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(report["report_version"], 1);
    assert_eq!(report["n2"], 3);
    assert_eq!(report["mdr"], 2);

    let mut rendered = ptr::null_mut();
    let status = unsafe { arrangelab_arrangement_to_json(handle, &mut rendered) };
    assert_eq!(status, arrangelab_status::ARRANGELAB_OK);
    assert!(take_string(rendered).contains("\"kind\": \"rational\""));

    unsafe { arrangelab_arrangement_free(handle) };
}

#[test]
fn generate_restrict_and_verify() {
    let spec = CString::new(r#"{"family":"monomial","n":4,"full":false}"#).unwrap();
    let mut handle: *mut arrangelab_arrangement = ptr::null_mut();
    let status = unsafe { arrangelab_arrangement_generate(spec.as_ptr(), &mut handle) };
    assert_eq!(status, arrangelab_status::ARRANGELAB_OK);
    assert_eq!(unsafe { arrangelab_arrangement_line_count(handle) }, 12);

    let mut out = ptr::null_mut();
    let status = unsafe { arrangelab_restrict_json(handle, 0, &mut out) };
    assert_eq!(status, arrangelab_status::ARRANGELAB_OK);
    let report: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(report["multiplicity_multiset"], serde_json::json!([3, 2, 2, 2, 2]));
    assert_eq!(report["exponents"], serde_json::json!([5, 6]));

    let mut out = ptr::null_mut();
    let mut all_hold: c_int = 0;
    let status = unsafe {
        arrangelab_verify_json(handle, ptr::null(), 0, &mut out, &mut all_hold)
    };
    assert_eq!(status, arrangelab_status::ARRANGELAB_OK);
    assert_eq!(all_hold, 1);
    let doc: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(doc["all_applicable_hold"], serde_json::json!(true));

    // out-of-range restriction index is a domain error with a message
    let mut out = ptr::null_mut();
    let status = unsafe { arrangelab_restrict_json(handle, 99, &mut out) };
    assert_eq!(status, arrangelab_status::ARRANGELAB_DOMAIN_ERROR);
    let msg = unsafe { CStr::from_ptr(arrangelab_last_error_message()) };
    assert!(msg.to_str().unwrap().contains("out of range"));

    unsafe { arrangelab_arrangement_free(handle) };
}

#[test]
fn error_paths_set_messages() {
    let mut handle: *mut arrangelab_arrangement = ptr::null_mut();
    let bad = CString::new("not json").unwrap();
    let status = unsafe { arrangelab_arrangement_from_json(bad.as_ptr(), &mut handle) };
    assert_eq!(status, arrangelab_status::ARRANGELAB_PARSE_ERROR);
    assert!(handle.is_null());

    let status = unsafe { arrangelab_arrangement_from_json(ptr::null(), &mut handle) };
    assert_eq!(status, arrangelab_status::ARRANGELAB_NULL_POINTER);

    let spec = CString::new(r#"{"family":"monomial","n":9,"full":false}"#).unwrap();
    let status = unsafe { arrangelab_arrangement_generate(spec.as_ptr(), &mut handle) };
    assert_eq!(status, arrangelab_status::ARRANGELAB_DOMAIN_ERROR);
    let msg = unsafe { CStr::from_ptr(arrangelab_last_error_message()) };
    assert!(msg.to_str().unwrap().contains("monomial"));
}

#[test]
fn generated_header_declares_the_surface() {
    let header = include_str!("../include/arrangelab.h");
    for symbol in [
        "arrangelab_arrangement_from_json",
        "arrangelab_arrangement_generate",
        "arrangelab_analyze_json",
        "arrangelab_restrict_json",
        "arrangelab_verify_json",
        "arrangelab_arrangement_free",
        "arrangelab_string_free",
        "ARRANGELAB_OK",
    ] {
        assert!(header.contains(symbol), "header is missing {symbol}");
    }
}
