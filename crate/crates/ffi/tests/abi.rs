//! Exercises the C ABI through its exported functions: success paths, every
//! error code, and handle lifecycle.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use statesum_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ss_last_error()) }
        .to_str()
        .unwrap()
        .to_string()
}

fn parse_complex(json: &str) -> (i32, *mut SsComplex) {
    let c = CString::new(json).unwrap();
    let mut out: *mut SsComplex = ptr::null_mut();
    let code = unsafe { ss_complex_parse(c.as_ptr(), &mut out) };
    (code, out)
}

fn parse_category(json: &str) -> (i32, *mut SsCategory) {
    let c = CString::new(json).unwrap();
    let mut out: *mut SsCategory = ptr::null_mut();
    let code = unsafe { ss_category_parse(c.as_ptr(), &mut out) };
    (code, out)
}

fn preset(name: &str) -> *mut SsCategory {
    let c = CString::new(name).unwrap();
    let mut out: *mut SsCategory = ptr::null_mut();
    let code = unsafe { ss_category_preset(c.as_ptr(), &mut out) };
    assert_eq!(code, SS_OK, "{}", last_error());
    out
}

fn boundary_delta5_json() -> String {
    let cx = statesum::simplicial::fixtures::boundary_delta5();
    cx.to_json().to_string()
}

fn compute(cx: *const SsComplex, cat: *const SsCategory, mode: i32) -> Result<String, i32> {
    let mut out: *mut c_char = ptr::null_mut();
    let code = unsafe { ss_compute(cx, cat, mode, 0, &mut out) };
    if code != SS_OK {
        assert!(out.is_null());
        return Err(code);
    }
    let s = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_string();
    unsafe { ss_string_free(out) };
    Ok(s)
}

#[test]
fn computes_known_value_through_the_abi() {
    let (code, cx) = parse_complex(&boundary_delta5_json());
    assert_eq!(code, SS_OK, "{}", last_error());
    let cat = preset("dw_z2");
    assert_eq!(compute(cx, cat, 0), Ok("1/2".to_string()));
    unsafe {
        ss_category_free(cat);
        ss_complex_free(cx);
    }
}

#[test]
fn reduced_mode_matches_full_mode() {
    let (_, cx) = parse_complex(&boundary_delta5_json());
    let cat = preset("semion");
    let full = compute(cx, cat, 0).unwrap();
    let reduced = compute(cx, cat, 1).unwrap();
    assert_eq!(full, reduced);
    unsafe {
        ss_category_free(cat);
        ss_complex_free(cx);
    }
}

#[test]
fn category_json_parses_like_the_preset() {
    let (code, cat) = parse_category(r#"{"generator": "dw", "group": "Z2"}"#);
    assert_eq!(code, SS_OK, "{}", last_error());
    let (_, cx) = parse_complex(&boundary_delta5_json());
    assert_eq!(compute(cx, cat, 0), Ok("1/2".to_string()));
    unsafe {
        ss_category_free(cat);
        ss_complex_free(cx);
    }
}

#[test]
fn malformed_json_reports_parse_error() {
    let (code, out) = parse_complex("{ not json");
    assert_eq!(code, SS_ERR_PARSE);
    assert!(out.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn open_complex_reports_validation_error() {
    let (code, out) =
        parse_complex(r#"{"vertices":["a","b","c","d","e"],"facets":[["a","b","c","d","e"]]}"#);
    assert_eq!(code, SS_ERR_VALIDATION);
    assert!(out.is_null());
    assert!(last_error().contains("not closed"));
}

#[test]
fn unknown_preset_reports_parse_error() {
    let c = CString::new("no_such_category").unwrap();
    let mut out: *mut SsCategory = ptr::null_mut();
    let code = unsafe { ss_category_preset(c.as_ptr(), &mut out) };
    assert_eq!(code, SS_ERR_PARSE);
    assert!(out.is_null());
}

#[test]
fn null_arguments_report_null_error() {
    let mut out: *mut SsComplex = ptr::null_mut();
    assert_eq!(
        unsafe { ss_complex_parse(ptr::null(), &mut out) },
        SS_ERR_NULL
    );
    let (_, cx) = parse_complex(&boundary_delta5_json());
    let mut s: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { ss_compute(cx, ptr::null(), 0, 0, &mut s) },
        SS_ERR_NULL
    );
    unsafe { ss_complex_free(cx) };
}

#[test]
fn reduced_mode_on_group_cocycle_category_is_a_validation_error() {
    let (_, cx) = parse_complex(&boundary_delta5_json());
    let cat = preset("dw_z2");
    assert_eq!(compute(cx, cat, 1), Err(SS_ERR_VALIDATION));
    assert!(last_error().contains("reduced"));
    unsafe {
        ss_category_free(cat);
        ss_complex_free(cx);
    }
}

#[test]
fn header_declares_every_exported_symbol() {
    let header = include_str!("../include/statesum.h");
    for sym in [
        "ss_last_error",
        "ss_complex_parse",
        "ss_complex_free",
        "ss_category_parse",
        "ss_category_preset",
        "ss_category_free",
        "ss_compute",
        "ss_string_free",
    ] {
        assert!(header.contains(sym), "header is missing {sym}");
    }
}
