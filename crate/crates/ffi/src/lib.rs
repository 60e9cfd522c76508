//! C ABI over the statesum library.
//!
//! Handles are opaque pointers owned by the library; every constructor has a
//! matching `_free`.  Functions return a status code and write results
//! through out-pointers; `ss_last_error` returns a thread-local message for
//! the most recent failure.  Codes follow the command-line convention:
//! 2 parse, 3 validation, 4 reduced-mode self-check.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use statesum::category::{load_category, CatError, Fusion2CatData};
use statesum::category::generators::preset_category;
use statesum::simplicial::{complex_from_json, OrderedOrientedComplex, SimplicialError};
use statesum::statesum::{evaluate, Mode, StateSumError, StateSumOptions};

pub const SS_OK: i32 = 0;
pub const SS_ERR_NULL: i32 = 1;
pub const SS_ERR_PARSE: i32 = 2;
pub const SS_ERR_VALIDATION: i32 = 3;
pub const SS_ERR_SELF_CHECK: i32 = 4;
pub const SS_ERR_UTF8: i32 = 5;

/// An oriented complex ready for evaluation.
pub struct SsComplex(OrderedOrientedComplex);

/// A validated category.
pub struct SsCategory(Fusion2CatData);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(code: i32, msg: &str) -> i32 {
    set_error(msg);
    code
}

fn cat_code(e: &CatError) -> i32 {
    match e {
        CatError::Parse(_) | CatError::Io(_) => SS_ERR_PARSE,
        _ => SS_ERR_VALIDATION,
    }
}

fn simp_code(e: &SimplicialError) -> i32 {
    match e {
        SimplicialError::Parse(_) => SS_ERR_PARSE,
        _ => SS_ERR_VALIDATION,
    }
}

fn sum_code(e: &StateSumError) -> i32 {
    match e {
        StateSumError::Cat(c) => cat_code(c),
        StateSumError::Simplicial(s) => simp_code(s),
        StateSumError::ReductionSelfCheckFailed(_) => SS_ERR_SELF_CHECK,
        _ => SS_ERR_VALIDATION,
    }
}

/// Last error message for this thread; valid until the next failing call.
#[no_mangle]
pub extern "C" fn ss_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

unsafe fn utf8_arg<'a>(s: *const c_char) -> Result<&'a str, i32> {
    if s.is_null() {
        return Err(fail(SS_ERR_NULL, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(SS_ERR_UTF8, "string argument is not UTF-8"))
}

/// Parse and validate a triangulation from JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_complex_parse(
    json: *const c_char,
    out: *mut *mut SsComplex,
) -> i32 {
    if out.is_null() {
        return fail(SS_ERR_NULL, "null out pointer");
    }
    *out = ptr::null_mut();
    let text = match utf8_arg(json) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let v: serde_json::Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => return fail(SS_ERR_PARSE, &e.to_string()),
    };
    let (cx, order) = match complex_from_json(&v) {
        Ok(x) => x,
        Err(e) => return fail(simp_code(&e), &e.to_string()),
    };
    if let Err(e) = cx.validate_singular_4manifold() {
        return fail(simp_code(&e), &e.to_string());
    }
    match OrderedOrientedComplex::orient(cx, order) {
        Ok(oc) => {
            *out = Box::into_raw(Box::new(SsComplex(oc)));
            SS_OK
        }
        Err(e) => fail(simp_code(&e), &e.to_string()),
    }
}

/// # Safety
/// `handle` must come from `ss_complex_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ss_complex_free(handle: *mut SsComplex) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Parse and validate a category from JSON text (generator or explicit form).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_category_parse(
    json: *const c_char,
    out: *mut *mut SsCategory,
) -> i32 {
    if out.is_null() {
        return fail(SS_ERR_NULL, "null out pointer");
    }
    *out = ptr::null_mut();
    let text = match utf8_arg(json) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let v: serde_json::Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => return fail(SS_ERR_PARSE, &e.to_string()),
    };
    let cat = match load_category(&v) {
        Ok(c) => c,
        Err(e) => return fail(cat_code(&e), &e.to_string()),
    };
    if let Err(e) = cat.validate() {
        return fail(cat_code(&e), &e.to_string());
    }
    *out = Box::into_raw(Box::new(SsCategory(cat)));
    SS_OK
}

/// Build a named preset category.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_category_preset(
    name: *const c_char,
    out: *mut *mut SsCategory,
) -> i32 {
    if out.is_null() {
        return fail(SS_ERR_NULL, "null out pointer");
    }
    *out = ptr::null_mut();
    let name = match utf8_arg(name) {
        Ok(t) => t,
        Err(code) => return code,
    };
    match preset_category(name) {
        Some(cat) => {
            *out = Box::into_raw(Box::new(SsCategory(cat)));
            SS_OK
        }
        None => fail(SS_ERR_PARSE, &format!("unknown preset {name:?}")),
    }
}

/// # Safety
/// `handle` must come from a category constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ss_category_free(handle: *mut SsCategory) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Evaluate the invariant.  `mode` is 0 for full enumeration, 1 for the
/// reduced cohomology-class sum.  On success `*out` holds the exact value
/// formatted as a cyclotomic polynomial string; free it with
/// `ss_string_free`.
///
/// # Safety
/// `complex` and `category` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_compute(
    complex: *const SsComplex,
    category: *const SsCategory,
    mode: i32,
    seed: u64,
    out: *mut *mut c_char,
) -> i32 {
    if out.is_null() {
        return fail(SS_ERR_NULL, "null out pointer");
    }
    *out = ptr::null_mut();
    if complex.is_null() || category.is_null() {
        return fail(SS_ERR_NULL, "null handle");
    }
    let mode = match mode {
        0 => Mode::Full,
        1 => Mode::Reduced,
        other => return fail(SS_ERR_PARSE, &format!("unknown mode {other}")),
    };
    let opts = StateSumOptions {
        mode,
        seed,
        ..StateSumOptions::default()
    };
    match evaluate(&(*complex).0, &(*category).0, &opts) {
        Ok(z) => {
            let s = CString::new(z.to_string()).unwrap_or_default();
            *out = s.into_raw();
            SS_OK
        }
        Err(e) => fail(sum_code(&e), &e.to_string()),
    }
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ss_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_message_survives_nul_bytes() {
        set_error("a\0b");
        let msg = LAST_ERROR.with(|e| e.borrow().clone());
        assert_eq!(msg.to_str().unwrap(), "a b");
    }
}
