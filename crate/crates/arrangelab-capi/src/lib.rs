//! C ABI for the arrangelab library.
//!
//! Arrangements travel through opaque handles; every result crosses the
//! boundary as a JSON document in the same schemas the CLI emits
//! (`report_version` 1). Functions return a status code; on failure a
//! thread-local message is available from [`arrangelab_last_error_message`]
//! until the next call on the same thread. Strings returned through `char**`
//! out-parameters are owned by the caller and must be released with
//! [`arrangelab_string_free`].

#![allow(non_camel_case_types)]

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use arrangelab::fileio::ArrangementFile;
use arrangelab::report::{analyze, restrict_line, AnalyzeOptions};
use arrangelab::verify::{run_all, run_one, to_document, CheckOptions, TheoremReport};
use arrangelab::{Arrangement, FamilySpec};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum arrangelab_status {
    ARRANGELAB_OK = 0,
    /// A required pointer argument was null.
    ARRANGELAB_NULL_POINTER = 1,
    /// An input string was not valid UTF-8.
    ARRANGELAB_INVALID_UTF8 = 2,
    /// The input could not be parsed (JSON document or scalar grammar).
    ARRANGELAB_PARSE_ERROR = 3,
    /// The computation refused its preconditions (non-essential input,
    /// positive characteristic, out-of-range index, ...).
    ARRANGELAB_DOMAIN_ERROR = 4,
    /// An internal invariant failed; report this as a bug.
    ARRANGELAB_INTERNAL_ERROR = 5,
}

use arrangelab_status::*;

/// Opaque handle to an immutable arrangement.
pub struct arrangelab_arrangement {
    inner: Arrangement,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let cleaned = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(cleaned).unwrap_or_default();
    });
}

fn status_for(e: &arrangelab::Error) -> arrangelab_status {
    use arrangelab::Error as E;
    match e {
        E::Io(_)
        | E::Json(_)
        | E::FileFormat(_)
        | E::ScalarParse { .. }
        | E::NotSquarefree(_)
        | E::QuadraticOutOfRange(_)
        | E::CompositeModulus(_) => ARRANGELAB_PARSE_ERROR,
        E::Internal(_) => ARRANGELAB_INTERNAL_ERROR,
        _ => ARRANGELAB_DOMAIN_ERROR,
    }
}

fn guarded(body: impl FnOnce() -> arrangelab_status) -> arrangelab_status {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("panic inside arrangelab");
            ARRANGELAB_INTERNAL_ERROR
        }
    }
}

unsafe fn read_utf8<'a>(ptr: *const c_char) -> Result<&'a str, arrangelab_status> {
    if ptr.is_null() {
        set_error("null pointer argument");
        return Err(ARRANGELAB_NULL_POINTER);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("input is not valid UTF-8");
        ARRANGELAB_INVALID_UTF8
    })
}

fn give_string(out: *mut *mut c_char, s: String) -> arrangelab_status {
    let cleaned = s.replace('\0', " ");
    match CString::new(cleaned) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            ARRANGELAB_OK
        }
        Err(_) => {
            set_error("output contained an interior NUL");
            ARRANGELAB_INTERNAL_ERROR
        }
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn arrangelab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread; valid until the next
/// call into the library from the same thread.
#[no_mangle]
pub extern "C" fn arrangelab_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parses an arrangement file document (the CLI's JSON format) into a handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn arrangelab_arrangement_from_json(
    json: *const c_char,
    out: *mut *mut arrangelab_arrangement,
) -> arrangelab_status {
    guarded(|| {
        if out.is_null() {
            set_error("null out pointer");
            return ARRANGELAB_NULL_POINTER;
        }
        let text = match read_utf8(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let built = ArrangementFile::from_json(text).and_then(|f| f.to_arrangement());
        match built {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(arrangelab_arrangement { inner }));
                ARRANGELAB_OK
            }
            Err(e) => {
                set_error(&e.to_string());
                status_for(&e)
            }
        }
    })
}

/// Builds a named family member from a spec document such as
/// `{"family":"grid","a":2,"b":2}` or
/// `{"family":"generic","n":6,"seed":7}`.
///
/// # Safety
/// `spec_json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn arrangelab_arrangement_generate(
    spec_json: *const c_char,
    out: *mut *mut arrangelab_arrangement,
) -> arrangelab_status {
    guarded(|| {
        if out.is_null() {
            set_error("null out pointer");
            return ARRANGELAB_NULL_POINTER;
        }
        let text = match read_utf8(spec_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let spec: FamilySpec = match serde_json::from_str(text) {
            Ok(s) => s,
            Err(e) => {
                set_error(&format!("family spec: {e}"));
                return ARRANGELAB_PARSE_ERROR;
            }
        };
        match spec.build() {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(arrangelab_arrangement { inner }));
                ARRANGELAB_OK
            }
            Err(e) => {
                set_error(&e.to_string());
                status_for(&e)
            }
        }
    })
}

/// Renders the handle back to the canonical arrangement file document.
///
/// # Safety
/// `handle` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn arrangelab_arrangement_to_json(
    handle: *const arrangelab_arrangement,
    out: *mut *mut c_char,
) -> arrangelab_status {
    guarded(|| {
        let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
            set_error("null pointer argument");
            return ARRANGELAB_NULL_POINTER;
        };
        let file = ArrangementFile::from_arrangement(&h.inner, None);
        give_string(out, file.to_json())
    })
}

/// Number of lines, or 0 for a null handle.
///
/// # Safety
/// `handle` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn arrangelab_arrangement_line_count(
    handle: *const arrangelab_arrangement,
) -> usize {
    handle.as_ref().map_or(0, |h| h.inner.len())
}

/// Full analysis report as JSON (`report_version` 1).
///
/// # Safety
/// `handle` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn arrangelab_analyze_json(
    handle: *const arrangelab_arrangement,
    out: *mut *mut c_char,
) -> arrangelab_status {
    guarded(|| {
        let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
            set_error("null pointer argument");
            return ARRANGELAB_NULL_POINTER;
        };
        match analyze(&h.inner, AnalyzeOptions::default()) {
            Ok(report) => give_string(out, report.to_json()),
            Err(e) => {
                set_error(&e.to_string());
                status_for(&e)
            }
        }
    })
}

/// Restriction of one member line: points, multiplicities, exponents.
///
/// # Safety
/// `handle` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn arrangelab_restrict_json(
    handle: *const arrangelab_arrangement,
    line_index: usize,
    out: *mut *mut c_char,
) -> arrangelab_status {
    guarded(|| {
        let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
            set_error("null pointer argument");
            return ARRANGELAB_NULL_POINTER;
        };
        match restrict_line(&h.inner, line_index) {
            Ok(report) => give_string(out, report.to_json()),
            Err(e) => {
                set_error(&e.to_string());
                status_for(&e)
            }
        }
    })
}

/// Runs theorem checks: all of them when `theorem_id` is null, or the one
/// named check. `all_hold` (optional) receives 1 when every applicable check
/// holds. A nonzero `allow_positive_char` waives characteristic-zero
/// hypotheses.
///
/// # Safety
/// `handle` must come from this library; `theorem_id` must be null or a
/// NUL-terminated string; `out` must be valid; `all_hold` may be null.
#[no_mangle]
pub unsafe extern "C" fn arrangelab_verify_json(
    handle: *const arrangelab_arrangement,
    theorem_id: *const c_char,
    allow_positive_char: c_int,
    out: *mut *mut c_char,
    all_hold: *mut c_int,
) -> arrangelab_status {
    guarded(|| {
        let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
            set_error("null pointer argument");
            return ARRANGELAB_NULL_POINTER;
        };
        let opts = CheckOptions {
            allow_positive_char: allow_positive_char != 0,
            max_degree: None,
        };
        let reports: Result<Vec<TheoremReport>, _> = if theorem_id.is_null() {
            run_all(&h.inner, opts)
        } else {
            match read_utf8(theorem_id) {
                Ok(id) => run_one(&h.inner, id, opts).map(|r| vec![r]),
                Err(s) => return s,
            }
        };
        match reports {
            Ok(reports) => {
                let ok = reports.iter().all(TheoremReport::passed);
                if !all_hold.is_null() {
                    *all_hold = ok as c_int;
                }
                let doc = to_document(&reports);
                give_string(
                    out,
                    serde_json::to_string_pretty(&doc).expect("serializable") + "\n",
                )
            }
            Err(e) => {
                set_error(&e.to_string());
                status_for(&e)
            }
        }
    })
}

/// Releases an arrangement handle. Null is ignored.
///
/// # Safety
/// `handle` must be null or come from this library, and not be used after.
#[no_mangle]
pub unsafe extern "C" fn arrangelab_arrangement_free(handle: *mut arrangelab_arrangement) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Releases a string produced by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned through an out-parameter here, and
/// not be used after.
#[no_mangle]
pub unsafe extern "C" fn arrangelab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
