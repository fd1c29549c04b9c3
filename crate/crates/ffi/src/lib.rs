//! C ABI over the certificate toolkit.
//!
//! Certificates travel across the boundary as opaque handles created
//! by [`diskcert_certificate_parse_json`] and released by
//! [`diskcert_certificate_free`]. Every call reports a
//! [`DiskcertStatus`]; the first three values mirror the CLI exit
//! codes, so bindings can reuse the same verified/failed/malformed
//! branching. A thread-local message, readable through
//! [`diskcert_last_error_message`], carries the detail of the most
//! recent failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use diskcert::certificate::Certificate;
use diskcert::checker::{check_certificate, is_malformed};
use diskcert::error::Error;
use diskcert::largeb::{verify_large_b, SpectralConstants};

/// Result of a call across the C boundary.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiskcertStatus {
    /// The operation ran and the verified property holds.
    Ok = 0,
    /// The operation ran and the verified property does not hold.
    VerificationFailed = 1,
    /// The input could not be parsed or was structurally invalid.
    Malformed = 2,
    /// A required pointer argument was null.
    NullPointer = 3,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 4,
    /// An internal computation failed; see the last error message.
    Internal = 5,
}

/// Opaque handle to a parsed certificate.
pub struct DiskcertCertificate {
    inner: Certificate,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let stored = CString::new(message.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("error message unavailable").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(stored));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(err: &Error) -> DiskcertStatus {
    if is_malformed(err) || matches!(err, Error::InvalidArgument(_)) {
        DiskcertStatus::Malformed
    } else {
        DiskcertStatus::Internal
    }
}

/// Message describing the most recent failure on this thread, or null
/// when the last call succeeded.
///
/// The pointer stays valid until the next failing call on the same
/// thread; do not free it.
#[no_mangle]
pub extern "C" fn diskcert_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null(), |message| message.as_ptr())
    })
}

/// Parses certificate JSON into a new handle.
///
/// On success writes the handle through `out` and returns `OK`; the
/// caller owns it and must release it with
/// [`diskcert_certificate_free`]. On failure `out` is left untouched.
///
/// # Safety
/// `json` must point to a NUL-terminated string and `out` to writable
/// memory for one pointer; both must stay valid for the duration of
/// the call.
#[no_mangle]
pub unsafe extern "C" fn diskcert_certificate_parse_json(
    json: *const c_char,
    out: *mut *mut DiskcertCertificate,
) -> DiskcertStatus {
    clear_last_error();
    if json.is_null() || out.is_null() {
        set_last_error("null pointer argument".to_string());
        return DiskcertStatus::NullPointer;
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(text) => text,
        Err(_) => {
            set_last_error("certificate JSON is not valid UTF-8".to_string());
            return DiskcertStatus::InvalidUtf8;
        }
    };
    match Certificate::from_json_str(text) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(DiskcertCertificate { inner }));
            DiskcertStatus::Ok
        }
        Err(err) => {
            set_last_error(err.to_string());
            status_of(&err)
        }
    }
}

/// Releases a handle created by [`diskcert_certificate_parse_json`].
/// Passing null is a no-op.
///
/// # Safety
/// `cert` must be null or a handle from
/// [`diskcert_certificate_parse_json`] that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn diskcert_certificate_free(cert: *mut DiskcertCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Writes the number of certified intervals through `out`.
///
/// # Safety
/// `cert` must be a live handle and `out` writable for one `usize`.
#[no_mangle]
pub unsafe extern "C" fn diskcert_certificate_entry_count(
    cert: *const DiskcertCertificate,
    out: *mut usize,
) -> DiskcertStatus {
    clear_last_error();
    if cert.is_null() || out.is_null() {
        set_last_error("null pointer argument".to_string());
        return DiskcertStatus::NullPointer;
    }
    *out = (*cert).inner.entries.len();
    DiskcertStatus::Ok
}

/// Writes the angular mode and integer field endpoints of interval
/// `index` through the three output pointers.
///
/// # Safety
/// `cert` must be a live handle; each output pointer must be writable
/// for one value of its type.
#[no_mangle]
pub unsafe extern "C" fn diskcert_certificate_entry(
    cert: *const DiskcertCertificate,
    index: usize,
    out_m: *mut u32,
    out_b_left: *mut i64,
    out_b_right: *mut i64,
) -> DiskcertStatus {
    clear_last_error();
    if cert.is_null() || out_m.is_null() || out_b_left.is_null() || out_b_right.is_null() {
        set_last_error("null pointer argument".to_string());
        return DiskcertStatus::NullPointer;
    }
    let entries = &(*cert).inner.entries;
    let Some(entry) = entries.get(index) else {
        set_last_error(format!(
            "interval index {index} out of range, certificate has {}",
            entries.len()
        ));
        return DiskcertStatus::Malformed;
    };
    *out_m = entry.m;
    *out_b_left = entry.b_left;
    *out_b_right = entry.b_right;
    DiskcertStatus::Ok
}

/// Verifies the certificate with exact arithmetic.
///
/// Returns `OK` when every interval and the coverage chain pass,
/// `VERIFICATION_FAILED` otherwise.
///
/// # Safety
/// `cert` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn diskcert_certificate_check(
    cert: *const DiskcertCertificate,
) -> DiskcertStatus {
    clear_last_error();
    if cert.is_null() {
        set_last_error("null pointer argument".to_string());
        return DiskcertStatus::NullPointer;
    }
    let report = check_certificate(&(*cert).inner);
    if report.overall() {
        DiskcertStatus::Ok
    } else {
        set_last_error(report.summary());
        DiskcertStatus::VerificationFailed
    }
}

/// Writes the human-readable check report through `out` as a
/// NUL-terminated string owned by the caller; release it with
/// [`diskcert_string_free`]. The status reflects the verification
/// verdict, and the report is written for both outcomes.
///
/// # Safety
/// `cert` must be a live handle and `out` writable for one pointer.
#[no_mangle]
pub unsafe extern "C" fn diskcert_certificate_check_summary(
    cert: *const DiskcertCertificate,
    out: *mut *mut c_char,
) -> DiskcertStatus {
    clear_last_error();
    if cert.is_null() || out.is_null() {
        set_last_error("null pointer argument".to_string());
        return DiskcertStatus::NullPointer;
    }
    let report = check_certificate(&(*cert).inner);
    let summary = CString::new(report.summary().replace('\0', " "))
        .unwrap_or_else(|_| CString::new("report unavailable").unwrap());
    *out = summary.into_raw();
    if report.overall() {
        DiskcertStatus::Ok
    } else {
        DiskcertStatus::VerificationFailed
    }
}

/// Releases a string produced by this library. Passing null is a
/// no-op.
///
/// # Safety
/// `s` must be null or a string returned by this library that has not
/// been freed yet.
#[no_mangle]
pub unsafe extern "C" fn diskcert_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Verifies the large-field crossover bound against `threshold` using
/// the built-in exact enclosures.
#[no_mangle]
pub extern "C" fn diskcert_large_b_verify(threshold: i64) -> DiskcertStatus {
    clear_last_error();
    match verify_large_b(&SpectralConstants::defaults(), threshold) {
        Ok(true) => DiskcertStatus::Ok,
        Ok(false) => {
            set_last_error(format!(
                "crossover bound does not stay below the threshold {threshold}"
            ));
            DiskcertStatus::VerificationFailed
        }
        Err(err) => {
            set_last_error(err.to_string());
            status_of(&err)
        }
    }
}

/// Verifies the full statement for the certificate: the exact check,
/// the large-field bound at the certificate's threshold, and the
/// overlap of the two ranges.
///
/// # Safety
/// `cert` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn diskcert_theorem_verify(
    cert: *const DiskcertCertificate,
) -> DiskcertStatus {
    clear_last_error();
    if cert.is_null() {
        set_last_error("null pointer argument".to_string());
        return DiskcertStatus::NullPointer;
    }
    let inner = &(*cert).inner;
    if !check_certificate(inner).overall() {
        set_last_error("small-field certificate check failed".to_string());
        return DiskcertStatus::VerificationFailed;
    }
    match verify_large_b(&SpectralConstants::defaults(), inner.large_b_threshold) {
        Ok(true) => {}
        Ok(false) => {
            set_last_error(format!(
                "large-field bound does not reach the threshold {}",
                inner.large_b_threshold
            ));
            return DiskcertStatus::VerificationFailed;
        }
        Err(err) => {
            set_last_error(err.to_string());
            return status_of(&err);
        }
    }
    if inner.coverage_target <= inner.large_b_threshold {
        set_last_error(format!(
            "ranges do not overlap: coverage ends at {} but the large-field bound starts at {}",
            inner.coverage_target, inner.large_b_threshold
        ));
        return DiskcertStatus::VerificationFailed;
    }
    DiskcertStatus::Ok
}
