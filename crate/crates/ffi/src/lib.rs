//! C ABI over `mckay-core`.
//!
//! Handles are opaque pointers created by `*_new`/`mckay_check` and released
//! by the matching `*_free`. Every fallible call returns a [`MckayStatus`];
//! on failure [`mckay_last_error`] describes the cause for the calling
//! thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mckay_core::borel::BorelParametrization;
use mckay_core::lattice::CharacterIndex;
use mckay_core::mckay::{check_relative_mckay, McKayReport, Verdict};
use mckay_core::rootdata::{build_root_datum, RootDatum};
use mckay_core::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MckayStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Unsupported = 3,
    BoundExceeded = 4,
    Hypothesis = 5,
    Internal = 6,
    Panic = 7,
}

/// Root datum of a simply connected simple group.
pub struct MckayDatum {
    inner: RootDatum,
}

/// Result of a full comparison, with its JSON rendering.
pub struct MckayReport {
    inner: McKayReport,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> MckayStatus {
    match err {
        Error::InvalidInput(_) | Error::Parse(_) => MckayStatus::InvalidArgument,
        Error::UnsupportedType(_) | Error::ExcludedGroup { .. } | Error::NonPrimeCenter(_) => {
            MckayStatus::Unsupported
        }
        Error::BoundExceeded { .. } => MckayStatus::BoundExceeded,
        Error::Hypothesis(_) => MckayStatus::Hypothesis,
        _ => MckayStatus::Internal,
    }
}

fn guard<F: FnOnce() -> Result<(), MckayStatus>>(f: F) -> MckayStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MckayStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside mckay");
            MckayStatus::Panic
        }
    }
}

fn fail(err: Error) -> MckayStatus {
    set_error(&err.to_string());
    status_of(&err)
}

fn null(what: &str) -> MckayStatus {
    set_error(&format!("{what} is null"));
    MckayStatus::NullPointer
}

/// Message for the most recent failure on this thread. Valid until the next
/// call into the library from the same thread.
#[no_mangle]
pub extern "C" fn mckay_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Version string of the library, statically allocated.
#[no_mangle]
pub extern "C" fn mckay_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a type label such as `"C2"`.
///
/// # Safety
/// `label` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mckay_datum_new(label: *const c_char, out: *mut *mut MckayDatum) -> MckayStatus {
    guard(|| {
        if label.is_null() {
            return Err(null("label"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CStr::from_ptr(label)
            .to_str()
            .map_err(|_| fail(Error::InvalidInput("label is not UTF-8".into())))?;
        let d = s.parse().and_then(build_root_datum).map_err(fail)?;
        *out = Box::into_raw(Box::new(MckayDatum { inner: d }));
        Ok(())
    })
}

/// # Safety
/// `d` must come from [`mckay_datum_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mckay_datum_free(d: *mut MckayDatum) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Rank of the datum, 0 for a null handle.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mckay_datum_rank(d: *const MckayDatum) -> u32 {
    d.as_ref().map_or(0, |d| d.inner.rank() as u32)
}

/// Borel-side `p′`-character count at `q = p^n`.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mckay_borel_total(d: *const MckayDatum, p: u64, n: u32, out: *mut u64) -> MckayStatus {
    guard(|| {
        let d = d.as_ref().ok_or_else(|| null("datum"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let bp = BorelParametrization::new(&d.inner, p, n).map_err(fail)?;
        *out = u64::try_from(bp.total()).map_err(|_| fail(Error::Internal("count exceeds 64 bits".into())))?;
        Ok(())
    })
}

/// Order of the fixed center `Z^F`.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mckay_center_order(d: *const MckayDatum, p: u64, n: u32, out: *mut u64) -> MckayStatus {
    guard(|| {
        let d = d.as_ref().ok_or_else(|| null("datum"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let bp = BorelParametrization::new(&d.inner, p, n).map_err(fail)?;
        *out = bp.center().order();
        Ok(())
    })
}

/// Borel-side count over the central character with index coordinates
/// `nu[0..len]` (empty for a trivial center).
///
/// # Safety
/// `d` must be a live handle; `nu` must point to `len` readable values (or
/// be null with `len == 0`); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mckay_borel_per_nu(
    d: *const MckayDatum,
    p: u64,
    n: u32,
    nu: *const u64,
    len: usize,
    out: *mut u64,
) -> MckayStatus {
    guard(|| {
        let d = d.as_ref().ok_or_else(|| null("datum"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        if nu.is_null() && len > 0 {
            return Err(null("nu"));
        }
        let coords = if len == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(nu, len).to_vec()
        };
        let bp = BorelParametrization::new(&d.inner, p, n).map_err(fail)?;
        let c = bp.per_nu_count(&CharacterIndex(coords)).map_err(fail)?;
        *out = u64::try_from(c).map_err(|_| fail(Error::Internal("count exceeds 64 bits".into())))?;
        Ok(())
    })
}

/// Runs the full group-versus-Borel comparison. `max_order` bounds the
/// group enumeration; pass 0 for the library default.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mckay_check(
    d: *const MckayDatum,
    p: u64,
    n: u32,
    max_order: u64,
    out: *mut *mut MckayReport,
) -> MckayStatus {
    guard(|| {
        let d = d.as_ref().ok_or_else(|| null("datum"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let bound = if max_order == 0 {
            mckay_core::matgrp::DEFAULT_MAX_GROUP_ORDER
        } else {
            max_order
        };
        let r = check_relative_mckay(&d.inner, p, n, bound).map_err(fail)?;
        let json = serde_json::to_string(&r).map_err(|e| fail(Error::Internal(e.to_string())))?;
        let json = CString::new(json).map_err(|e| fail(Error::Internal(e.to_string())))?;
        *out = Box::into_raw(Box::new(MckayReport { inner: r, json }));
        Ok(())
    })
}

/// 1 if every comparison in the report passed, 0 otherwise or for null.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mckay_report_passed(r: *const MckayReport) -> i32 {
    r.as_ref().map_or(0, |r| i32::from(r.inner.verdict == Verdict::Pass))
}

/// JSON text of the report, owned by the handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mckay_report_json(r: *const MckayReport) -> *const c_char {
    r.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// # Safety
/// `r` must come from [`mckay_check`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mckay_report_free(r: *mut MckayReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
