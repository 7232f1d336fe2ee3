//! C ABI over the toric gamma_2 classification library.
//!
//! Varieties are held behind an opaque handle created from a flat
//! coordinate array; every entry point returns a status code and writes
//! results through out-pointers. Exact rational values cross the boundary
//! as fraction strings, never as floats. `tg2_last_error_message` returns a
//! thread-local description of the most recent failure.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use toric_gamma2::classify::{self, VarietyReport, Verdict};
use toric_gamma2::report::report_to_json;
use toric_gamma2::{Error, LatticeVector};

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(sanitized).expect("no interior NUL"));
}

/// Status code of every C entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tg2Status {
    Ok = 0,
    NullArgument = 1,
    InvalidInput = 2,
    NotFano = 3,
    NotComplete = 4,
    NotSimplicial = 5,
    IndexOutOfRange = 6,
    BufferTooSmall = 7,
    InternalError = 8,
}

/// Sign class of gamma_2 over the torus invariant surfaces.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tg2Verdict {
    Positive = 0,
    NefNotPositive = 1,
    NotNef = 2,
}

/// Variety property flags; `terminal` and `gorenstein` are only meaningful
/// when `fano` is set.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct Tg2Profile {
    pub q_factorial: bool,
    pub complete: bool,
    pub fano: bool,
    pub terminal: bool,
    pub gorenstein: bool,
    pub picard: i64,
}

/// Opaque handle to a classified variety.
pub struct Tg2Variety {
    report: VarietyReport,
}

fn status_of(e: &Error) -> Tg2Status {
    match e {
        Error::NotFano(_) | Error::NonVertexGenerator { .. } => Tg2Status::NotFano,
        Error::NotComplete(_) => Tg2Status::NotComplete,
        Error::NotSimplicial | Error::NonSimplicialFacet(_) => Tg2Status::NotSimplicial,
        _ => Tg2Status::InvalidInput,
    }
}

/// Classify the variety spanned by `n_points` lattice points of dimension
/// `dim` (2 or 3), stored row-major in `coords` (`n_points * dim` entries).
/// On success writes a fresh handle to `out`; free it with
/// `tg2_variety_free`.
///
/// # Safety
/// `coords` must point to `n_points * dim` readable `int64_t`s and `out`
/// to a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn tg2_variety_new(
    coords: *const i64,
    n_points: usize,
    dim: usize,
    out: *mut *mut Tg2Variety,
) -> Tg2Status {
    if coords.is_null() || out.is_null() {
        set_error("null argument");
        return Tg2Status::NullArgument;
    }
    if !(2..=3).contains(&dim) {
        set_error("dim must be 2 or 3");
        return Tg2Status::InvalidInput;
    }
    let Some(len) = n_points.checked_mul(dim) else {
        set_error("coordinate count overflows");
        return Tg2Status::InvalidInput;
    };
    let flat = std::slice::from_raw_parts(coords, len);
    let result = catch_unwind(AssertUnwindSafe(|| -> Result<VarietyReport, Error> {
        let mut points = Vec::with_capacity(n_points);
        for chunk in flat.chunks_exact(dim) {
            points.push(LatticeVector::new(chunk.to_vec())?);
        }
        classify::verdict("c-api", &points)
    }));
    match result {
        Ok(Ok(report)) => {
            *out = Box::into_raw(Box::new(Tg2Variety { report }));
            Tg2Status::Ok
        }
        Ok(Err(e)) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            Tg2Status::InternalError
        }
    }
}

/// # Safety
/// `v` must be a handle from `tg2_variety_new` not yet freed, or null.
#[no_mangle]
pub unsafe extern "C" fn tg2_variety_free(v: *mut Tg2Variety) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg2_variety_profile(
    v: *const Tg2Variety,
    out: *mut Tg2Profile,
) -> Tg2Status {
    if v.is_null() || out.is_null() {
        set_error("null argument");
        return Tg2Status::NullArgument;
    }
    let p = (*v).report.profile;
    *out = Tg2Profile {
        q_factorial: p.q_factorial,
        complete: p.complete,
        fano: p.fano,
        terminal: p.terminal,
        gorenstein: p.gorenstein,
        picard: p.picard,
    };
    Tg2Status::Ok
}

/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg2_variety_verdict(
    v: *const Tg2Variety,
    out: *mut Tg2Verdict,
) -> Tg2Status {
    if v.is_null() || out.is_null() {
        set_error("null argument");
        return Tg2Status::NullArgument;
    }
    *out = match (*v).report.verdict {
        Verdict::Gamma2Positive => Tg2Verdict::Positive,
        Verdict::Gamma2NefNotPositive => Tg2Verdict::NefNotPositive,
        Verdict::NotGamma2Nef => Tg2Verdict::NotNef,
    };
    Tg2Status::Ok
}

/// Number of torus invariant surfaces in the report: one per ray for a
/// 3-fold, one for a surface.
///
/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg2_variety_surface_count(
    v: *const Tg2Variety,
    out: *mut usize,
) -> Tg2Status {
    if v.is_null() || out.is_null() {
        set_error("null argument");
        return Tg2Status::NullArgument;
    }
    *out = (*v).report.surfaces.len();
    Tg2Status::Ok
}

/// Picard number of the `index`-th surface.
///
/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg2_variety_surface_rho(
    v: *const Tg2Variety,
    index: usize,
    out: *mut i64,
) -> Tg2Status {
    if v.is_null() || out.is_null() {
        set_error("null argument");
        return Tg2Status::NullArgument;
    }
    let report = &(*v).report;
    match report.surfaces.get(index) {
        Some(s) => {
            *out = s.rho;
            Tg2Status::Ok
        }
        None => {
            set_error("surface index out of range");
            Tg2Status::IndexOutOfRange
        }
    }
}

/// Exact `gamma_2 . S` of the `index`-th surface as a NUL-terminated
/// fraction string (for example `"5/6"` or `"-2"`). Writes at most
/// `buf_len` bytes including the terminator; `written` (optional) receives
/// the full string length without the terminator.
///
/// # Safety
/// `v` must be a live handle; `buf` must point to `buf_len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn tg2_variety_surface_gamma2(
    v: *const Tg2Variety,
    index: usize,
    buf: *mut c_char,
    buf_len: usize,
    written: *mut usize,
) -> Tg2Status {
    if v.is_null() || buf.is_null() {
        set_error("null argument");
        return Tg2Status::NullArgument;
    }
    let report = &(*v).report;
    let Some(s) = report.surfaces.get(index) else {
        set_error("surface index out of range");
        return Tg2Status::IndexOutOfRange;
    };
    let text = s.gamma2.to_string();
    if !written.is_null() {
        *written = text.len();
    }
    if buf_len < text.len() + 1 {
        set_error("buffer too small for gamma_2 string");
        return Tg2Status::BufferTooSmall;
    }
    std::ptr::copy_nonoverlapping(text.as_ptr(), buf.cast::<u8>(), text.len());
    *buf.add(text.len()) = 0;
    Tg2Status::Ok
}

/// Full JSON report (same schema as the CLI). Returns a fresh string to be
/// released with `tg2_string_free`, or null on null input.
///
/// # Safety
/// `v` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tg2_variety_report_json(v: *const Tg2Variety) -> *mut c_char {
    if v.is_null() {
        set_error("null argument");
        return std::ptr::null_mut();
    }
    let json = report_to_json(&(*v).report).to_string();
    CString::new(json).map_or(std::ptr::null_mut(), CString::into_raw)
}

/// # Safety
/// `s` must be a string returned by this library, not yet freed, or null.
#[no_mangle]
pub unsafe extern "C" fn tg2_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Description of the most recent error on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tg2_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
