//! C ABI over the core library.
//!
//! Conventions: objects cross the boundary as opaque handles created by
//! `*_parse` or transform calls and released by the matching `*_free`;
//! strings returned through out-parameters are NUL-terminated, owned by the
//! caller, and released with [`hsz_string_free`]; every fallible call
//! returns an [`HszStatus`], and a failure leaves a message readable via
//! [`hsz_last_error_message`] until the next failure on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hsz_core::diagnostics::{
    conjugation_ratio, hsz_verdict, riesz_finite_section_norm, sigma_min_sweep,
    strong_szego_certificate, DiagnosisInput, DiagnosticReport, Verdict, VerdictConfig,
};
use hsz_core::error::Error;
use hsz_core::lmatrix;
use hsz_core::schur::SchurParams;
use hsz_core::series::PowerSeries;
use hsz_core::transforms;
use hsz_core::{matrix, MomentSequence};

/// Status code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HszStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The input could not be parsed or violates a type invariant.
    BadInput = 3,
    /// A numerical precondition failed (positivity, contraction, ...).
    Numeric = 4,
    /// A size or order limit was exceeded.
    CapExceeded = 5,
    /// An internal invariant failed; report this as a bug.
    Internal = 6,
}

/// Verdict categories of a diagnostic report.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HszVerdict {
    CertifiedHs = 0,
    LikelyHs = 1,
    LikelyNotHs = 2,
    NotHsNecessaryViolation = 3,
    Inconclusive = 4,
}

pub struct HszSchurParams {
    inner: SchurParams,
}

pub struct HszMoments {
    inner: MomentSequence,
}

pub struct HszSeries {
    inner: PowerSeries,
}

pub struct HszReport {
    inner: DiagnosticReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let message = CString::new(message.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("error").expect("static"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn status_of(err: &Error) -> HszStatus {
    match err {
        Error::Json(_) | Error::Inconsistent(_) | Error::InvalidWeight(_) => HszStatus::BadInput,
        Error::BruteForceCap { .. }
        | Error::OrderTooSmall { .. }
        | Error::GridTooCoarse { .. }
        | Error::InsufficientMoments { .. } => HszStatus::CapExceeded,
        _ => HszStatus::Numeric,
    }
}

fn fail(err: Error) -> HszStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

/// Runs a fallible body, catching panics so they cannot unwind across the
/// boundary.
fn guarded(body: impl FnOnce() -> Result<HszStatus, Error>) -> HszStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(err)) => fail(err),
        Err(panic) => {
            let message = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".to_string());
            set_error(message);
            HszStatus::Internal
        }
    }
}

unsafe fn utf8_arg<'a>(ptr: *const c_char) -> Result<&'a str, HszStatus> {
    if ptr.is_null() {
        return Err(HszStatus::NullArgument);
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| {
        set_error("argument is not valid UTF-8".into());
        HszStatus::InvalidUtf8
    })
}

fn give_string(text: String, out: *mut *mut c_char) -> HszStatus {
    let c = match CString::new(text) {
        Ok(c) => c,
        Err(_) => {
            set_error("output contained an interior NUL".into());
            return HszStatus::Internal;
        }
    };
    unsafe { *out = c.into_raw() };
    HszStatus::Ok
}

macro_rules! not_null {
    ($ptr:expr) => {
        if $ptr.is_null() {
            set_error(format!("{} must not be null", stringify!($ptr)));
            return HszStatus::NullArgument;
        }
    };
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn hsz_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn hsz_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|s| s.as_ptr())
            .unwrap_or(std::ptr::null())
    })
}

/// Releases a string returned through an out-parameter.
///
/// # Safety
/// `s` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn hsz_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Parses `{"gamma": [[re,im],..], "terminal_unimodular": bool}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hsz_schur_params_parse(
    json: *const c_char,
    out: *mut *mut HszSchurParams,
) -> HszStatus {
    not_null!(out);
    let text = match unsafe { utf8_arg(json) } {
        Ok(t) => t,
        Err(status) => return status,
    };
    guarded(|| {
        let inner = SchurParams::from_json(text)?;
        unsafe { *out = Box::into_raw(Box::new(HszSchurParams { inner })) };
        Ok(HszStatus::Ok)
    })
}

/// Renders the canonical JSON form; release with [`hsz_string_free`].
///
/// # Safety
/// `handle` must be a live parse/transform result; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hsz_schur_params_to_json(
    handle: *const HszSchurParams,
    out: *mut *mut c_char,
) -> HszStatus {
    not_null!(handle);
    not_null!(out);
    give_string(unsafe { &*handle }.inner.to_json(), out)
}

/// Number of stored entries.
///
/// # Safety
/// `handle` must be live; null yields zero.
#[no_mangle]
pub unsafe extern "C" fn hsz_schur_params_len(handle: *const HszSchurParams) -> usize {
    if handle.is_null() {
        return 0;
    }
    unsafe { &*handle }.inner.len()
}

/// Whether the sequence ends with a unimodular entry.
///
/// # Safety
/// `handle` must be live; null yields false.
#[no_mangle]
pub unsafe extern "C" fn hsz_schur_params_is_terminal(handle: *const HszSchurParams) -> bool {
    if handle.is_null() {
        return false;
    }
    unsafe { &*handle }.inner.is_terminal_unimodular()
}

/// Reads entry `index` (zero-extended beyond the support).
///
/// # Safety
/// `handle` must be live; `re` and `im` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hsz_schur_params_entry(
    handle: *const HszSchurParams,
    index: usize,
    re: *mut f64,
    im: *mut f64,
) -> HszStatus {
    not_null!(handle);
    not_null!(re);
    not_null!(im);
    let value = unsafe { &*handle }.inner.get(index);
    unsafe {
        *re = value.re;
        *im = value.im;
    }
    HszStatus::Ok
}

/// # Safety
/// `handle` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hsz_schur_params_free(handle: *mut HszSchurParams) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Parses `{"moments": [[re,im],..]}`; validates Toeplitz positivity.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hsz_moments_parse(
    json: *const c_char,
    out: *mut *mut HszMoments,
) -> HszStatus {
    not_null!(out);
    let text = match unsafe { utf8_arg(json) } {
        Ok(t) => t,
        Err(status) => return status,
    };
    guarded(|| {
        let inner = MomentSequence::from_json(text)?;
        unsafe { *out = Box::into_raw(Box::new(HszMoments { inner })) };
        Ok(HszStatus::Ok)
    })
}

/// # Safety
/// `handle` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hsz_moments_free(handle: *mut HszMoments) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Parses `{"coeffs": [[re,im],..]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hsz_series_parse(
    json: *const c_char,
    out: *mut *mut HszSeries,
) -> HszStatus {
    not_null!(out);
    let text = match unsafe { utf8_arg(json) } {
        Ok(t) => t,
        Err(status) => return status,
    };
    guarded(|| {
        let inner = PowerSeries::from_json(text)?;
        unsafe { *out = Box::into_raw(Box::new(HszSeries { inner })) };
        Ok(HszStatus::Ok)
    })
}

/// Truncation order (highest stored power).
///
/// # Safety
/// `handle` must be live; null yields zero.
#[no_mangle]
pub unsafe extern "C" fn hsz_series_order(handle: *const HszSeries) -> usize {
    if handle.is_null() {
        return 0;
    }
    unsafe { &*handle }.inner.order()
}

/// Reads coefficient `k` (zero beyond the order).
///
/// # Safety
/// `handle` must be live; `re` and `im` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hsz_series_coeff(
    handle: *const HszSeries,
    k: usize,
    re: *mut f64,
    im: *mut f64,
) -> HszStatus {
    not_null!(handle);
    not_null!(re);
    not_null!(im);
    let value = unsafe { &*handle }.inner.coeff(k);
    unsafe {
        *re = value.re;
        *im = value.im;
    }
    HszStatus::Ok
}

/// # Safety
/// `handle` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hsz_series_free(handle: *mut HszSeries) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Taylor coefficients of the Schur function with the given parameters.
///
/// # Safety
/// `gamma` must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hsz_inverse_schur(
    gamma: *const HszSchurParams,
    order: usize,
    out: *mut *mut HszSeries,
) -> HszStatus {
    not_null!(gamma);
    not_null!(out);
    let params = &unsafe { &*gamma }.inner;
    guarded(|| {
        let inner = transforms::inverse_schur(params, order);
        unsafe { *out = Box::into_raw(Box::new(HszSeries { inner })) };
        Ok(HszStatus::Ok)
    })
}

/// Runs the Schur algorithm on a series. `trusted` (optional) receives the
/// number of parameters backed by the series order.
///
/// # Safety
/// `theta` must be live and `out` a valid pointer; `trusted` may be null.
#[no_mangle]
pub unsafe extern "C" fn hsz_schur_algorithm(
    theta: *const HszSeries,
    max_order: usize,
    out: *mut *mut HszSchurParams,
    trusted: *mut usize,
) -> HszStatus {
    not_null!(theta);
    not_null!(out);
    let series = &unsafe { &*theta }.inner;
    guarded(|| {
        let result = transforms::schur_algorithm(series, max_order)?;
        if !trusted.is_null() {
            unsafe { *trusted = result.trusted };
        }
        unsafe {
            *out = Box::into_raw(Box::new(HszSchurParams {
                inner: result.params,
            }))
        };
        Ok(HszStatus::Ok)
    })
}

/// Parameters from moments through the Herglotz/Schur route.
///
/// # Safety
/// `moments` must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hsz_gamma_from_moments(
    moments: *const HszMoments,
    order: usize,
    out: *mut *mut HszSchurParams,
) -> HszStatus {
    not_null!(moments);
    not_null!(out);
    let m = &unsafe { &*moments }.inner;
    guarded(|| {
        let result = transforms::gamma_from_moments(m, order)?;
        unsafe {
            *out = Box::into_raw(Box::new(HszSchurParams {
                inner: result.params,
            }))
        };
        Ok(HszStatus::Ok)
    })
}

/// Parameters straight from moments through the Levinson recurrence.
///
/// # Safety
/// `moments` must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hsz_levinson(
    moments: *const HszMoments,
    out: *mut *mut HszSchurParams,
) -> HszStatus {
    not_null!(moments);
    not_null!(out);
    let m = &unsafe { &*moments }.inner;
    guarded(|| {
        let result = transforms::levinson_verblunsky(m)?;
        unsafe {
            *out = Box::into_raw(Box::new(HszSchurParams {
                inner: result.params,
            }))
        };
        Ok(HszStatus::Ok)
    })
}

/// Strong-Szego certificate: sufficiency flag and certified lower bound.
///
/// # Safety
/// `gamma` must be live; `passes` and `c_bound` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hsz_strong_szego(
    gamma: *const HszSchurParams,
    passes: *mut bool,
    c_bound: *mut f64,
) -> HszStatus {
    not_null!(gamma);
    not_null!(passes);
    not_null!(c_bound);
    let params = &unsafe { &*gamma }.inner;
    guarded(|| {
        let cert = strong_szego_certificate(params);
        unsafe {
            *passes = cert.passes;
            *c_bound = cert.c_bound;
        }
        Ok(HszStatus::Ok)
    })
}

/// Smallest singular values of the adjoint triangular sections at the given
/// sizes; `values` must have room for `len` results.
///
/// # Safety
/// `gamma` must be live; `sizes` and `values` must point to `len` elements.
#[no_mangle]
pub unsafe extern "C" fn hsz_sigma_min_sweep(
    gamma: *const HszSchurParams,
    sizes: *const usize,
    len: usize,
    values: *mut f64,
) -> HszStatus {
    not_null!(gamma);
    not_null!(sizes);
    not_null!(values);
    let params = &unsafe { &*gamma }.inner;
    let sizes = unsafe { std::slice::from_raw_parts(sizes, len) };
    guarded(|| {
        let sweep = sigma_min_sweep(params, sizes)?;
        for (k, point) in sweep.points.iter().enumerate() {
            unsafe { *values.add(k) = point.value };
        }
        Ok(HszStatus::Ok)
    })
}

/// Finite-section Riesz projection norm on `span{t^-n..t^n}`.
///
/// # Safety
/// `moments` must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hsz_riesz_norm(
    moments: *const HszMoments,
    n: usize,
    out: *mut f64,
) -> HszStatus {
    not_null!(moments);
    not_null!(out);
    let m = &unsafe { &*moments }.inner;
    guarded(|| {
        unsafe { *out = riesz_finite_section_norm(m, n)? };
        Ok(HszStatus::Ok)
    })
}

/// Best conjugation constant on degree-`n` trigonometric polynomials.
///
/// # Safety
/// `moments` must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hsz_conjugation_ratio(
    moments: *const HszMoments,
    n: usize,
    out: *mut f64,
) -> HszStatus {
    not_null!(moments);
    not_null!(out);
    let m = &unsafe { &*moments }.inner;
    guarded(|| {
        unsafe { *out = conjugation_ratio(m, n)? };
        Ok(HszStatus::Ok)
    })
}

/// Product-vs-quadrature residual of the Szego identity; pass a
/// non-positive `radius` for the default.
///
/// # Safety
/// `gamma` and `theta` must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hsz_szego_identity_residual(
    gamma: *const HszSchurParams,
    theta: *const HszSeries,
    quad_points: usize,
    radius: f64,
    out: *mut f64,
) -> HszStatus {
    not_null!(gamma);
    not_null!(theta);
    not_null!(out);
    let params = &unsafe { &*gamma }.inner;
    let series = &unsafe { &*theta }.inner;
    guarded(|| {
        let radius = (radius > 0.0).then_some(radius);
        let check = transforms::szego_identity_residual(params, series, quad_points, radius);
        unsafe { *out = check.residual };
        Ok(HszStatus::Ok)
    })
}

/// Triangular section rendered as matrix JSON; set `direct` to use the
/// composition-sum route (sizes within the brute-force cap only).
///
/// # Safety
/// `gamma` must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hsz_l_matrix_json(
    gamma: *const HszSchurParams,
    n: usize,
    direct: bool,
    out: *mut *mut c_char,
) -> HszStatus {
    not_null!(gamma);
    not_null!(out);
    let params = &unsafe { &*gamma }.inner;
    guarded(|| {
        let section = if direct {
            lmatrix::l_matrix_direct(params, n)?
        } else {
            lmatrix::l_matrix_product(params, n)?
        };
        Ok(give_string(matrix::to_json(&section), out))
    })
}

/// Full diagnosis from parameters alone, with default thresholds.
///
/// # Safety
/// `gamma` must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hsz_diagnose_gamma(
    gamma: *const HszSchurParams,
    out: *mut *mut HszReport,
) -> HszStatus {
    not_null!(gamma);
    not_null!(out);
    let params = unsafe { &*gamma }.inner.clone();
    guarded(|| {
        let inner = hsz_verdict(&DiagnosisInput::Gamma(params), &VerdictConfig::default())?;
        unsafe { *out = Box::into_raw(Box::new(HszReport { inner })) };
        Ok(HszStatus::Ok)
    })
}

/// Full diagnosis from moments, with default thresholds; runs the
/// two-route consistency check and the moment-side oracle sweeps.
///
/// # Safety
/// `moments` must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hsz_diagnose_moments(
    moments: *const HszMoments,
    out: *mut *mut HszReport,
) -> HszStatus {
    not_null!(moments);
    not_null!(out);
    let m = unsafe { &*moments }.inner.clone();
    guarded(|| {
        let inner = hsz_verdict(&DiagnosisInput::Moments(m), &VerdictConfig::default())?;
        unsafe { *out = Box::into_raw(Box::new(HszReport { inner })) };
        Ok(HszStatus::Ok)
    })
}

/// Verdict category of a report.
///
/// # Safety
/// `report` must be live; null yields `Inconclusive`.
#[no_mangle]
pub unsafe extern "C" fn hsz_report_verdict(report: *const HszReport) -> HszVerdict {
    if report.is_null() {
        return HszVerdict::Inconclusive;
    }
    match unsafe { &*report }.inner.verdict {
        Verdict::CertifiedHs => HszVerdict::CertifiedHs,
        Verdict::LikelyHs => HszVerdict::LikelyHs,
        Verdict::LikelyNotHs => HszVerdict::LikelyNotHs,
        Verdict::NotHsNecessaryViolation => HszVerdict::NotHsNecessaryViolation,
        Verdict::Inconclusive => HszVerdict::Inconclusive,
    }
}

/// Process-style exit code of a report: 0 positive, 1 negative, 2 undecided.
///
/// # Safety
/// `report` must be live; null yields 2.
#[no_mangle]
pub unsafe extern "C" fn hsz_report_exit_code(report: *const HszReport) -> i32 {
    if report.is_null() {
        return 2;
    }
    unsafe { &*report }.inner.verdict.exit_code()
}

/// Full report JSON; release with [`hsz_string_free`].
///
/// # Safety
/// `report` must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hsz_report_to_json(
    report: *const HszReport,
    out: *mut *mut c_char,
) -> HszStatus {
    not_null!(report);
    not_null!(out);
    give_string(unsafe { &*report }.inner.to_json(), out)
}

/// # Safety
/// `report` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hsz_report_free(report: *mut HszReport) {
    if !report.is_null() {
        drop(unsafe { Box::from_raw(report) });
    }
}
