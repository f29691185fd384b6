//! Exercises the C ABI exactly as a foreign caller would: JSON in, handles
//! and status codes out.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use hsz_ffi::*;

fn cstr(text: &str) -> CString {
    CString::new(text).unwrap()
}

fn take_string(ptr: *mut c_char) -> String {
    assert!(!ptr.is_null());
    let text = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string();
    unsafe { hsz_string_free(ptr) };
    text
}

fn parse_params(json: &str) -> *mut HszSchurParams {
    let mut handle = ptr::null_mut();
    let status = unsafe { hsz_schur_params_parse(cstr(json).as_ptr(), &mut handle) };
    assert_eq!(status, HszStatus::Ok, "{}", last_error());
    handle
}

fn parse_moments(json: &str) -> *mut HszMoments {
    let mut handle = ptr::null_mut();
    let status = unsafe { hsz_moments_parse(cstr(json).as_ptr(), &mut handle) };
    assert_eq!(status, HszStatus::Ok, "{}", last_error());
    handle
}

fn last_error() -> String {
    let ptr = hsz_last_error_message();
    if ptr.is_null() {
        return String::new();
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string()
}

#[test]
fn version_is_a_static_string() {
    let v = unsafe { CStr::from_ptr(hsz_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn params_round_trip_through_the_boundary() {
    let gamma =
        parse_params(r#"{"gamma": [[0.3, -0.1], [0.0, 0.5]], "terminal_unimodular": false}"#);
    assert_eq!(unsafe { hsz_schur_params_len(gamma) }, 2);
    assert!(!unsafe { hsz_schur_params_is_terminal(gamma) });

    let (mut re, mut im) = (0.0, 0.0);
    let status = unsafe { hsz_schur_params_entry(gamma, 1, &mut re, &mut im) };
    assert_eq!(status, HszStatus::Ok);
    assert_eq!((re, im), (0.0, 0.5));
    // zero-extension past the support
    unsafe { hsz_schur_params_entry(gamma, 9, &mut re, &mut im) };
    assert_eq!((re, im), (0.0, 0.0));

    let mut json = ptr::null_mut();
    assert_eq!(
        unsafe { hsz_schur_params_to_json(gamma, &mut json) },
        HszStatus::Ok
    );
    let text = take_string(json);
    assert!(text.contains("terminal_unimodular"));
    unsafe { hsz_schur_params_free(gamma) };
}

#[test]
fn invalid_inputs_set_statuses_and_messages() {
    let mut handle = ptr::null_mut();
    let status = unsafe { hsz_schur_params_parse(cstr("not json").as_ptr(), &mut handle) };
    assert_eq!(status, HszStatus::BadInput);
    assert!(!last_error().is_empty());

    // modulus above one violates the contraction invariant
    let status = unsafe {
        hsz_schur_params_parse(
            cstr(r#"{"gamma": [[1.5, 0.0]], "terminal_unimodular": false}"#).as_ptr(),
            &mut handle,
        )
    };
    assert_eq!(status, HszStatus::BadInput);

    let status = unsafe { hsz_schur_params_parse(ptr::null(), &mut handle) };
    assert_eq!(status, HszStatus::NullArgument);

    // indefinite moments fail the positivity check
    let mut m = ptr::null_mut();
    let status = unsafe {
        hsz_moments_parse(
            cstr(r#"{"moments": [[1.0, 0.0], [1.4, 0.0]]}"#).as_ptr(),
            &mut m,
        )
    };
    assert_eq!(status, HszStatus::BadInput);
}

#[test]
fn synthesis_and_analysis_invert_across_the_boundary() {
    let gamma =
        parse_params(r#"{"gamma": [[0.3, 0.0], [0.5, 0.0]], "terminal_unimodular": false}"#);
    let mut series = ptr::null_mut();
    assert_eq!(
        unsafe { hsz_inverse_schur(gamma, 16, &mut series) },
        HszStatus::Ok
    );
    assert_eq!(unsafe { hsz_series_order(series) }, 16);
    let (mut re, mut im) = (0.0, 0.0);
    unsafe { hsz_series_coeff(series, 0, &mut re, &mut im) };
    assert!((re - 0.3).abs() < 1e-14 && im.abs() < 1e-14);

    let mut recovered = ptr::null_mut();
    let mut trusted = 0usize;
    assert_eq!(
        unsafe { hsz_schur_algorithm(series, 16, &mut recovered, &mut trusted) },
        HszStatus::Ok
    );
    assert_eq!(trusted, 17);
    unsafe { hsz_schur_params_entry(recovered, 1, &mut re, &mut im) };
    assert!((re - 0.5).abs() < 1e-11 && im.abs() < 1e-11);

    unsafe {
        hsz_schur_params_free(recovered);
        hsz_series_free(series);
        hsz_schur_params_free(gamma);
    }
}

#[test]
fn moment_routes_and_oracles() {
    let m = parse_moments(
        r#"{"moments": [[1.0, 0.0], [0.3, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]}"#,
    );

    let mut via_schur = ptr::null_mut();
    assert_eq!(
        unsafe { hsz_gamma_from_moments(m, 6, &mut via_schur) },
        HszStatus::Ok,
        "{}",
        last_error()
    );
    let mut via_levinson = ptr::null_mut();
    assert_eq!(unsafe { hsz_levinson(m, &mut via_levinson) }, HszStatus::Ok);
    let (mut re_a, mut im_a, mut re_b, mut im_b) = (0.0, 0.0, 0.0, 0.0);
    for k in 0..6 {
        unsafe {
            hsz_schur_params_entry(via_schur, k, &mut re_a, &mut im_a);
            hsz_schur_params_entry(via_levinson, k, &mut re_b, &mut im_b);
        }
        assert!((re_a - re_b).hypot(im_a - im_b) < 1e-10);
    }

    let mut riesz = 0.0;
    assert_eq!(unsafe { hsz_riesz_norm(m, 3, &mut riesz) }, HszStatus::Ok);
    assert!((1.0..2.0).contains(&riesz));
    let mut conj = 0.0;
    assert_eq!(
        unsafe { hsz_conjugation_ratio(m, 3, &mut conj) },
        HszStatus::Ok
    );
    assert!(conj <= 2.0 * riesz + 1.0 + 1e-10);

    unsafe {
        hsz_schur_params_free(via_schur);
        hsz_schur_params_free(via_levinson);
        hsz_moments_free(m);
    }
}

#[test]
fn certificates_sweeps_and_matrices() {
    let gamma =
        parse_params(r#"{"gamma": [[0.0, 0.0], [0.6, 0.0]], "terminal_unimodular": false}"#);

    let (mut passes, mut c_bound) = (false, 0.0);
    assert_eq!(
        unsafe { hsz_strong_szego(gamma, &mut passes, &mut c_bound) },
        HszStatus::Ok
    );
    assert!(passes);
    assert!((c_bound - 0.8).abs() < 1e-14);

    let sizes = [2usize, 4, 8];
    let mut values = [0.0f64; 3];
    assert_eq!(
        unsafe { hsz_sigma_min_sweep(gamma, sizes.as_ptr(), 3, values.as_mut_ptr()) },
        HszStatus::Ok
    );
    for v in values {
        assert!((v - 0.8).abs() < 1e-12);
    }

    let mut json = ptr::null_mut();
    assert_eq!(
        unsafe { hsz_l_matrix_json(gamma, 3, false, &mut json) },
        HszStatus::Ok
    );
    let text = take_string(json);
    assert!(text.contains("\"rows\":3"));

    // direct route refuses sizes past the cap
    let mut json = ptr::null_mut();
    assert_eq!(
        unsafe { hsz_l_matrix_json(gamma, 64, true, &mut json) },
        HszStatus::CapExceeded
    );

    unsafe { hsz_schur_params_free(gamma) };
}

#[test]
fn szego_identity_residual_across_boundary() {
    let gamma =
        parse_params(r#"{"gamma": [[0.3, 0.0], [0.5, 0.0]], "terminal_unimodular": false}"#);
    let mut series = ptr::null_mut();
    unsafe { hsz_inverse_schur(gamma, 48, &mut series) };
    let mut residual = f64::NAN;
    assert_eq!(
        unsafe { hsz_szego_identity_residual(gamma, series, 1024, 0.999, &mut residual) },
        HszStatus::Ok
    );
    assert!(residual < 1e-6, "residual {residual}");
    unsafe {
        hsz_series_free(series);
        hsz_schur_params_free(gamma);
    }
}

#[test]
fn diagnosis_reports_verdicts() {
    // terminal sequence: necessary condition violated
    let gamma = parse_params(r#"{"gamma": [[0.2, 0.0], [0.0, 1.0]], "terminal_unimodular": true}"#);
    let mut report = ptr::null_mut();
    assert_eq!(
        unsafe { hsz_diagnose_gamma(gamma, &mut report) },
        HszStatus::Ok,
        "{}",
        last_error()
    );
    assert_eq!(
        unsafe { hsz_report_verdict(report) },
        HszVerdict::NotHsNecessaryViolation
    );
    assert_eq!(unsafe { hsz_report_exit_code(report) }, 1);
    let mut json = ptr::null_mut();
    assert_eq!(
        unsafe { hsz_report_to_json(report, &mut json) },
        HszStatus::Ok
    );
    let text = take_string(json);
    assert!(text.contains("not_hs_necessary_violation"));
    unsafe {
        hsz_report_free(report);
        hsz_schur_params_free(gamma);
    }

    // spike moments: strongly Szego, certified
    let m = parse_moments(
        r#"{"moments": [[1.0, 0.0], [0.3, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]}"#,
    );
    let mut report = ptr::null_mut();
    assert_eq!(
        unsafe { hsz_diagnose_moments(m, &mut report) },
        HszStatus::Ok,
        "{}",
        last_error()
    );
    assert_eq!(
        unsafe { hsz_report_verdict(report) },
        HszVerdict::CertifiedHs
    );
    assert_eq!(unsafe { hsz_report_exit_code(report) }, 0);
    unsafe {
        hsz_report_free(report);
        hsz_moments_free(m);
    }
}
