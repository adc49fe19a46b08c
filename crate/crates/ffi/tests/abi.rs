use std::ffi::CStr;
use std::process::Command;
use std::ptr;

use commbound_ffi::*;

fn last_error() -> String {
    let p = cb_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn gamma0_handle_roundtrip() {
    unsafe {
        let mut curve = ptr::null_mut();
        assert_eq!(cb_curve_gamma0(20_000, 256, &mut curve), CbStatus::Ok);
        assert!(cb_last_error_message().is_null());
        let mut v = 0.0;
        assert_eq!(cb_curve_eval(curve, 0.25, &mut v), CbStatus::Ok);
        assert!((v - 0.5).abs() < 1e-12);
        let mut top = 0.0;
        assert_eq!(cb_curve_delta_max(curve, &mut top), CbStatus::Ok);
        assert_eq!(top, 1.0);

        let mut count = 0;
        assert_eq!(cb_curve_segment_count(curve, &mut count), CbStatus::Ok);
        assert!(count > 0);
        let mut seg = CbSegment::default();
        assert_eq!(cb_curve_segment(curve, 0, &mut seg), CbStatus::Ok);
        assert_eq!(seg.delta_start, 0.0);
        assert_eq!(cb_curve_segment(curve, count - 1, &mut seg), CbStatus::Ok);
        assert_eq!(seg.delta_end, 1.0);
        assert_eq!(cb_curve_segment(curve, count, &mut seg), CbStatus::InvalidArgument);
        assert!(last_error().contains("out of range"));
        cb_curve_free(curve);
        cb_curve_free(ptr::null_mut());
    }
}

#[test]
fn circle_curves_and_lower_bound() {
    unsafe {
        let mut curve = ptr::null_mut();
        assert_eq!(cb_curve_truncation(CbFunction::Triangle, 16, &mut curve), CbStatus::Ok);
        let (mut upper, mut lower) = (0.0, 0.0);
        assert_eq!(cb_curve_eval(curve, 1.0, &mut upper), CbStatus::Ok);
        assert_eq!(cb_eta_lower(CbFunction::Triangle, 1.0, 0, &mut lower), CbStatus::Ok);
        let want = 4.0 / std::f64::consts::PI * 0.5f64.asin();
        assert!((lower - want).abs() < 1e-9);
        assert!(lower <= upper);
        assert_eq!(cb_curve_eval(curve, -1.0, &mut upper), CbStatus::InvalidArgument);
        cb_curve_free(curve);

        let mut p = ptr::null_mut();
        assert_eq!(cb_curve_pedersen(1000, &mut p), CbStatus::Ok);
        cb_curve_free(p);
        assert_eq!(cb_curve_pedersen(0, &mut p), CbStatus::InvalidArgument);
    }
}

#[test]
fn scalars_and_matrices() {
    unsafe {
        let mut c = 0.0;
        assert_eq!(cb_sqrt_coefficient(4, &mut c), CbStatus::Ok);
        assert_eq!(c, 5.0 / 128.0);
        assert_eq!(cb_sqrt_coefficient(0, &mut c), CbStatus::InvalidArgument);

        let z = |re| CbComplex { re, im: 0.0 };
        let diag = [z(1.0), z(0.0), z(0.0), z(-1.0)];
        let swap = [z(0.0), z(1.0), z(1.0), z(0.0)];
        let mut n = 0.0;
        assert_eq!(cb_op_norm(2, diag.as_ptr(), &mut n), CbStatus::Ok);
        assert!((n - 1.0).abs() < 1e-14);
        assert_eq!(cb_commutator_norm(2, diag.as_ptr(), swap.as_ptr(), &mut n), CbStatus::Ok);
        assert!((n - 2.0).abs() < 1e-14);
        assert_eq!(cb_op_norm(0, diag.as_ptr(), &mut n), CbStatus::InvalidArgument);
        assert_eq!(cb_op_norm(2, ptr::null(), &mut n), CbStatus::NullPointer);
        assert!(last_error().contains("entries"));
    }
}

#[test]
fn validation_sweep() {
    let mut margin = f64::NAN;
    assert_eq!(unsafe { cb_validate_sqrt(200, 2, 4, 7, &mut margin) }, CbStatus::Ok);
    assert!(margin >= -1e-8);
    assert_eq!(unsafe { cb_validate_sqrt(10, 5, 2, 7, &mut margin) }, CbStatus::InvalidArgument);
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/commbound.h");
    let text = std::fs::read_to_string(header).unwrap();
    for symbol in ["cb_curve_gamma0", "cb_curve_free", "cb_validate_sqrt", "CB_STATUS_VIOLATION"] {
        assert!(text.contains(symbol), "{symbol}");
    }
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c", header])
        .status();
    match status {
        Ok(s) => assert!(s.success(), "header failed to compile"),
        Err(e) => eprintln!("no C compiler, skipping syntax check: {e}"),
    }
}
