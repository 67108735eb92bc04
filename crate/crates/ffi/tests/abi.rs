use std::ffi::{CStr, CString};
use std::ptr;

use uarea_ffi::*;

fn owned(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { uarea_string_free(s) };
    out
}

fn last_error() -> String {
    let p = uarea_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn val(n: u32, src: &str) -> *mut UareaValuation {
    let src = CString::new(src).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { uarea_valuation_parse(n, src.as_ptr(), &mut out) }, UareaStatus::Ok);
    out
}

fn measure(n: u32, src: &str) -> *mut UareaMeasure {
    let src = CString::new(src).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { uarea_measure_parse(n, src.as_ptr(), &mut out) }, UareaStatus::Ok);
    out
}

#[test]
fn act_and_glob() {
    unsafe {
        let t_hat = val(2, "t_hat");
        let g = measure(2, "Gamma[2,1]");
        let mut out = ptr::null_mut();
        assert_eq!(uarea_act(t_hat, g, &mut out), UareaStatus::Ok);
        assert_eq!(owned(uarea_measure_to_string(out)), "4/3 * pi^-1 * Gamma[1,0]");
        uarea_measure_free(out);

        let b = measure(2, "B[3,1]");
        let mut v = ptr::null_mut();
        assert_eq!(uarea_glob(b, &mut v), UareaStatus::Ok);
        assert_eq!(owned(uarea_valuation_to_string(v)), "mu[3,1]");
        assert_eq!(uarea_valuation_dimension(v), 2);

        uarea_valuation_free(v);
        uarea_measure_free(b);
        uarea_measure_free(g);
        uarea_valuation_free(t_hat);
    }
}

#[test]
fn algebra_operations() {
    unsafe {
        let t = val(3, "t");
        let mut tt = ptr::null_mut();
        assert_eq!(uarea_valuation_product(t, t, &mut tt), UareaStatus::Ok);
        let expected = val(3, "t^2");
        assert!(uarea_valuation_equal(tt, expected));

        let mut f = ptr::null_mut();
        assert_eq!(uarea_valuation_fourier(tt, &mut f), UareaStatus::Ok);
        let mut ff = ptr::null_mut();
        assert_eq!(uarea_valuation_fourier(f, &mut ff), UareaStatus::Ok);
        assert!(uarea_valuation_equal(ff, tt));

        let json = owned(uarea_valuation_to_json(tt));
        assert!(json.starts_with('{'), "{json}");

        for p in [t, tt, expected, f, ff] {
            uarea_valuation_free(p);
        }
    }
}

#[test]
fn first_variation_is_angular() {
    unsafe {
        let phi = val(3, "t^2");
        let mut m = ptr::null_mut();
        assert_eq!(uarea_first_variation(phi, &mut m), UareaStatus::Ok);
        let mut angular = false;
        assert_eq!(uarea_measure_is_angular(m, &mut angular), UareaStatus::Ok);
        assert!(angular);
        let n = measure(3, "N[1,0]");
        assert_eq!(uarea_measure_is_angular(n, &mut angular), UareaStatus::Ok);
        assert!(!angular);
        uarea_measure_free(n);
        uarea_measure_free(m);
        uarea_valuation_free(phi);
    }
}

#[test]
fn dimensions() {
    let mut d = 0usize;
    unsafe {
        assert_eq!(uarea_dim_val(3, 3, &mut d), UareaStatus::Ok);
        assert_eq!(d, 2);
        assert_eq!(uarea_dim_area(2, 1, &mut d), UareaStatus::Ok);
        assert_eq!(d, 2);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let src = CString::new("B[2,1]").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(uarea_measure_parse(2, src.as_ptr(), &mut out), UareaStatus::Parse);
        assert!(out.is_null());
        assert!(last_error().contains("k - 2q - 1 >= 0"));

        assert_eq!(uarea_measure_parse(2, ptr::null(), &mut out), UareaStatus::NullPointer);
        assert_eq!(uarea_measure_parse(0, src.as_ptr(), &mut out), UareaStatus::InvalidArgument);

        let bad = [0xffu8, 0];
        assert_eq!(uarea_valuation_parse(2, bad.as_ptr().cast(), &mut ptr::null_mut()), UareaStatus::InvalidUtf8);

        let a = val(2, "t");
        let b = val(3, "t");
        let mut c = ptr::null_mut();
        assert_eq!(uarea_valuation_product(a, b, &mut c), UareaStatus::InvalidArgument);
        assert!(c.is_null());
        uarea_valuation_free(a);
        uarea_valuation_free(b);

        assert_eq!(uarea_glob(ptr::null(), &mut ptr::null_mut()), UareaStatus::NullPointer);
        assert!(uarea_measure_to_string(ptr::null()).is_null());
        uarea_string_free(ptr::null_mut());
        uarea_valuation_free(ptr::null_mut());
    }
}

#[test]
fn success_clears_the_last_error() {
    unsafe {
        let src = CString::new("mu[9,9]").unwrap();
        assert_ne!(uarea_valuation_parse(2, src.as_ptr(), &mut ptr::null_mut()), UareaStatus::Ok);
        assert!(!uarea_last_error().is_null());
        let v = val(2, "chi");
        assert!(uarea_last_error().is_null());
        uarea_valuation_free(v);
    }
}

#[test]
fn verify_through_the_abi() {
    let name = CString::new("kernel-lemma").unwrap();
    assert_eq!(unsafe { uarea_verify(name.as_ptr(), 1, 3) }, UareaStatus::Ok);
    let unknown = CString::new("nope").unwrap();
    assert_eq!(unsafe { uarea_verify(unknown.as_ptr(), 1, 3) }, UareaStatus::InvalidArgument);
    assert_eq!(unsafe { uarea_verify(name.as_ptr(), 3, 1) }, UareaStatus::InvalidArgument);
}
