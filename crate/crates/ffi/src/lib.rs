//! C interface to `uarea`.
//!
//! Valuations and area measures cross the boundary as opaque handles. Every
//! fallible function returns a [`UareaStatus`]; on failure the message is
//! available from [`uarea_last_error`] on the same thread. Strings returned
//! by the library must be released with [`uarea_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use uarea::areamod::{self, AreaMeasure, AreaModule};
use uarea::valalg::{self, ValAlgebra, Valuation};
use uarea::{expr, verify, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UareaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    CheckFailed = 5,
    Panic = 6,
}

/// An element of the valuation algebra for a fixed n.
pub struct UareaValuation(Valuation);

/// An element of the module of area measures for a fixed n.
pub struct UareaMeasure(AreaMeasure);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(msg).expect("no interior nul")));
}

fn status_of(e: &Error) -> UareaStatus {
    match e {
        Error::Parse { .. } => UareaStatus::Parse,
        _ => UareaStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), UareaStatus>) -> UareaStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UareaStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            UareaStatus::Panic
        }
    }
}

fn lib<T>(r: uarea::Result<T>) -> Result<T, UareaStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, UareaStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(UareaStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        UareaStatus::InvalidUtf8
    })
}

unsafe fn ref_arg<'a, T>(p: *const T) -> Result<&'a T, UareaStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null handle");
        UareaStatus::NullPointer
    })
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> Result<(), UareaStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(UareaStatus::NullPointer);
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn uarea_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn uarea_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a valuation such as `"2*t^2 - mu[2,1]"` in dimension `n`.
///
/// # Safety
/// `src` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uarea_valuation_parse(n: u32, src: *const c_char, out: *mut *mut UareaValuation) -> UareaStatus {
    guard(|| {
        let src = str_arg(src)?;
        if n == 0 {
            set_error("n must be at least 1");
            return Err(UareaStatus::InvalidArgument);
        }
        let v = lib(expr::parse_val(src, n))?;
        write_out(out, UareaValuation(v))
    })
}

/// # Safety
/// `v` must be NULL or a handle from this library that was not yet freed.
#[no_mangle]
pub unsafe extern "C" fn uarea_valuation_free(v: *mut UareaValuation) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// # Safety
/// `v` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn uarea_valuation_dimension(v: *const UareaValuation) -> u32 {
    v.as_ref().map_or(0, |v| v.0.n())
}

/// Display form of `v`; free with `uarea_string_free`. NULL on a null handle.
///
/// # Safety
/// `v` must be NULL or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn uarea_valuation_to_string(v: *const UareaValuation) -> *mut c_char {
    v.as_ref().map_or(ptr::null_mut(), |v| to_c_string(v.0.to_string()))
}

/// # Safety
/// `v` must be NULL or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn uarea_valuation_to_json(v: *const UareaValuation) -> *mut c_char {
    v.as_ref().map_or(ptr::null_mut(), |v| {
        to_c_string(serde_json::to_string(&v.0.to_json()).expect("serializable"))
    })
}

/// # Safety
/// `a` and `b` must be valid handles.
#[no_mangle]
pub unsafe extern "C" fn uarea_valuation_equal(a: *const UareaValuation, b: *const UareaValuation) -> bool {
    match (a.as_ref(), b.as_ref()) {
        (Some(a), Some(b)) => a.0 == b.0,
        _ => false,
    }
}

unsafe fn binary_val(
    a: *const UareaValuation,
    b: *const UareaValuation,
    out: *mut *mut UareaValuation,
    op: fn(&ValAlgebra, &Valuation, &Valuation) -> uarea::Result<Valuation>,
) -> UareaStatus {
    guard(|| {
        let (a, b) = (ref_arg(a)?, ref_arg(b)?);
        let alg = lib(ValAlgebra::get(a.0.n()))?;
        let v = lib(op(&alg, &a.0, &b.0))?;
        write_out(out, UareaValuation(v))
    })
}

/// Alesker product.
///
/// # Safety
/// `a`, `b` must be valid handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uarea_valuation_product(
    a: *const UareaValuation,
    b: *const UareaValuation,
    out: *mut *mut UareaValuation,
) -> UareaStatus {
    binary_val(a, b, out, ValAlgebra::product)
}

/// Bernig-Fu convolution.
///
/// # Safety
/// `a`, `b` must be valid handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uarea_valuation_convolution(
    a: *const UareaValuation,
    b: *const UareaValuation,
    out: *mut *mut UareaValuation,
) -> UareaStatus {
    binary_val(a, b, out, ValAlgebra::convolution)
}

/// # Safety
/// `v` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uarea_valuation_fourier(v: *const UareaValuation, out: *mut *mut UareaValuation) -> UareaStatus {
    guard(|| {
        let v = ref_arg(v)?;
        write_out(out, UareaValuation(valalg::fourier(&v.0)))
    })
}

/// Parses an area measure such as `"B[3,1] - 2*Gamma[2,1]"` in dimension `n`.
///
/// # Safety
/// `src` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uarea_measure_parse(n: u32, src: *const c_char, out: *mut *mut UareaMeasure) -> UareaStatus {
    guard(|| {
        let src = str_arg(src)?;
        if n == 0 {
            set_error("n must be at least 1");
            return Err(UareaStatus::InvalidArgument);
        }
        let m = lib(expr::parse_area(src, n))?;
        write_out(out, UareaMeasure(m))
    })
}

/// # Safety
/// `m` must be NULL or a handle from this library that was not yet freed.
#[no_mangle]
pub unsafe extern "C" fn uarea_measure_free(m: *mut UareaMeasure) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be NULL or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn uarea_measure_to_string(m: *const UareaMeasure) -> *mut c_char {
    m.as_ref().map_or(ptr::null_mut(), |m| to_c_string(m.0.to_string()))
}

/// # Safety
/// `m` must be NULL or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn uarea_measure_to_json(m: *const UareaMeasure) -> *mut c_char {
    m.as_ref().map_or(ptr::null_mut(), |m| {
        to_c_string(serde_json::to_string(&m.0.to_json()).expect("serializable"))
    })
}

/// # Safety
/// `a` and `b` must be valid handles.
#[no_mangle]
pub unsafe extern "C" fn uarea_measure_equal(a: *const UareaMeasure, b: *const UareaMeasure) -> bool {
    match (a.as_ref(), b.as_ref()) {
        (Some(a), Some(b)) => a.0 == b.0,
        _ => false,
    }
}

/// Convolution of a valuation with an area measure.
///
/// # Safety
/// `phi`, `m` must be valid handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uarea_act(
    phi: *const UareaValuation,
    m: *const UareaMeasure,
    out: *mut *mut UareaMeasure,
) -> UareaStatus {
    guard(|| {
        let (phi, m) = (ref_arg(phi)?, ref_arg(m)?);
        let module = lib(AreaModule::get(m.0.n()))?;
        write_out(out, UareaMeasure(lib(module.act(&phi.0, &m.0))?))
    })
}

/// Globalization of an area measure.
///
/// # Safety
/// `m` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uarea_glob(m: *const UareaMeasure, out: *mut *mut UareaValuation) -> UareaStatus {
    guard(|| {
        let m = ref_arg(m)?;
        let module = lib(AreaModule::get(m.0.n()))?;
        write_out(out, UareaValuation(lib(module.glob(&m.0))?))
    })
}

/// First variation of a valuation.
///
/// # Safety
/// `phi` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uarea_first_variation(phi: *const UareaValuation, out: *mut *mut UareaMeasure) -> UareaStatus {
    guard(|| {
        let phi = ref_arg(phi)?;
        let module = lib(AreaModule::get(phi.0.n()))?;
        write_out(out, UareaMeasure(lib(module.delta_map(&phi.0))?))
    })
}

/// Writes whether `m` is angular.
///
/// # Safety
/// `m` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uarea_measure_is_angular(m: *const UareaMeasure, out: *mut bool) -> UareaStatus {
    guard(|| {
        let m = ref_arg(m)?;
        if out.is_null() {
            set_error("null output pointer");
            return Err(UareaStatus::NullPointer);
        }
        let module = lib(AreaModule::get(m.0.n()))?;
        *out = lib(module.is_angular(&m.0))?;
        Ok(())
    })
}

/// Dimension of the degree-`k` part of the valuation algebra.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uarea_dim_val(n: u32, k: i64, out: *mut usize) -> UareaStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return Err(UareaStatus::NullPointer);
        }
        *out = lib(valalg::dim_val(n, k))?;
        Ok(())
    })
}

/// Dimension of the degree-`k` part of the module of area measures.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uarea_dim_area(n: u32, k: i64, out: *mut usize) -> UareaStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return Err(UareaStatus::NullPointer);
        }
        *out = lib(areamod::dim_area(n, k))?;
        Ok(())
    })
}

/// Runs the named check for every n in `n_min..=n_max`. Returns
/// `UAREA_STATUS_CHECK_FAILED` if any of them fails.
///
/// # Safety
/// `name` must be a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn uarea_verify(name: *const c_char, n_min: u32, n_max: u32) -> UareaStatus {
    guard(|| {
        let name = str_arg(name)?;
        let check = lib(verify::find(name))?;
        let report = lib(verify::run(&[check], n_min, n_max, false))?;
        if report.passed {
            Ok(())
        } else {
            set_error(report.to_string());
            Err(UareaStatus::CheckFailed)
        }
    })
}
