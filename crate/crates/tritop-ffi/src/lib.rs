//! C ABI for the tritop library.
//!
//! Conventions:
//! - Every fallible function returns an `int32_t` status: 0 on success,
//!   otherwise the same codes the CLI uses as exit codes (2 validation,
//!   3 singular, 4 convergence, 5 i/o) plus 1 for null pointers or
//!   internal panics.
//! - `tritop_series_*` operate on an opaque handle produced by the invert
//!   functions; free it with `tritop_series_free`.
//! - `tritop_last_error` returns a thread-local NUL-terminated message for
//!   the most recent failure on this thread; the pointer stays valid until
//!   the next failing call on the same thread.
//!
//! The header is generated into `include/tritop.h` at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use tritop::{
    default_newton_tol, estimate_decay_rate, fundamental, invert_naive, invert_newton, Error,
    RealSeq,
};

pub const TRITOP_OK: i32 = 0;
pub const TRITOP_ERR_PANIC_OR_NULL: i32 = 1;
pub const TRITOP_ERR_VALIDATION: i32 = 2;
pub const TRITOP_ERR_SINGULAR: i32 = 3;
pub const TRITOP_ERR_CONVERGENCE: i32 = 4;
pub const TRITOP_ERR_IO: i32 = 5;

/// Inversion method selector for the C API.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum TritopMethod {
    /// Quadratic-time recurrence with compensated accumulation.
    Naive = 0,
    /// Newton doubling over fast convolution.
    Newton = 1,
    /// Naive for n <= 4096, Newton above.
    Auto = 2,
}

/// Opaque inversion result: the symbol prefix `a`, its inverse `b`, and
/// the prefix sums `u`, all of length `n`.
pub struct TritopSeries {
    a: Vec<f64>,
    b: Vec<f64>,
    u: Vec<f64>,
    au_residual: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn code_of(e: &Error) -> i32 {
    e.exit_code()
}

fn guard<F: FnOnce() -> i32>(f: F) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => {
            set_error("internal panic");
            TRITOP_ERR_PANIC_OR_NULL
        }
    }
}

/// Returns the error message of the most recent failure on this thread.
/// Never null; empty string when no error has occurred.
#[no_mangle]
pub extern "C" fn tritop_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

fn invert_impl(a: &[f64], n: usize, method: TritopMethod) -> Result<TritopSeries, Error> {
    let a = RealSeq::new(a.to_vec())?;
    let inv = match method {
        TritopMethod::Naive => invert_naive(&a, n)?,
        TritopMethod::Newton => invert_newton(&a, n, default_newton_tol(n))?,
        TritopMethod::Auto => {
            if n <= 4096 {
                invert_naive(&a, n)?
            } else {
                invert_newton(&a, n, default_newton_tol(n))?
            }
        }
    };
    let f = fundamental(&a, &inv.b)?;
    let mut a_vals = a.values().to_vec();
    a_vals.resize(n, 0.0);
    a_vals.truncate(n);
    Ok(TritopSeries {
        a: a_vals,
        b: inv.b.values().to_vec(),
        u: f.u.values().to_vec(),
        au_residual: inv.au_residual,
    })
}

/// Invert the triangular Toeplitz symbol given by `a[0..len]` to order `n`.
///
/// # Safety
/// `a` must point to `len` readable doubles and `out` to a writable
/// pointer slot. On success `*out` owns a new handle.
#[no_mangle]
pub unsafe extern "C" fn tritop_invert(
    a: *const f64,
    len: usize,
    n: usize,
    method: TritopMethod,
    out: *mut *mut TritopSeries,
) -> i32 {
    if a.is_null() || out.is_null() || len == 0 {
        set_error("null pointer or empty input");
        return TRITOP_ERR_PANIC_OR_NULL;
    }
    let a = slice::from_raw_parts(a, len);
    guard(|| match invert_impl(a, n, method) {
        Ok(series) => {
            *out = Box::into_raw(Box::new(series));
            TRITOP_OK
        }
        Err(e) => {
            set_error(&e.to_string());
            code_of(&e)
        }
    })
}

/// Invert the power-law symbol a_k = (1+k)^(-alpha) to order `n`.
///
/// # Safety
/// `out` must point to a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn tritop_invert_power_law(
    alpha: f64,
    n: usize,
    method: TritopMethod,
    out: *mut *mut TritopSeries,
) -> i32 {
    if out.is_null() {
        set_error("null output pointer");
        return TRITOP_ERR_PANIC_OR_NULL;
    }
    guard(|| {
        let spec = tritop::GeneratorSpec::power_law(alpha, n);
        let a = match tritop::generate(&spec) {
            Ok(a) => a,
            Err(e) => {
                set_error(&e.to_string());
                return code_of(&e);
            }
        };
        match invert_impl(a.values(), n, method) {
            Ok(series) => {
                *out = Box::into_raw(Box::new(series));
                TRITOP_OK
            }
            Err(e) => {
                set_error(&e.to_string());
                code_of(&e)
            }
        }
    })
}

/// Number of entries in each of the three stored sequences.
///
/// # Safety
/// `h` must be a live handle from an invert call.
#[no_mangle]
pub unsafe extern "C" fn tritop_series_len(h: *const TritopSeries) -> usize {
    if h.is_null() {
        return 0;
    }
    (*h).b.len()
}

/// Sampled max deviation of conv(a, u) from the all-ones sequence.
///
/// # Safety
/// `h` must be a live handle; returns NaN for null.
#[no_mangle]
pub unsafe extern "C" fn tritop_series_au_residual(h: *const TritopSeries) -> f64 {
    if h.is_null() {
        return f64::NAN;
    }
    (*h).au_residual
}

unsafe fn copy_out(src: &[f64], dst: *mut f64, cap: usize) -> i32 {
    if dst.is_null() {
        set_error("null output buffer");
        return TRITOP_ERR_PANIC_OR_NULL;
    }
    if cap < src.len() {
        set_error("output buffer too small");
        return TRITOP_ERR_VALIDATION;
    }
    slice::from_raw_parts_mut(dst, src.len()).copy_from_slice(src);
    TRITOP_OK
}

/// Copy the symbol prefix `a` (zero-padded to n) into `dst[0..cap]`.
///
/// # Safety
/// `h` live handle; `dst` writable for `cap` doubles, cap >= len.
#[no_mangle]
pub unsafe extern "C" fn tritop_series_a(h: *const TritopSeries, dst: *mut f64, cap: usize) -> i32 {
    if h.is_null() {
        set_error("null handle");
        return TRITOP_ERR_PANIC_OR_NULL;
    }
    copy_out(&(*h).a, dst, cap)
}

/// Copy the inverse sequence `b` into `dst[0..cap]`.
///
/// # Safety
/// `h` live handle; `dst` writable for `cap` doubles, cap >= len.
#[no_mangle]
pub unsafe extern "C" fn tritop_series_b(h: *const TritopSeries, dst: *mut f64, cap: usize) -> i32 {
    if h.is_null() {
        set_error("null handle");
        return TRITOP_ERR_PANIC_OR_NULL;
    }
    copy_out(&(*h).b, dst, cap)
}

/// Copy the prefix-sum sequence `u` into `dst[0..cap]`.
///
/// # Safety
/// `h` live handle; `dst` writable for `cap` doubles, cap >= len.
#[no_mangle]
pub unsafe extern "C" fn tritop_series_u(h: *const TritopSeries, dst: *mut f64, cap: usize) -> i32 {
    if h.is_null() {
        set_error("null handle");
        return TRITOP_ERR_PANIC_OR_NULL;
    }
    copy_out(&(*h).u, dst, cap)
}

/// Release a handle. Null is a no-op; double-free is undefined behavior.
///
/// # Safety
/// `h` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn tritop_series_free(h: *mut TritopSeries) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Fit the log-log decay slope of `values[0..len]` over the default tail
/// window; writes the fitted rate to `*out_rate`.
///
/// # Safety
/// `values` readable for `len` doubles; `out_rate` writable.
#[no_mangle]
pub unsafe extern "C" fn tritop_decay_rate(
    values: *const f64,
    len: usize,
    out_rate: *mut f64,
) -> i32 {
    if values.is_null() || out_rate.is_null() || len == 0 {
        set_error("null pointer or empty input");
        return TRITOP_ERR_PANIC_OR_NULL;
    }
    let v = slice::from_raw_parts(values, len);
    guard(|| {
        let seq = match RealSeq::new(v.to_vec()) {
            Ok(s) => s,
            Err(e) => {
                set_error(&e.to_string());
                return code_of(&e);
            }
        };
        match estimate_decay_rate(&seq, None) {
            Ok(fit) => {
                *out_rate = fit.rate;
                TRITOP_OK
            }
            Err(e) => {
                set_error(&e.to_string());
                code_of(&e)
            }
        }
    })
}
