//! C ABI for the warpcheck library.
//!
//! Conventions: every fallible function returns a `wc_status`; results are
//! written through out-pointers. Handles (`wc_metric`, `wc_harmonic`) are
//! opaque, created by `*_create` functions and released by the matching
//! `*_free`. On any non-OK status a thread-local message is available via
//! `wc_last_error_message`.

#![allow(non_camel_case_types)]
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use warpcheck::catalog;
use warpcheck::curvature::{curvature_at, curvature_oracle};
use warpcheck::harmonic::RadialHarmonic;
use warpcheck::levelset::{auto_grid, monotone_series, w_at, Quantity};
use warpcheck::odes;
use warpcheck::profiles::{CatalogEntry, DEFAULT_EPSILON};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum wc_status {
    /// Success.
    WC_OK = 0,
    /// A pointer argument was null.
    WC_NULL_POINTER = 1,
    /// Arguments were invalid (bad name, parameter, or evaluation point).
    WC_INVALID_ARGUMENT = 2,
    /// A numerical computation failed (blow-up, non-convergence, pole).
    WC_NUMERIC_ERROR = 3,
}

/// Opaque handle to a catalog metric.
pub struct wc_metric {
    entry: CatalogEntry,
}

/// Opaque handle to a radial harmonic function on a metric.
pub struct wc_harmonic {
    inner: RadialHarmonic,
}

/// Pointwise curvature data of a metric.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct wc_curvature_point {
    pub t: f64,
    pub k_rad: f64,
    pub k_tan: f64,
    pub ric_11: f64,
    pub ric_aa: f64,
    pub sc: f64,
}

/// Monotone quantity selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum wc_quantity {
    WC_QUANTITY_PLUS = 0,
    WC_QUANTITY_MINUS = 1,
    WC_QUANTITY_MW = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = CString::new(sanitized).unwrap();
    });
}

fn fail(status: wc_status, msg: &str) -> wc_status {
    set_error(msg);
    status
}

/// Copy the last error message on this thread into `buf` (truncated to
/// `len - 1` bytes, always NUL-terminated). Returns the full message length.
#[no_mangle]
pub unsafe extern "C" fn wc_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

unsafe fn parse_params(
    keys: *const *const c_char,
    values: *const f64,
    n: usize,
) -> Result<BTreeMap<String, f64>, String> {
    let mut map = BTreeMap::new();
    if n == 0 {
        return Ok(map);
    }
    if keys.is_null() || values.is_null() {
        return Err("parameter arrays are null but count is nonzero".to_string());
    }
    for i in 0..n {
        let key = *keys.add(i);
        if key.is_null() {
            return Err(format!("parameter key {i} is null"));
        }
        let key = CStr::from_ptr(key)
            .to_str()
            .map_err(|_| format!("parameter key {i} is not UTF-8"))?;
        map.insert(key.to_string(), *values.add(i));
    }
    Ok(map)
}

/// Create a catalog metric by name with `n_params` key/value parameters.
#[no_mangle]
pub unsafe extern "C" fn wc_metric_create(
    name: *const c_char,
    param_keys: *const *const c_char,
    param_values: *const f64,
    n_params: usize,
    out: *mut *mut wc_metric,
) -> wc_status {
    if name.is_null() || out.is_null() {
        return fail(wc_status::WC_NULL_POINTER, "name or out pointer is null");
    }
    let name = match CStr::from_ptr(name).to_str() {
        Ok(s) => s,
        Err(_) => return fail(wc_status::WC_INVALID_ARGUMENT, "metric name is not UTF-8"),
    };
    let params = match parse_params(param_keys, param_values, n_params) {
        Ok(p) => p,
        Err(e) => return fail(wc_status::WC_INVALID_ARGUMENT, &e),
    };
    match catalog::build(name, &params) {
        Ok(entry) => {
            *out = Box::into_raw(Box::new(wc_metric { entry }));
            wc_status::WC_OK
        }
        Err(e) => fail(wc_status::WC_INVALID_ARGUMENT, &e.to_string()),
    }
}

#[no_mangle]
pub unsafe extern "C" fn wc_metric_free(m: *mut wc_metric) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Evaluation domain of the metric.
#[no_mangle]
pub unsafe extern "C" fn wc_metric_domain(
    m: *const wc_metric,
    lo: *mut f64,
    hi: *mut f64,
) -> wc_status {
    if m.is_null() || lo.is_null() || hi.is_null() {
        return fail(wc_status::WC_NULL_POINTER, "null pointer argument");
    }
    let m_ref = &*m;
    let d = m_ref.entry.profile.domain;
    *lo = d.lo;
    *hi = d.hi;
    wc_status::WC_OK
}

/// Closed-form curvature at an interior point.
#[no_mangle]
pub unsafe extern "C" fn wc_metric_curvature(
    m: *const wc_metric,
    t: f64,
    out: *mut wc_curvature_point,
) -> wc_status {
    if m.is_null() || out.is_null() {
        return fail(wc_status::WC_NULL_POINTER, "null pointer argument");
    }
    let profile = &(*m).entry.profile;
    if !profile.domain.contains(t) {
        return fail(wc_status::WC_INVALID_ARGUMENT, "t outside the metric domain");
    }
    match curvature_at(profile, t) {
        Ok(c) => {
            *out = wc_curvature_point {
                t: c.t,
                k_rad: c.k_rad,
                k_tan: c.k_tan,
                ric_11: c.ric_11,
                ric_aa: c.ric_aa,
                sc: c.sc,
            };
            wc_status::WC_OK
        }
        Err(e) => fail(wc_status::WC_NUMERIC_ERROR, &e.to_string()),
    }
}

/// Finite-difference curvature oracle at an interior point.
#[no_mangle]
pub unsafe extern "C" fn wc_metric_curvature_oracle(
    m: *const wc_metric,
    t: f64,
    step: f64,
    out: *mut wc_curvature_point,
) -> wc_status {
    if m.is_null() || out.is_null() {
        return fail(wc_status::WC_NULL_POINTER, "null pointer argument");
    }
    match curvature_oracle(&(*m).entry.profile, t, step) {
        Ok(c) => {
            *out = wc_curvature_point {
                t: c.t,
                k_rad: c.k_rad,
                k_tan: c.k_tan,
                ric_11: c.ric_11,
                ric_aa: c.ric_aa,
                sc: c.sc,
            };
            wc_status::WC_OK
        }
        Err(e) => fail(wc_status::WC_INVALID_ARGUMENT, &e.to_string()),
    }
}

/// Create the canonical radial harmonic of a catalog metric.
#[no_mangle]
pub unsafe extern "C" fn wc_harmonic_create(
    m: *const wc_metric,
    out: *mut *mut wc_harmonic,
) -> wc_status {
    if m.is_null() || out.is_null() {
        return fail(wc_status::WC_NULL_POINTER, "null pointer argument");
    }
    match catalog::canonical_harmonic(&(*m).entry) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(wc_harmonic { inner }));
            wc_status::WC_OK
        }
        Err(e) => fail(wc_status::WC_INVALID_ARGUMENT, &e.to_string()),
    }
}

#[no_mangle]
pub unsafe extern "C" fn wc_harmonic_free(h: *mut wc_harmonic) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Value G(t) of the harmonic.
#[no_mangle]
pub unsafe extern "C" fn wc_harmonic_value(
    h: *const wc_harmonic,
    t: f64,
    out: *mut f64,
) -> wc_status {
    if h.is_null() || out.is_null() {
        return fail(wc_status::WC_NULL_POINTER, "null pointer argument");
    }
    *out = (&(*h).inner).value(t);
    wc_status::WC_OK
}

/// |grad G| at t.
#[no_mangle]
pub unsafe extern "C" fn wc_harmonic_grad_norm(
    h: *const wc_harmonic,
    t: f64,
    out: *mut f64,
) -> wc_status {
    if h.is_null() || out.is_null() {
        return fail(wc_status::WC_NULL_POINTER, "null pointer argument");
    }
    *out = (&(*h).inner).grad_norm(t);
    wc_status::WC_OK
}

/// Level energy w(t) = area * |grad G|^2 at coordinate t.
#[no_mangle]
pub unsafe extern "C" fn wc_harmonic_w(
    h: *const wc_harmonic,
    t: f64,
    out: *mut f64,
) -> wc_status {
    if h.is_null() || out.is_null() {
        return fail(wc_status::WC_NULL_POINTER, "null pointer argument");
    }
    *out = w_at(&(*h).inner, t);
    wc_status::WC_OK
}

/// Evaluate a monotone quantity on an automatic n-point level grid and
/// return the largest derivative estimate (<= 0 up to tolerance means the
/// quantity is non-increasing).
#[no_mangle]
pub unsafe extern "C" fn wc_monotone_max_derivative(
    h: *const wc_harmonic,
    quantity: wc_quantity,
    n_points: usize,
    out: *mut f64,
) -> wc_status {
    if h.is_null() || out.is_null() {
        return fail(wc_status::WC_NULL_POINTER, "null pointer argument");
    }
    let q = match quantity {
        wc_quantity::WC_QUANTITY_PLUS => Quantity::Plus,
        wc_quantity::WC_QUANTITY_MINUS => Quantity::Minus,
        wc_quantity::WC_QUANTITY_MW => Quantity::Mw,
    };
    let h = &(*h).inner;
    let grid = match auto_grid(h, q, n_points, DEFAULT_EPSILON) {
        Ok(g) => g,
        Err(e) => return fail(wc_status::WC_INVALID_ARGUMENT, &e.to_string()),
    };
    match monotone_series(h, q, &grid) {
        Ok(s) => {
            *out = s.max_derivative;
            wc_status::WC_OK
        }
        Err(e) => fail(wc_status::WC_NUMERIC_ERROR, &e.to_string()),
    }
}

/// Residual of the Riccati equation for the closed-form family member h_c.
#[no_mangle]
pub unsafe extern "C" fn wc_riccati_residual(c: f64, r: f64, out: *mut f64) -> wc_status {
    if out.is_null() {
        return fail(wc_status::WC_NULL_POINTER, "out pointer is null");
    }
    if r.abs() < odes::POLE_MARGIN || (c != 0.0 && (r - 1.0 / c).abs() < odes::POLE_MARGIN) {
        return fail(wc_status::WC_INVALID_ARGUMENT, "r too close to a pole of h_c");
    }
    *out = odes::riccati_residual(&odes::closed_form_h(c), r);
    wc_status::WC_OK
}

/// Generate a metric from the w-solution family on its default domain and
/// validate scalar-flatness; writes max |Sc| of both curvature paths.
#[no_mangle]
pub unsafe extern "C" fn wc_generate_validate(
    c_family: f64,
    k: f64,
    c0: f64,
    n_points: usize,
    max_sc_closed: *mut f64,
    max_sc_oracle: *mut f64,
) -> wc_status {
    if max_sc_closed.is_null() || max_sc_oracle.is_null() {
        return fail(wc_status::WC_NULL_POINTER, "out pointer is null");
    }
    let gm = match odes::generate_metric(c_family, k, c0, odes::default_family_domain(c_family)) {
        Ok(g) => g,
        Err(e) => return fail(wc_status::WC_INVALID_ARGUMENT, &e.to_string()),
    };
    match odes::validate_entry(&gm.entry.profile, n_points.max(3), 1e-8, 1e-6) {
        Ok(report) => {
            *max_sc_closed = report.max_sc_closed;
            *max_sc_oracle = report.max_sc_oracle;
            wc_status::WC_OK
        }
        Err(e) => fail(wc_status::WC_NUMERIC_ERROR, &e.to_string()),
    }
}
