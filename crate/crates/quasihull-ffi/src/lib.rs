//! C ABI over the quasihull library.
//!
//! Objects are opaque handles created by `qh_*_new` and released by the
//! matching `qh_*_free`. Every fallible call returns an `i32`: `QH_OK` (0),
//! a negative code for misuse of the interface, or a positive code naming a
//! library error. `qh_last_error_message` describes the most recent failure
//! on the calling thread.
//!
//! Real points are plain doubles with `±INFINITY` standing for the point at
//! infinity. Complex points are passed as separate real and imaginary arrays;
//! an infinite real part marks the point at infinity.

use num_complex::Complex64;
use quasihull::ads3::{convex_hull_acausal, gluing_routes, mess_check, width, AcausalPolygon, EinPoint, HullComplexAdS};
use quasihull::hyp3::{convex_hull_ideal, hyp_gluing_samples, HullComplexH3};
use quasihull::mobius::{qs_norm_estimate, CircleMap, CirclePoint, Interp, QuadrupleSampler, CP1};
use quasihull::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

pub const QH_OK: i32 = 0;
pub const QH_ERR_NULL_POINTER: i32 = -1;
pub const QH_ERR_INVALID_ARGUMENT: i32 = -2;
pub const QH_ERR_BUFFER_TOO_SMALL: i32 = -3;
pub const QH_ERR_PANIC: i32 = -4;

pub const QH_ERR_DEGENERATE_QUADRUPLE: i32 = 1;
pub const QH_ERR_DEGENERATE_TRIPLE: i32 = 2;
pub const QH_ERR_NON_MONOTONE: i32 = 3;
pub const QH_ERR_INVALID_SAMPLES: i32 = 4;
pub const QH_ERR_COLLINEAR_INPUT: i32 = 5;
pub const QH_ERR_NON_JORDAN_ORDER: i32 = 6;
pub const QH_ERR_NOT_ACAUSAL: i32 = 7;
pub const QH_ERR_PLANAR_HULL: i32 = 8;
pub const QH_ERR_ROUTE_MISMATCH: i32 = 9;
pub const QH_ERR_CHART_FAILURE: i32 = 10;
/// Any other library error; the message has the details.
pub const QH_ERR_DOMAIN: i32 = 99;

/// Convex hull of an acausal polygon in AdS^3.
pub struct QhAdsHull {
    hull: HullComplexAdS,
}

/// Ideal convex hull of points of CP^1 in H^3.
pub struct QhIdealHull {
    hull: HullComplexH3,
}

/// Sampled circle homeomorphism with Moebius interpolation between samples.
pub struct QhCircleMap {
    map: CircleMap,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_message(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn code_of(e: &Error) -> i32 {
    match e {
        Error::DegenerateQuadruple => QH_ERR_DEGENERATE_QUADRUPLE,
        Error::DegenerateTriple => QH_ERR_DEGENERATE_TRIPLE,
        Error::NonMonotone(_) => QH_ERR_NON_MONOTONE,
        Error::InvalidSamples(_) => QH_ERR_INVALID_SAMPLES,
        Error::CollinearInput => QH_ERR_COLLINEAR_INPUT,
        Error::NonJordanOrder(_) => QH_ERR_NON_JORDAN_ORDER,
        Error::NotAcausal(_) => QH_ERR_NOT_ACAUSAL,
        Error::PlanarHull => QH_ERR_PLANAR_HULL,
        Error::RouteMismatch(_) => QH_ERR_ROUTE_MISMATCH,
        Error::ChartFailure => QH_ERR_CHART_FAILURE,
        _ => QH_ERR_DOMAIN,
    }
}

enum Fail {
    Code(i32, String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_message("");
            QH_OK
        }
        Ok(Err(Fail::Code(c, m))) => {
            set_message(&m);
            c
        }
        Ok(Err(Fail::Lib(e))) => {
            set_message(&format!("{}: {e}", e.code()));
            code_of(&e)
        }
        Err(_) => {
            set_message("internal panic");
            QH_ERR_PANIC
        }
    }
}

fn null() -> Fail {
    Fail::Code(QH_ERR_NULL_POINTER, "null pointer argument".into())
}

fn invalid(msg: &str) -> Fail {
    Fail::Code(QH_ERR_INVALID_ARGUMENT, msg.into())
}

/// # Safety
/// `p` must be null or point to `n` readable values.
unsafe fn slice<'a, T>(p: *const T, n: usize) -> Result<&'a [T], Fail> {
    if p.is_null() {
        return Err(null());
    }
    Ok(std::slice::from_raw_parts(p, n))
}

unsafe fn marked_triple(p: *const usize) -> Result<[usize; 3], Fail> {
    let m = slice(p, 3)?;
    Ok([m[0], m[1], m[2]])
}

fn real_point(x: f64) -> Result<CirclePoint, Fail> {
    if x.is_nan() {
        return Err(invalid("NaN coordinate"));
    }
    Ok(CirclePoint::from_real(x))
}

fn complex_point(re: f64, im: f64) -> Result<CP1, Fail> {
    if re.is_nan() || im.is_nan() {
        return Err(invalid("NaN coordinate"));
    }
    if re.is_infinite() {
        return Ok(CP1::infinity());
    }
    if im.is_infinite() {
        return Err(invalid("infinite imaginary part"));
    }
    Ok(CP1::from_complex(Complex64::new(re, im)))
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(null)
}

/// Copies the samples (x, f(x)) of `map` into `xs` and `ys`, each of
/// capacity `cap`, storing the sample count in `len` even on
/// `QH_ERR_BUFFER_TOO_SMALL`.
unsafe fn copy_samples(map: &CircleMap, xs: *mut f64, ys: *mut f64, cap: usize, len: *mut usize) -> Result<(), Fail> {
    if len.is_null() {
        return Err(null());
    }
    *len = map.len();
    if cap < map.len() {
        return Err(Fail::Code(QH_ERR_BUFFER_TOO_SMALL, format!("need room for {} samples", map.len())));
    }
    if xs.is_null() || ys.is_null() {
        return Err(null());
    }
    for (i, (x, y)) in map.xs().iter().zip(map.ys()).enumerate() {
        *xs.add(i) = x.to_f64();
        *ys.add(i) = y.to_f64();
    }
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qh_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failing call on this thread; empty after a
/// success. Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn qh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Hull of the polygon with vertices (xs[i], ys[i]) in Ein^{1,1}, listed in
/// cyclic order. `marked` holds three vertex indices.
///
/// # Safety
/// `xs` and `ys` must hold `n` doubles, `marked` three indices, and `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn qh_ads_hull_new(
    xs: *const f64,
    ys: *const f64,
    n: usize,
    marked: *const usize,
    out: *mut *mut QhAdsHull,
) -> i32 {
    guard(|| {
        let (xs, ys) = (slice(xs, n)?, slice(ys, n)?);
        let m = marked_triple(marked)?;
        let pts = xs.iter().zip(ys).map(|(&x, &y)| Ok(EinPoint::new(real_point(x)?, real_point(y)?)));
        let poly = AcausalPolygon::new(pts.collect::<Result<_, Fail>>()?, m)?;
        write_out(out, QhAdsHull { hull: convex_hull_acausal(&poly)? })
    })
}

/// # Safety
/// `hull` must be null or a handle from `qh_ads_hull_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qh_ads_hull_free(hull: *mut QhAdsHull) {
    if !hull.is_null() {
        drop(Box::from_raw(hull));
    }
}

/// Number of faces on both boundary components together.
///
/// # Safety
/// `hull` must be a live handle and `count` writable.
#[no_mangle]
pub unsafe extern "C" fn qh_ads_hull_face_count(hull: *const QhAdsHull, count: *mut usize) -> i32 {
    guard(|| {
        let h = get(hull)?;
        *count.as_mut().ok_or_else(null)? = h.hull.faces.len();
        Ok(())
    })
}

/// Width bracket `lower <= w <= upper`.
///
/// # Safety
/// `hull` must be a live handle; `lower` and `upper` writable.
#[no_mangle]
pub unsafe extern "C" fn qh_ads_hull_width(hull: *const QhAdsHull, lower: *mut f64, upper: *mut f64) -> i32 {
    guard(|| {
        let w = width(&get(hull)?.hull)?;
        *lower.as_mut().ok_or_else(null)? = w.lower;
        *upper.as_mut().ok_or_else(null)? = w.upper;
        Ok(())
    })
}

/// Largest vertex deviation of the earthquake reconstruction of the
/// boundary map from the two bending laminations.
///
/// # Safety
/// `hull` must be a live handle and `deviation` writable.
#[no_mangle]
pub unsafe extern "C" fn qh_ads_hull_mess_deviation(hull: *const QhAdsHull, deviation: *mut f64) -> i32 {
    guard(|| {
        let r = mess_check(&get(hull)?.hull)?;
        *deviation.as_mut().ok_or_else(null)? = r.max_deviation;
        Ok(())
    })
}

/// Normalized gluing samples from the development route, plus the
/// disagreement with the earthquake route.
///
/// # Safety
/// `hull` must be a live handle; `xs` and `ys` must have room for `cap`
/// doubles; `len` and `discrepancy` writable (`discrepancy` may be null).
#[no_mangle]
pub unsafe extern "C" fn qh_ads_hull_gluing(
    hull: *const QhAdsHull,
    xs: *mut f64,
    ys: *mut f64,
    cap: usize,
    len: *mut usize,
    discrepancy: *mut f64,
) -> i32 {
    guard(|| {
        let r = gluing_routes(&get(hull)?.hull)?;
        if let Some(d) = discrepancy.as_mut() {
            *d = r.discrepancy;
        }
        copy_samples(&r.development, xs, ys, cap, len)
    })
}

/// Ideal hull of the points re[i] + i im[i], in order along the curve.
///
/// # Safety
/// `re` and `im` must hold `n` doubles, `marked` three indices, and `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn qh_ideal_hull_new(
    re: *const f64,
    im: *const f64,
    n: usize,
    marked: *const usize,
    out: *mut *mut QhIdealHull,
) -> i32 {
    guard(|| {
        let (re, im) = (slice(re, n)?, slice(im, n)?);
        let m = marked_triple(marked)?;
        let pts = re.iter().zip(im).map(|(&a, &b)| complex_point(a, b)).collect::<Result<Vec<_>, Fail>>()?;
        write_out(out, QhIdealHull { hull: convex_hull_ideal(&pts, m)? })
    })
}

/// # Safety
/// `hull` must be null or a handle from `qh_ideal_hull_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qh_ideal_hull_free(hull: *mut QhIdealHull) {
    if !hull.is_null() {
        drop(Box::from_raw(hull));
    }
}

/// Face count and whether the hull collapsed to a plane.
///
/// # Safety
/// `hull` must be a live handle; `count` and `planar` writable.
#[no_mangle]
pub unsafe extern "C" fn qh_ideal_hull_info(hull: *const QhIdealHull, count: *mut usize, planar: *mut bool) -> i32 {
    guard(|| {
        let h = &get(hull)?.hull;
        *count.as_mut().ok_or_else(null)? = h.faces.len();
        *planar.as_mut().ok_or_else(null)? = h.planar;
        Ok(())
    })
}

/// Normalized gluing samples between the two pleated boundary components.
///
/// # Safety
/// As for `qh_ads_hull_gluing`, without the discrepancy.
#[no_mangle]
pub unsafe extern "C" fn qh_ideal_hull_gluing(
    hull: *const QhIdealHull,
    xs: *mut f64,
    ys: *mut f64,
    cap: usize,
    len: *mut usize,
) -> i32 {
    guard(|| {
        let g = hyp_gluing_samples(&get(hull)?.hull)?;
        copy_samples(&g, xs, ys, cap, len)
    })
}

/// Circle map through the samples (xs[i], ys[i]), cyclically monotone.
///
/// # Safety
/// `xs` and `ys` must hold `n` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qh_circle_map_new(xs: *const f64, ys: *const f64, n: usize, out: *mut *mut QhCircleMap) -> i32 {
    guard(|| {
        let (xs, ys) = (slice(xs, n)?, slice(ys, n)?);
        let px = xs.iter().map(|&x| real_point(x)).collect::<Result<Vec<_>, Fail>>()?;
        let py = ys.iter().map(|&y| real_point(y)).collect::<Result<Vec<_>, Fail>>()?;
        write_out(out, QhCircleMap { map: CircleMap::from_samples(px, py, Interp::PwMoebius)? })
    })
}

/// # Safety
/// `map` must be null or a handle from `qh_circle_map_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qh_circle_map_free(map: *mut QhCircleMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Value of the map at `x`.
///
/// # Safety
/// `map` must be a live handle and `y` writable.
#[no_mangle]
pub unsafe extern "C" fn qh_circle_map_eval(map: *const QhCircleMap, x: f64, y: *mut f64) -> i32 {
    guard(|| {
        let v = get(map)?.map.eval(&real_point(x)?);
        *y.as_mut().ok_or_else(null)? = v.to_f64();
        Ok(())
    })
}

/// Seeded lower estimate of the cross-ratio distortion over `count`
/// symmetric quadruples.
///
/// # Safety
/// `map` must be a live handle and `estimate` writable.
#[no_mangle]
pub unsafe extern "C" fn qh_circle_map_qs_estimate(
    map: *const QhCircleMap,
    seed: u64,
    count: usize,
    estimate: *mut f64,
) -> i32 {
    guard(|| {
        if count == 0 {
            return Err(invalid("count must be positive"));
        }
        let m = get(map)?;
        *estimate.as_mut().ok_or_else(null)? = qs_norm_estimate(&m.map, &mut QuadrupleSampler::new(seed), count);
        Ok(())
    })
}
