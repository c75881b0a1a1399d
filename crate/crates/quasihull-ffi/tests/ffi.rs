use quasihull_ffi::*;
use std::ffi::CStr;
use std::ptr;

fn message() -> String {
    unsafe { CStr::from_ptr(qh_last_error_message()) }.to_string_lossy().into_owned()
}

const XS: [f64; 6] = [0.0, 1.0, 2.5, f64::INFINITY, -3.0, -0.7];
const YS: [f64; 6] = [0.2, 0.9, 4.0, -6.0, -1.5, -0.1];
const MARKED: [usize; 3] = [0, 2, 4];

#[test]
fn ads_hull_round_trip() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(qh_ads_hull_new(XS.as_ptr(), YS.as_ptr(), 6, MARKED.as_ptr(), &mut h), QH_OK);
        assert!(!h.is_null());
        let mut faces = 0;
        assert_eq!(qh_ads_hull_face_count(h, &mut faces), QH_OK);
        assert!(faces >= 4);
        let (mut lo, mut hi) = (0.0, 0.0);
        assert_eq!(qh_ads_hull_width(h, &mut lo, &mut hi), QH_OK);
        assert!(0.0 < lo && lo <= hi && hi <= std::f64::consts::FRAC_PI_2);
        let mut dev = 1.0;
        assert_eq!(qh_ads_hull_mess_deviation(h, &mut dev), QH_OK);
        assert!(dev < 1e-8);

        let (mut gx, mut gy) = ([0.0; 6], [0.0; 6]);
        let (mut len, mut disc) = (0, 1.0);
        assert_eq!(qh_ads_hull_gluing(h, gx.as_mut_ptr(), gy.as_mut_ptr(), 3, &mut len, &mut disc), QH_ERR_BUFFER_TOO_SMALL);
        assert_eq!(len, 6);
        assert_eq!(qh_ads_hull_gluing(h, gx.as_mut_ptr(), gy.as_mut_ptr(), 6, &mut len, &mut disc), QH_OK);
        assert!(disc < 1e-7);
        // normalized: the marked vertices sit at 0, 1, infinity on both sides
        for (i, want) in [(0, 0.0), (2, 1.0)] {
            assert!((gx[i] - want).abs() < 1e-9 && (gy[i] - want).abs() < 1e-9, "{gx:?} {gy:?}");
        }
        assert!(gx[4].abs() > 1e9 && gy[4].abs() > 1e9);
        qh_ads_hull_free(h);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let mut h = ptr::null_mut();
        let causal = [0.0, 2.0, 1.0, 3.0];
        let ys = [0.0, 1.0, 2.0, 3.0];
        assert_eq!(qh_ads_hull_new(causal.as_ptr(), ys.as_ptr(), 4, MARKED.as_ptr(), &mut h), QH_ERR_NOT_ACAUSAL);
        assert!(h.is_null());
        assert!(message().starts_with("NotAcausal"), "{}", message());
        assert_eq!(qh_ads_hull_new(ptr::null(), ys.as_ptr(), 4, MARKED.as_ptr(), &mut h), QH_ERR_NULL_POINTER);
        let nan = [0.0, f64::NAN, 1.0, 3.0];
        assert_eq!(qh_ads_hull_new(nan.as_ptr(), ys.as_ptr(), 4, MARKED.as_ptr(), &mut h), QH_ERR_INVALID_ARGUMENT);
        let mut w = 0.0;
        assert_eq!(qh_ads_hull_width(ptr::null(), &mut w, &mut w), QH_ERR_NULL_POINTER);
        // success clears the message
        let mut m = ptr::null_mut();
        assert_eq!(qh_circle_map_new(ys.as_ptr(), ys.as_ptr(), 4, &mut m), QH_OK);
        assert_eq!(message(), "");
        qh_circle_map_free(m);
        qh_ads_hull_free(ptr::null_mut());
    }
}

#[test]
fn ideal_hull_of_real_points_is_planar_with_identity_gluing() {
    unsafe {
        let im = [0.0; 6];
        let mut h = ptr::null_mut();
        assert_eq!(qh_ideal_hull_new(XS.as_ptr(), im.as_ptr(), 6, MARKED.as_ptr(), &mut h), QH_OK);
        let (mut count, mut planar) = (0, false);
        assert_eq!(qh_ideal_hull_info(h, &mut count, &mut planar), QH_OK);
        assert!(planar);
        let (mut gx, mut gy, mut len) = ([0.0; 6], [0.0; 6], 0);
        assert_eq!(qh_ideal_hull_gluing(h, gx.as_mut_ptr(), gy.as_mut_ptr(), 6, &mut len), QH_OK);
        for i in 0..len {
            assert!(gx[i] == gy[i] || (gx[i] - gy[i]).abs() < 1e-12);
        }
        qh_ideal_hull_free(h);
    }
}

#[test]
fn moebius_samples_have_unit_distortion() {
    unsafe {
        // y = (2x + 1) / (x + 1)
        let xs = [0.0, 1.0, 2.0, f64::INFINITY, -2.0, -0.5];
        let ys = [1.0, 1.5, 5.0 / 3.0, 2.0, 3.0, 0.0];
        let mut m = ptr::null_mut();
        assert_eq!(qh_circle_map_new(xs.as_ptr(), ys.as_ptr(), 6, &mut m), QH_OK);
        let mut y = 0.0;
        assert_eq!(qh_circle_map_eval(m, 3.0, &mut y), QH_OK);
        assert!((y - 7.0 / 4.0).abs() < 1e-12, "{y}");
        let mut q = 0.0;
        assert_eq!(qh_circle_map_qs_estimate(m, 1, 500, &mut q), QH_OK);
        assert!((q - 1.0).abs() < 1e-10);
        assert_eq!(qh_circle_map_qs_estimate(m, 1, 0, &mut q), QH_ERR_INVALID_ARGUMENT);
        qh_circle_map_free(m);
    }
}

#[test]
fn version_matches_the_crate() {
    let v = unsafe { CStr::from_ptr(qh_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
