//! The hyperbolic plane in the hyperboloid model of R^{2,1}, identified with
//! symmetric 2x2 matrices S = [[s0 + s1, s2], [s2, s0 - s1]] so that
//! <S, S> = -det S. PSL(2,R) acts by S -> g S g^T.

use crate::error::{Error, Result};
use crate::mobius::{CirclePoint, MobiusReal};
use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

pub type V3 = Vector3<f64>;

/// The point i of the upper half-plane.
pub fn origin() -> V3 {
    V3::new(1.0, 0.0, 0.0)
}

pub fn inner(u: &V3, v: &V3) -> f64 {
    -u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

/// Lorentzian cross product: orthogonal to both arguments.
pub fn cross(u: &V3, v: &V3) -> V3 {
    let c = u.cross(v);
    V3::new(-c[0], c[1], c[2])
}

pub fn from_uhp(z: Complex64) -> V3 {
    let (x, y) = (z.re, z.im);
    let r = x * x + y * y;
    V3::new((r + 1.0) / (2.0 * y), (r - 1.0) / (2.0 * y), x / y)
}

pub fn to_uhp(p: &V3) -> Complex64 {
    let s11 = p[0] - p[1];
    Complex64::new(p[2] / s11, 1.0 / s11)
}

/// Null vector of the ideal point, with positive time coordinate.
pub fn ideal(p: &CirclePoint) -> V3 {
    let (a, b) = p.coords();
    V3::new(0.5 * (a * a + b * b), 0.5 * (a * a - b * b), a * b)
}

pub fn ideal_to_circle(v: &V3) -> CirclePoint {
    let v = if v[0] < 0.0 { -v } else { *v };
    let (s00, s11, s01) = (v[0] + v[1], v[0] - v[1], v[2]);
    if s00 >= s11 {
        CirclePoint::new(s00, s01).expect("nonzero null vector")
    } else {
        CirclePoint::new(s01, s11).expect("nonzero null vector")
    }
}

/// Rescale a timelike vector onto the upper sheet of the hyperboloid.
pub fn normalize_timelike(v: &V3) -> Result<V3> {
    let q = inner(v, v);
    if !(q < 0.0) {
        return Err(Error::InvalidSamples("vector is not timelike".into()));
    }
    let s = if v[0] < 0.0 { -1.0 } else { 1.0 };
    Ok(v * (s / (-q).sqrt()))
}

pub fn normalize_spacelike(v: &V3) -> V3 {
    v / inner(v, v).sqrt()
}

pub fn dist(x: &V3, y: &V3) -> f64 {
    (-inner(x, y)).max(1.0).acosh()
}

/// Point at distance s from x in the unit tangent direction t.
pub fn exp_point(x: &V3, t: &V3, s: f64) -> V3 {
    x * s.cosh() + t * s.sinh()
}

/// Unit tangent at x pointing toward y.
pub fn direction(x: &V3, y: &V3) -> V3 {
    normalize_spacelike(&(y + x * inner(x, y)))
}

/// Orthogonal projection of x onto the geodesic with unit normal n.
pub fn project(x: &V3, n: &V3) -> V3 {
    let c = inner(x, n);
    (x - n * c) / (1.0 + c * c).sqrt()
}

/// Distance from x to the geodesic with unit normal n.
pub fn dist_to_line(x: &V3, n: &V3) -> f64 {
    inner(x, n).abs().asinh()
}

/// Reflection in the geodesic with unit normal n.
pub fn reflection(n: &V3) -> Matrix3<f64> {
    let gn = V3::new(-n[0], n[1], n[2]);
    Matrix3::identity() - 2.0 * n * gn.transpose()
}

/// Matrix of the action S -> g S g^T in (s0, s1, s2) coordinates.
pub fn lorentz_from_mobius(g: &MobiusReal) -> Matrix3<f64> {
    let m = g.matrix();
    let act = |v: V3| {
        let s = [[v[0] + v[1], v[2]], [v[2], v[0] - v[1]]];
        let mut r = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        r[i][j] += m[i][k] * s[k][l] * m[j][l];
                    }
                }
            }
        }
        V3::new(0.5 * (r[0][0] + r[1][1]), 0.5 * (r[0][0] - r[1][1]), r[0][1])
    };
    Matrix3::from_columns(&[act(V3::x()), act(V3::y()), act(V3::z())])
}

/// The two ideal endpoints of the geodesic with unit normal n, ordered so
/// that n is the right-hand normal of the oriented geodesic.
pub fn line_endpoints(n: &V3) -> (CirclePoint, CirclePoint) {
    let f = project(&origin(), n);
    let e = normalize_spacelike(&cross(n, &f));
    let (a, b) = (ideal_to_circle(&(f - e)), ideal_to_circle(&(f + e)));
    if inner(&line_normal(&a, &b), n) > 0.0 {
        (a, b)
    } else {
        (b, a)
    }
}

/// Unit normal of the oriented geodesic p -> q; points on its right have
/// positive pairing.
pub fn line_normal(p: &CirclePoint, q: &CirclePoint) -> V3 {
    normalize_spacelike(&cross(&ideal(p), &ideal(q)))
}

/// Intersection point of two crossing geodesics.
pub fn line_intersection(n1: &V3, n2: &V3) -> Option<V3> {
    normalize_timelike(&cross(n1, n2)).ok()
}

/// Hyperbolic distance in the upper half-plane.
pub fn dist_uhp(z: Complex64, w: Complex64) -> f64 {
    (1.0 + (z - w).norm_sqr() / (2.0 * z.im * w.im)).max(1.0).acosh()
}
