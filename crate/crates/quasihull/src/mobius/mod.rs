//! Projective line algebra: points of RP^1, real and complex Möbius maps,
//! cross-ratios and circle homeomorphisms given by samples.

mod circle_map;
mod qs;

pub use circle_map::{comparison_compose, CircleMap, ExactForm, Interp, Link};
pub use qs::{qs_norm_estimate, QuadrupleSampler};

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Relative tolerance under which two projective points are identified.
pub const POINT_TOL: f64 = 1e-13;

/// A point a/b of RP^1 stored as a unit vector whose first nonzero
/// coordinate is positive. Infinity is (1, 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirclePoint {
    a: f64,
    b: f64,
}

impl CirclePoint {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        let r = a.hypot(b);
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidSamples(format!("bad homogeneous pair ({a}, {b})")));
        }
        let (mut a, mut b) = (a / r, b / r);
        if a < 0.0 || (a == 0.0 && b < 0.0) {
            a = -a;
            b = -b;
        }
        Ok(CirclePoint { a, b })
    }

    /// Infinite inputs map to the point at infinity.
    pub fn from_real(x: f64) -> Self {
        if x.is_infinite() {
            Self::infinity()
        } else {
            Self::new(x, 1.0).expect("finite real")
        }
    }

    pub fn infinity() -> Self {
        CirclePoint { a: 1.0, b: 0.0 }
    }

    pub fn zero() -> Self {
        CirclePoint { a: 0.0, b: 1.0 }
    }

    pub fn one() -> Self {
        Self::from_real(1.0)
    }

    pub fn coords(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// a/b, with infinity for b = 0.
    pub fn to_f64(&self) -> f64 {
        if self.b == 0.0 {
            f64::INFINITY
        } else {
            self.a / self.b
        }
    }

    pub fn is_infinity(&self) -> bool {
        self.b == 0.0
    }

    /// Angle coordinate in [0, 2pi): 0 -> 0, 1 -> pi/2, inf -> pi, -1 -> 3pi/2.
    pub fn angle(&self) -> f64 {
        let t = 2.0 * self.a.atan2(self.b);
        let t = t.rem_euclid(TAU);
        if t >= TAU {
            0.0
        } else {
            t
        }
    }

    pub fn from_angle(phi: f64) -> Self {
        let h = 0.5 * phi;
        Self::new(h.sin(), h.cos()).expect("unit vector")
    }

    /// Distance in the angle coordinate, in [0, pi].
    pub fn angular_distance(&self, other: &CirclePoint) -> f64 {
        let d = (self.angle() - other.angle()).rem_euclid(TAU);
        d.min(TAU - d)
    }

    pub fn approx_eq(&self, other: &CirclePoint, tol: f64) -> bool {
        det(self, other).abs() <= tol
    }

    /// The point on the unit circle of C with the same angle coordinate.
    pub fn to_disk(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle())
    }

    pub fn to_complex(&self) -> CP1 {
        CP1::new(Complex64::new(self.a, 0.0), Complex64::new(self.b, 0.0))
    }
}

/// det[p, q] = p_a q_b - p_b q_a. Negative iff q follows p by less than a
/// half turn of the angle coordinate.
pub fn det(p: &CirclePoint, q: &CirclePoint) -> f64 {
    p.a * q.b - p.b * q.a
}

/// Oriented angular increment from p to q, in [0, 2pi).
pub fn angle_step(p: &CirclePoint, q: &CirclePoint) -> f64 {
    (q.angle() - p.angle()).rem_euclid(TAU)
}

/// True if p, q, r are pairwise distinct and positively cyclically ordered.
pub fn cyclically_ordered(p: &CirclePoint, q: &CirclePoint, r: &CirclePoint) -> bool {
    let dq = angle_step(p, q);
    let dr = angle_step(p, r);
    dq > 0.0 && dr > dq
}

/// cr(a,b,c,d) = (c-a)(d-b) / ((b-a)(d-c)), evaluated homogeneously.
pub fn cross_ratio(a: &CirclePoint, b: &CirclePoint, c: &CirclePoint, d: &CirclePoint) -> Result<f64> {
    let pts = [a, b, c, d];
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i].approx_eq(pts[j], POINT_TOL) {
                return Err(Error::DegenerateQuadruple);
            }
        }
    }
    Ok(det(c, a) * det(d, b) / (det(b, a) * det(d, c)))
}

/// Orientation-preserving real Möbius map normalized to det = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusReal {
    m: [[f64; 2]; 2],
}

impl MobiusReal {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::DegenerateTriple);
        }
        let s = det.sqrt();
        Ok(MobiusReal { m: [[a / s, b / s], [c / s, d / s]] })
    }

    pub fn identity() -> Self {
        MobiusReal { m: [[1.0, 0.0], [0.0, 1.0]] }
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        self.m
    }

    pub fn apply(&self, p: &CirclePoint) -> CirclePoint {
        let m = &self.m;
        CirclePoint::new(m[0][0] * p.a + m[0][1] * p.b, m[1][0] * p.a + m[1][1] * p.b)
            .expect("invertible map")
    }

    /// Action on the upper half-plane.
    pub fn apply_uhp(&self, z: Complex64) -> Complex64 {
        let m = &self.m;
        (z * m[0][0] + m[0][1]) / (z * m[1][0] + m[1][1])
    }

    /// self ∘ other.
    pub fn compose(&self, other: &MobiusReal) -> MobiusReal {
        let (a, b) = (&self.m, &other.m);
        let mut r = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        MobiusReal::new(r[0][0], r[0][1], r[1][0], r[1][1]).expect("product of positive maps")
    }

    pub fn inverse(&self) -> MobiusReal {
        let m = &self.m;
        MobiusReal { m: [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]] }
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    /// Hyperbolic translation of length t along the geodesic from p to q,
    /// pushing points toward q.
    pub fn translation(p: &CirclePoint, q: &CirclePoint, t: f64) -> Result<MobiusReal> {
        let c = frame_matrix(q, p)?;
        let (e, f) = ((0.5 * t).exp(), (-0.5 * t).exp());
        let d = MobiusReal { m: [[e, 0.0], [0.0, f]] };
        Ok(c.compose(&d).compose(&c.inverse()))
    }

    pub fn to_complex(&self) -> MobiusComplex {
        let m = &self.m;
        MobiusComplex::new([
            [Complex64::new(m[0][0], 0.0), Complex64::new(m[0][1], 0.0)],
            [Complex64::new(m[1][0], 0.0), Complex64::new(m[1][1], 0.0)],
        ])
        .expect("det 1")
    }
}

/// The map sending infinity to `inf_to` and 0 to `zero_to`, with columns
/// signed so that the determinant is positive.
pub(crate) fn frame_matrix(inf_to: &CirclePoint, zero_to: &CirclePoint) -> Result<MobiusReal> {
    let (a, c) = inf_to.coords();
    let (mut b, mut d) = zero_to.coords();
    let det = a * d - b * c;
    if det.abs() < POINT_TOL {
        return Err(Error::DegenerateTriple);
    }
    if det < 0.0 {
        b = -b;
        d = -d;
    }
    MobiusReal::new(a, b, c, d)
}

/// Homogeneous coefficients of the linear form whose zero is p.
fn zero_form(p: &CirclePoint) -> [f64; 2] {
    [p.b, -p.a]
}

/// Unnormalized matrix of the map sending (z1, z2, z3) to (0, 1, inf).
fn to_standard(z: &[CirclePoint; 3]) -> [[f64; 2]; 2] {
    let r0 = zero_form(&z[0]);
    let r1 = zero_form(&z[2]);
    let s0 = det(&z[1], &z[2]);
    let s1 = det(&z[1], &z[0]);
    // det(p, z) = p_a z_b - p_b z_a, so (p - z1)(z2 - z3) becomes
    // det(p, z1) det(z2, z3) up to a common factor.
    [[r0[0] * s0, r0[1] * s0], [r1[0] * s1, r1[1] * s1]]
}

fn distinct3(z: &[CirclePoint; 3]) -> bool {
    !(z[0].approx_eq(&z[1], POINT_TOL) || z[1].approx_eq(&z[2], POINT_TOL) || z[0].approx_eq(&z[2], POINT_TOL))
}

/// The unique orientation-preserving Möbius map with src[i] -> dst[i].
pub fn mobius_from_triples(src: &[CirclePoint; 3], dst: &[CirclePoint; 3]) -> Result<MobiusReal> {
    if !distinct3(src) || !distinct3(dst) {
        return Err(Error::DegenerateTriple);
    }
    let s = to_standard(src);
    let t = to_standard(dst);
    // t^{-1} (adjugate) times s
    let ti = [[t[1][1], -t[0][1]], [-t[1][0], t[0][0]]];
    let mut r = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = ti[i][0] * s[0][j] + ti[i][1] * s[1][j];
        }
    }
    MobiusReal::new(r[0][0], r[0][1], r[1][0], r[1][1])
}

/// Homogeneous point (u : v) of CP^1, stored with unit norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CP1 {
    pub u: Complex64,
    pub v: Complex64,
}

impl CP1 {
    pub fn new(u: Complex64, v: Complex64) -> Self {
        let r = (u.norm_sqr() + v.norm_sqr()).sqrt();
        CP1 { u: u / r, v: v / r }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z, Complex64::new(1.0, 0.0))
    }

    pub fn infinity() -> Self {
        CP1 { u: Complex64::new(1.0, 0.0), v: Complex64::new(0.0, 0.0) }
    }

    pub fn is_infinity(&self) -> bool {
        self.v.norm() < 1e-300
    }

    /// u/v; infinite for the point at infinity.
    pub fn to_complex(&self) -> Complex64 {
        if self.is_infinity() {
            Complex64::new(f64::INFINITY, 0.0)
        } else {
            self.u / self.v
        }
    }

    pub fn conj(&self) -> CP1 {
        CP1 { u: self.u.conj(), v: self.v.conj() }
    }

    pub fn approx_eq(&self, other: &CP1, tol: f64) -> bool {
        (self.u * other.v - self.v * other.u).norm() <= tol
    }

    /// The real point with the same coordinates, if this point is real.
    pub fn to_real(&self, tol: f64) -> Option<CirclePoint> {
        let phase = if self.u.norm() > self.v.norm() { self.u } else { self.v };
        let r = phase.conj() / phase.norm();
        let (u, v) = (self.u * r, self.v * r);
        if u.im.abs() <= tol && v.im.abs() <= tol {
            CirclePoint::new(u.re, v.re).ok()
        } else {
            None
        }
    }
}

/// Complex Möbius map normalized to det = 1 (up to sign).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusComplex {
    m: [[Complex64; 2]; 2],
}

impl MobiusComplex {
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det.norm() < 1e-300 || !det.is_finite() {
            return Err(Error::DegenerateTriple);
        }
        let s = det.sqrt();
        Ok(MobiusComplex { m: [[m[0][0] / s, m[0][1] / s], [m[1][0] / s, m[1][1] / s]] })
    }

    pub fn identity() -> Self {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        MobiusComplex { m: [[o, z], [z, o]] }
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        self.m
    }

    pub fn apply(&self, p: &CP1) -> CP1 {
        let m = &self.m;
        CP1::new(m[0][0] * p.u + m[0][1] * p.v, m[1][0] * p.u + m[1][1] * p.v)
    }

    pub fn compose(&self, other: &MobiusComplex) -> MobiusComplex {
        let (a, b) = (&self.m, &other.m);
        let mut r = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        MobiusComplex::new(r).expect("product of invertible maps")
    }

    pub fn inverse(&self) -> MobiusComplex {
        let m = &self.m;
        MobiusComplex { m: [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]] }
    }

    /// The map sending (z1, z2, z3) to (0, 1, inf).
    pub fn to_standard(z: &[CP1; 3]) -> Result<MobiusComplex> {
        let cdet = |p: &CP1, q: &CP1| p.u * q.v - p.v * q.u;
        let s0 = cdet(&z[1], &z[2]);
        let s1 = cdet(&z[1], &z[0]);
        if s0.norm() < 1e-14 || s1.norm() < 1e-14 || cdet(&z[0], &z[2]).norm() < 1e-14 {
            return Err(Error::DegenerateTriple);
        }
        MobiusComplex::new([[z[0].v * s0, -z[0].u * s0], [z[2].v * s1, -z[2].u * s1]])
    }

    pub fn from_triples(src: &[CP1; 3], dst: &[CP1; 3]) -> Result<MobiusComplex> {
        Ok(Self::to_standard(dst)?.inverse().compose(&Self::to_standard(src)?))
    }
}

/// Complex cross-ratio (c-a)(d-b) / ((b-a)(d-c)) of points of CP^1.
pub fn cross_ratio_complex(a: &CP1, b: &CP1, c: &CP1, d: &CP1) -> Result<Complex64> {
    let cdet = |p: &CP1, q: &CP1| p.u * q.v - p.v * q.u;
    let den = cdet(b, a) * cdet(d, c);
    if den.norm() < 1e-28 || cdet(c, a).norm() < 1e-14 || cdet(d, b).norm() < 1e-14 {
        return Err(Error::DegenerateQuadruple);
    }
    Ok(cdet(c, a) * cdet(d, b) / den)
}

/// Half-angle helper shared by the sampler: rotation by theta of the
/// angle coordinate.
pub(crate) fn rotation(theta: f64) -> MobiusReal {
    let (s, c) = (0.5 * theta).sin_cos();
    MobiusReal { m: [[c, s], [-s, c]] }
}
