use super::{ideal_embed, inner31, HPoint, HullComplexH3, Vec31};
use crate::error::{Error, Result};
use crate::mobius::CP1;
use nalgebra::{Matrix4x3, Vector4};

/// Nonnegative combination of the three lifts, if x is one.
fn in_triangle(x: &Vec31, a: &Vec31, b: &Vec31, c: &Vec31) -> bool {
    let m = Matrix4x3::from_columns(&[Vector4::from(*a), Vector4::from(*b), Vector4::from(*c)]);
    let v = Vector4::from(*x);
    let Some(inv) = (m.transpose() * m).try_inverse() else {
        return false;
    };
    let coef = inv * m.transpose() * v;
    let resid = (m * coef - v).norm();
    resid <= 1e-9 * v.norm() && coef.iter().all(|&c| c >= -1e-12)
}

/// Where the smallest horoball centred at z touches the hull: the minimum
/// of -<X, Z> over the hull boundary. Candidates are the tangency points on
/// face planes that fall inside their face and the minima along edges.
pub fn nearest_point_retract(z: &CP1, hull: &HullComplexH3) -> Result<HPoint> {
    if hull.vertices.iter().any(|v| v.z.approx_eq(z, 1e-12)) {
        return Err(Error::PointOnCurve);
    }
    let zz = ideal_embed(z).x;
    let mut best: Option<(f64, HPoint)> = None;
    let mut offer = |x: HPoint| {
        let val = -inner31(&x.0, &zz);
        if best.as_ref().is_none_or(|(b, _)| val < *b) {
            best = Some((val, x));
        }
    };
    for face in &hull.faces {
        let nrm = face.plane;
        let c = inner31(&zz, &nrm);
        let foot: Vec31 = std::array::from_fn(|k| zz[k] - c * nrm[k]);
        let Ok(x) = HPoint::new(foot) else { continue };
        let vs = &face.vertices;
        let lift = |i: usize| hull.vertices[vs[i]].x;
        if (1..vs.len() - 1).any(|k| in_triangle(&x.0, &lift(0), &lift(k), &lift(k + 1))) {
            offer(x);
        }
    }
    for e in &hull.edges {
        let (xa, xb) = (hull.vertices[e.a].x, hull.vertices[e.b].x);
        let s = (-0.5 / inner31(&xa, &xb)).sqrt();
        let (xa, xb) = (xa.map(|v| v * s), xb.map(|v| v * s));
        let (alpha, beta) = (-inner31(&xa, &zz), -inner31(&xb, &zz));
        let t = 0.5 * (beta / alpha).ln();
        let x: Vec31 = std::array::from_fn(|k| t.exp() * xa[k] + (-t).exp() * xb[k]);
        offer(HPoint::new(x)?);
    }
    best.map(|(_, x)| x).ok_or(Error::DegenerateHull)
}
