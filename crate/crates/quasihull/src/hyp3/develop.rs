use super::{act, HPoint, HullComplexH3, Side};
use crate::error::{Error, Result};
use crate::mobius::{frame_matrix, mobius_from_triples, CircleMap, CirclePoint, Interp, MobiusComplex, MobiusReal, CP1};
use num_complex::Complex64;
use std::collections::VecDeque;

/// Isometric unfolding of one side of a hull into the upper half-plane.
#[derive(Debug, Clone)]
pub struct PleatedDevelopment {
    pub side: Side,
    pub base_face: usize,
    /// (face, A_F, D_F): A_F sends the face plane to the vertical plane over
    /// RP^1, D_F places that chart in the developed picture.
    pub charts: Vec<(usize, MobiusComplex, MobiusReal)>,
    /// Developed ideal vertex positions, normalized at the marked vertices.
    pub positions: Vec<CirclePoint>,
}

/// The real point closest to a CP^1 point that should be real.
pub(crate) fn real_part(p: &CP1) -> CirclePoint {
    let big = if p.u.norm() > p.v.norm() { p.u } else { p.v };
    let r = big.conj() / big.norm();
    CirclePoint::new((p.u * r).re, (p.v * r).re).expect("unit pair")
}

/// The map sending 0 -> a, inf -> b, i -> h for h on the geodesic (a, b).
pub(crate) fn frame(a: &CirclePoint, b: &CirclePoint, h: Complex64) -> Result<MobiusReal> {
    let c = frame_matrix(b, a)?;
    let s = c.inverse().apply_uhp(h).im;
    if !(s > 0.0) {
        return Err(Error::DegenerateHull);
    }
    Ok(c.compose(&MobiusReal::new(s.sqrt(), 0.0, 0.0, 1.0 / s.sqrt())?))
}

fn face_chart(hull: &HullComplexH3, f: usize) -> Result<MobiusComplex> {
    let mut v = hull.faces[f].vertices.clone();
    v.sort_unstable();
    let z = |i: usize| hull.vertices[v[i]].z;
    let std3 = [CP1::from_complex(Complex64::new(0.0, 0.0)), CP1::from_complex(Complex64::new(1.0, 0.0)), CP1::infinity()];
    MobiusComplex::from_triples(&[z(0), z(1), z(2)], &std3)
}

/// Point of the edge geodesic (a, b) closest to the origin of the ball.
fn edge_point(hull: &HullComplexH3, a: usize, b: usize) -> HPoint {
    let (xa, xb) = (hull.vertices[a].x, hull.vertices[b].x);
    let p: [f64; 4] = std::array::from_fn(|k| xa[k] / xa[3] + xb[k] / xb[3]);
    HPoint::new(p).expect("sum of future null vectors is timelike")
}

/// Image of an H^3 point of the face plane in the face's H^2 chart.
fn chart_point(a: &MobiusComplex, p: &HPoint) -> Complex64 {
    let q = HPoint::new(act(a, &p.0)).expect("isometry");
    let (w, t) = q.to_upper();
    Complex64::new(w.re, t)
}

pub fn develop_pleated_boundary(hull: &HullComplexH3, side: Side) -> Result<PleatedDevelopment> {
    let faces = hull.faces_on(side);
    let base = *faces.first().ok_or(Error::NonDiskSide)?;
    develop_from(hull, side, base)
}

/// Development starting at a chosen base face of the side.
pub fn develop_from(hull: &HullComplexH3, side: Side, base: usize) -> Result<PleatedDevelopment> {
    let faces = hull.faces_on(side);
    if !faces.contains(&base) {
        return Err(Error::NonDiskSide);
    }
    let nf = hull.faces.len();
    let mut chart: Vec<Option<(MobiusComplex, MobiusReal)>> = vec![None; nf];
    chart[base] = Some((face_chart(hull, base)?, MobiusReal::identity()));
    let mut order = vec![base];
    let mut queue = VecDeque::from([base]);
    let edges = hull.bending_edges(side);
    while let Some(f) = queue.pop_front() {
        for &e in &edges {
            let edge = hull.edges[e];
            let g = match edge.faces {
                (x, y) if x == f => y,
                (x, y) if y == f => x,
                _ => continue,
            };
            if chart[g].is_some() {
                continue;
            }
            let (af, df) = chart[f].unwrap();
            let ag = face_chart(hull, g)?;
            let p = edge_point(hull, edge.a, edge.b);
            let (za, zb) = (hull.vertices[edge.a].z, hull.vertices[edge.b].z);
            let fr_f = frame(&real_part(&af.apply(&za)), &real_part(&af.apply(&zb)), chart_point(&af, &p))?;
            let fr_g = frame(&real_part(&ag.apply(&za)), &real_part(&ag.apply(&zb)), chart_point(&ag, &p))?;
            let t = fr_f.compose(&fr_g.inverse());
            chart[g] = Some((ag, df.compose(&t)));
            order.push(g);
            queue.push_back(g);
        }
    }
    if order.len() != faces.len() {
        return Err(Error::NonDiskSide);
    }
    let n = hull.vertices.len();
    let mut pos: Vec<Option<CirclePoint>> = vec![None; n];
    for &f in &order {
        let (a, d) = chart[f].unwrap();
        for &v in &hull.faces[f].vertices {
            if pos[v].is_none() {
                pos[v] = Some(d.apply(&real_part(&a.apply(&hull.vertices[v].z))));
            }
        }
    }
    let pos: Vec<CirclePoint> = pos.into_iter().collect::<Option<_>>().ok_or(Error::NonDiskSide)?;
    let [m0, m1, m2] = hull.marked;
    let std3 = [CirclePoint::zero(), CirclePoint::one(), CirclePoint::infinity()];
    let norm = mobius_from_triples(&[pos[m0], pos[m1], pos[m2]], &std3)?;
    Ok(PleatedDevelopment {
        side,
        base_face: base,
        charts: order.iter().map(|&f| (f, chart[f].unwrap().0, norm.compose(&chart[f].unwrap().1))).collect(),
        positions: pos.iter().map(|p| norm.apply(p)).collect(),
    })
}

/// Gluing map between the two sides, sampled at the ideal vertices:
/// (u+_i, u-_i). A planar hull gives the identity.
pub fn hyp_gluing_samples(hull: &HullComplexH3) -> Result<CircleMap> {
    let top = develop_pleated_boundary(hull, Side::Top)?;
    if hull.planar {
        return CircleMap::identity(top.positions);
    }
    let bottom = develop_pleated_boundary(hull, Side::Bottom)?;
    CircleMap::from_samples(top.positions, bottom.positions, Interp::PlAngle)
}
