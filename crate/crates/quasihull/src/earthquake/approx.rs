//! Approximation of a finite lamination by laminations invariant under a
//! reflection group: ultraparallel perturbation, a right-angled polygon
//! crossing every leaf orthogonally, and the orbit of the leaves.

use super::{FiniteLamination, GeodesicH2, Leaf, Relation};
use crate::error::{Error, Result};
use crate::h2::{self, V3};
use crate::mobius::{angle_step, cyclically_ordered, mobius_from_triples, CirclePoint, MobiusReal};
use nalgebra::Matrix3;
use num_complex::Complex64;
use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;

const MAX_ARC_NODES: usize = 1 << 14;

/// Reference distance on the space of geodesics: endpoint angles with the
/// max metric, minimized over the two matchings.
pub fn geodesic_space_distance(a: &GeodesicH2, b: &GeodesicH2) -> f64 {
    let same = a.p.angular_distance(&b.p).max(a.q.angular_distance(&b.q));
    let swapped = a.p.angular_distance(&b.q).max(a.q.angular_distance(&b.p));
    same.min(swapped)
}

/// Sign of the side of leaf `i` holding the endpoints of `others`, if they
/// all lie on one closed side.
fn occupied_side(leaves: &[GeodesicH2], i: usize, others: &[usize]) -> Option<f64> {
    let n = leaves[i].normal();
    let mut side = 0.0;
    for &j in others {
        for e in [leaves[j].p, leaves[j].q] {
            if leaves[i].has_endpoint(&e) {
                continue;
            }
            let s = h2::inner(&h2::ideal(&e), &n).signum();
            if side == 0.0 {
                side = s;
            } else if s != side {
                return None;
            }
        }
    }
    Some(side)
}

/// Processing order for the induction: each leaf has all earlier ones on
/// one closed side. Found by peeling off leaves with an empty side.
fn induction_order(leaves: &[GeodesicH2]) -> Vec<usize> {
    let mut left: Vec<usize> = (0..leaves.len()).collect();
    let mut peeled = Vec::with_capacity(leaves.len());
    while !left.is_empty() {
        let pos = (0..left.len())
            .find(|&k| {
                let others: Vec<usize> = left.iter().copied().filter(|&j| j != left[k]).collect();
                occupied_side(leaves, left[k], &others).is_some()
            })
            .expect("a non-crossing family has an innermost leaf");
        peeled.push(left.remove(pos));
    }
    peeled.reverse();
    peeled
}

fn pairwise_distances(leaves: &[GeodesicH2]) -> Vec<Vec<f64>> {
    leaves.iter().map(|a| leaves.iter().map(|b| a.distance(b)).collect()).collect()
}

/// Pushes each leaf off the side holding the earlier ones by a translation
/// along an orthogonal axis, with lengths growing geometrically along the
/// induction order, so that every pair ends up ultraparallel and no
/// distance decreases. Each leaf moves less than 1/n in the reference
/// distance.
pub fn perturb_ultraparallel(leaves: &[GeodesicH2], n: u32) -> Result<Vec<GeodesicH2>> {
    let k = leaves.len();
    for i in 0..k {
        for j in 0..i {
            if leaves[i].relation(&leaves[j]) == Relation::Crossing {
                return Err(Error::CrossingInput);
            }
            if leaves[i].relation(&leaves[j]) == Relation::Equal {
                return Err(Error::InvalidSamples(format!("leaves {j} and {i} coincide")));
            }
        }
    }
    let ultra = (0..k).all(|i| (0..i).all(|j| leaves[i].relation(&leaves[j]) == Relation::Ultraparallel));
    if ultra {
        return Ok(leaves.to_vec());
    }
    let before = pairwise_distances(leaves);
    let order = induction_order(leaves);
    let bound = 1.0 / n.max(1) as f64;
    let o = h2::origin();
    let mut ratio: f64 = 0.1;
    for _ in 0..8 {
        let mut top: f64 = 1.0;
        'shrink: for _ in 0..60 {
            let mut out = leaves.to_vec();
            for (pos, &i) in order.iter().enumerate() {
                let len = top * ratio.powi((k - 1 - pos) as i32);
                let earlier = &order[..pos];
                let all: Vec<usize> = (0..k).filter(|&j| j != i).collect();
                let side = occupied_side(leaves, i, earlier)
                    .filter(|s| *s != 0.0)
                    .or_else(|| occupied_side(leaves, i, &all).filter(|s| *s != 0.0))
                    .unwrap_or(1.0);
                let nrm = leaves[i].normal();
                let f = h2::project(&o, &nrm);
                // the axis runs from the occupied side to the empty one
                let from = h2::ideal_to_circle(&(f + nrm * side));
                let to = h2::ideal_to_circle(&(f - nrm * side));
                let g = MobiusReal::translation(&from, &to, len)?;
                out[i] = leaves[i].map(&g);
                if geodesic_space_distance(&out[i], &leaves[i]) >= bound {
                    top *= 0.5;
                    continue 'shrink;
                }
            }
            let after = pairwise_distances(&out);
            let ok = (0..k).all(|i| {
                (0..i).all(|j| {
                    out[i].relation(&out[j]) == Relation::Ultraparallel && after[i][j] > before[i][j]
                })
            });
            if ok {
                return Ok(out);
            }
            break;
        }
        ratio *= 0.1;
    }
    Err(Error::ConstructionFailure("ultraparallel perturbation did not separate the leaves".into()))
}

/// What a polygon side lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideKind {
    /// Orthogonal to the given leaf, crossing it.
    Crossing(usize),
    /// Part of an arc between two crossing sides.
    Arc,
}

/// Convex polygon of H^2 (hyperboloid model) with right angles, listed
/// counterclockwise around `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct RightAngledPolygon {
    pub vertices: Vec<V3>,
    /// The same vertices in the upper half-plane, as constructed.
    pub uhp: Vec<Complex64>,
    /// Unit normal of side j (from vertex j to j + 1), negative on the
    /// interior.
    pub normals: Vec<V3>,
    pub kinds: Vec<SideKind>,
    pub center: V3,
    /// The polygon contains the ball of this radius about `center`.
    pub radius: f64,
    /// Subdivision used for the arcs between crossing sides.
    pub arc_nodes: usize,
}

impl RightAngledPolygon {
    fn from_uhp(uhp: Vec<Complex64>, kinds: Vec<SideKind>, center: V3, radius: f64, arc_nodes: usize) -> Self {
        let vertices: Vec<V3> = uhp.iter().map(|z| h2::from_uhp(*z)).collect();
        let m = vertices.len();
        let normals = (0..m)
            .map(|j| {
                let n = h2::normalize_spacelike(&h2::cross(&vertices[j], &vertices[(j + 1) % m]));
                if h2::inner(&center, &n) > 0.0 {
                    -n
                } else {
                    n
                }
            })
            .collect();
        RightAngledPolygon { vertices, uhp, normals, kinds, center, radius, arc_nodes }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, x: &V3) -> bool {
        self.normals.iter().all(|n| h2::inner(x, n) <= 1e-12)
    }

    fn side(&self, j: usize) -> (V3, V3) {
        (self.vertices[j], self.vertices[(j + 1) % self.len()])
    }

    fn side_distance(&self, j: usize, x: &V3) -> f64 {
        let (a, b) = self.side(j);
        point_segment_distance(x, &a, &b)
    }

    /// Reflections in the sides.
    pub fn reflections(&self) -> Vec<Matrix3<f64>> {
        self.normals.iter().map(h2::reflection).collect()
    }

}

fn point_segment_distance(x: &V3, a: &V3, b: &V3) -> f64 {
    let len = h2::dist(a, b);
    if len < 1e-15 {
        return h2::dist(x, a);
    }
    let t = h2::direction(a, b);
    let (al, be) = (-h2::inner(x, a), h2::inner(x, &t));
    let s = if be.abs() < al { (be / al).atanh().clamp(0.0, len) } else if be > 0.0 { len } else { 0.0 };
    (al * s.cosh() - be * s.sinh()).max(1.0).acosh()
}

/// Distance from the segment [a, b] to the geodesic with unit normal n.
fn segment_line_distance(a: &V3, b: &V3, n: &V3) -> f64 {
    let len = h2::dist(a, b);
    let (pa, pb) = (h2::inner(a, n), h2::inner(b, n));
    if pa * pb <= 0.0 {
        return 0.0;
    }
    let mut m = pa.abs().min(pb.abs());
    if len > 1e-15 {
        let t = h2::direction(a, b);
        let (u, v) = (pa, h2::inner(&t, n));
        // stationary point of u cosh s + v sinh s
        if v.abs() < u.abs() {
            let s = (-v / u).atanh();
            if s > 0.0 && s < len {
                m = m.min((u * s.cosh() + v * s.sinh()).abs());
            }
        }
    }
    m.asinh()
}

/// Outcome of the four polygon claims, measured directly on the vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolygonClaims {
    pub contains_ball: bool,
    pub right_angles: bool,
    pub orthogonal_crossings: bool,
    pub vertex_separation: bool,
    /// Largest |cos| of a vertex angle.
    pub max_angle_error: f64,
    /// Smallest distance from a vertex to a leaf crossing of the boundary.
    pub min_vertex_gap: f64,
    /// Smallest distance from the centre to the boundary.
    pub inner_radius: f64,
}

impl PolygonClaims {
    pub fn all_hold(&self) -> bool {
        self.first_violation().is_none()
    }

    pub fn first_violation(&self) -> Option<&'static str> {
        if !self.contains_ball {
            Some("polygon does not contain the ball")
        } else if !self.right_angles {
            Some("interior angles are not all right angles")
        } else if !self.orthogonal_crossings {
            Some("boundary does not meet every leaf orthogonally in two points")
        } else if !self.vertex_separation {
            Some("a vertex is within distance 1 of a leaf crossing")
        } else {
            None
        }
    }
}

/// Crossing points of a leaf with the polygon boundary, with the largest
/// |<leaf normal, side normal>| over them.
fn boundary_crossings(poly: &RightAngledPolygon, leaf: &GeodesicH2) -> (Vec<V3>, f64) {
    let nl = leaf.normal();
    let mut pts: Vec<V3> = Vec::new();
    let mut skew: f64 = 0.0;
    for j in 0..poly.len() {
        let (a, b) = poly.side(j);
        if h2::inner(&a, &nl) * h2::inner(&b, &nl) > 0.0 {
            continue;
        }
        let Some(x) = h2::line_intersection(&nl, &poly.normals[j]) else { continue };
        let excess = h2::dist(&a, &x) + h2::dist(&x, &b) - h2::dist(&a, &b);
        if excess > 1e-8 {
            continue;
        }
        skew = skew.max(h2::inner(&nl, &poly.normals[j]).abs());
        if pts.iter().all(|p| h2::dist(p, &x) > 1e-9) {
            pts.push(x);
        }
    }
    (pts, skew)
}

/// Direction at z of the geodesic toward w, as an angle: w is moved by
/// u -> (u - z)/(u - conj z), which sends z to 0 in the disk.
fn tangent_angle(z: Complex64, w: Complex64) -> f64 {
    ((w - z) / (w - z.conj())).arg()
}

pub fn check_polygon_claims(lam: &FiniteLamination, poly: &RightAngledPolygon) -> PolygonClaims {
    let m = poly.len();
    let c = &poly.center;
    let inner_radius = if poly.contains(c) {
        (0..m).map(|j| poly.side_distance(j, c)).fold(f64::INFINITY, f64::min)
    } else {
        0.0
    };
    // far vertices have large coordinates, so the tolerance is relative
    let convex = (0..m).all(|j| {
        let n = &poly.normals[j];
        poly.vertices.iter().all(|v| h2::inner(v, n) <= 1e-9 * v.norm() * n.norm())
    });
    let z = &poly.uhp;
    let max_angle_error = (0..m)
        .map(|j| {
            let (a, b) = (tangent_angle(z[j], z[(j + m - 1) % m]), tangent_angle(z[j], z[(j + 1) % m]));
            (a - b).cos().abs()
        })
        .fold(0.0, f64::max);
    let mut orthogonal = true;
    let mut gap = f64::INFINITY;
    for l in lam.leaves() {
        let (pts, skew) = boundary_crossings(poly, &l.geodesic);
        if pts.len() != 2 || skew > 1e-9 {
            orthogonal = false;
        }
        for p in &pts {
            for v in &poly.vertices {
                gap = gap.min(h2::dist(p, v));
            }
        }
    }
    PolygonClaims {
        contains_ball: inner_radius >= poly.radius,
        right_angles: convex && max_angle_error < 1e-9,
        orthogonal_crossings: orthogonal,
        vertex_separation: gap > 1.0,
        max_angle_error,
        min_vertex_gap: gap,
        inner_radius,
    }
}

/// Regular right-angled polygon about x0 with inradius at least r.
fn regular_polygon(x0: &V3, r: f64) -> RightAngledPolygon {
    let mut m = 5usize;
    while ((0.5f64).sqrt() / (PI / m as f64).sin()).acosh() < r {
        m += 1;
    }
    let circ = (1.0 / (PI / m as f64).tan()).acosh();
    let z = h2::to_uhp(x0);
    let g = MobiusReal::new(z.im.sqrt(), z.re / z.im.sqrt(), 0.0, 1.0 / z.im.sqrt()).expect("det 1");
    let l = h2::lorentz_from_mobius(&g);
    let (e1, e2) = (l * V3::y(), l * V3::z());
    let vertices = (0..m)
        .map(|j| {
            let th = 2.0 * PI * j as f64 / m as f64;
            h2::to_uhp(&h2::exp_point(x0, &(e1 * th.cos() + e2 * th.sin()), circ))
        })
        .collect();
    RightAngledPolygon::from_uhp(vertices, vec![SideKind::Arc; m], *x0, r, 0)
}

/// A geodesic orthogonal to a leaf, with its cap (the side away from the
/// centre) running counterclockwise from u to v.
#[derive(Debug, Clone, Copy)]
struct Cut {
    leaf: usize,
    normal: V3,
    u: CirclePoint,
    v: CirclePoint,
}

/// Cut orthogonal to leaf i at signed offset s from the foot of x0.
fn cut(lam: &FiniteLamination, x0: &V3, i: usize, s: f64) -> Cut {
    let nl = lam.leaves()[i].geodesic.normal();
    let f = h2::project(x0, &nl);
    let t = h2::normalize_spacelike(&h2::cross(&nl, &f));
    // unit normal of the geodesic through exp_f(s t) orthogonal to the leaf
    let mut n = f * s.sinh() + t * s.cosh();
    if h2::inner(x0, &n) > 0.0 {
        n = -n;
    }
    let (mut u, mut v) = h2::line_endpoints(&n);
    let mid = CirclePoint::from_angle(u.angle() + 0.5 * angle_step(&u, &v));
    if h2::inner(&h2::ideal(&mid), &n) < 0.0 {
        std::mem::swap(&mut u, &mut v);
    }
    Cut { leaf: i, normal: n, u, v }
}

fn in_cap(c: &Cut, x: &CirclePoint) -> bool {
    h2::inner(&h2::ideal(x), &c.normal) > 0.0
}

/// Two cuts per leaf, pushed outward one at a time until every cut is
/// ultraparallel to the other leaves at distance > 1 and the caps are
/// pairwise disjoint. Returned in counterclockwise order.
fn place_cuts(lam: &FiniteLamination, x0: &V3, r: f64) -> Option<Vec<Cut>> {
    const STEP: f64 = 0.25;
    const MAX_PUSH: f64 = 12.0;
    let k = lam.len();
    let base: Vec<f64> = lam.leaves().iter().map(|l| min_offset(x0, &l.geodesic.normal(), r) + STEP).collect();
    let mut off: Vec<f64> = (0..2 * k).map(|c| base[c / 2]).collect();
    let sign = |c: usize| if c.is_multiple_of(2) { 1.0 } else { -1.0 };
    loop {
        let cs: Vec<Cut> = (0..2 * k).map(|c| cut(lam, x0, c / 2, sign(c) * off[c])).collect();
        let mut bump = vec![false; 2 * k];
        for (ci, c) in cs.iter().enumerate() {
            let g = GeodesicH2 { p: c.u, q: c.v };
            for (j, l) in lam.leaves().iter().enumerate() {
                if j != c.leaf && (g.relation(&l.geodesic) != Relation::Ultraparallel || g.distance(&l.geodesic) <= 1.0) {
                    bump[ci] = true;
                }
            }
            for (di, d) in cs.iter().enumerate() {
                if di != ci && (in_cap(c, &d.u) || in_cap(c, &d.v)) {
                    bump[ci] = true;
                }
            }
        }
        if !bump.contains(&true) {
            let mut cs = cs;
            cs.sort_by(|a, b| a.u.angle().partial_cmp(&b.u.angle()).unwrap());
            return Some(cs);
        }
        for c in 0..2 * k {
            if bump[c] {
                off[c] += STEP;
                if off[c] > base[c / 2] + MAX_PUSH {
                    return None;
                }
            }
        }
    }
}

/// Lorentz maps (to, from) between the global picture and the frame in
/// which x0 is the origin.
fn centred_frame(x0: &V3) -> (Matrix3<f64>, Matrix3<f64>) {
    let z = h2::to_uhp(x0);
    let s = z.im.sqrt();
    let g = MobiusReal::new(s, z.re / s, 0.0, 1.0 / s).expect("det 1");
    (h2::lorentz_from_mobius(&g.inverse()), h2::lorentz_from_mobius(&g))
}

fn frame_angle(v: &V3) -> f64 {
    v[2].atan2(v[1])
}

/// Involution of RP^1 fixing p and q: the reflection in the geodesic pq
/// restricted to the boundary.
fn boundary_reflection(p: &CirclePoint, q: &CirclePoint) -> [[f64; 2]; 2] {
    let ((p1, p2), (q1, q2)) = (p.coords(), q.coords());
    let s = p1 * q2 + q1 * p2;
    [[s, -2.0 * p1 * q1], [2.0 * p2 * q2, -s]]
}

/// Sends p, q, r to 0, inf and 1 or -1, whichever keeps the orientation.
fn normalizer(p: &CirclePoint, q: &CirclePoint, r: &CirclePoint) -> Option<MobiusReal> {
    let e = CirclePoint::from_real(if cyclically_ordered(p, r, q) { 1.0 } else { -1.0 });
    mobius_from_triples(&[*p, *q, *r], &[CirclePoint::zero(), CirclePoint::infinity(), e]).ok()
}

/// Feet (in the upper half-plane) of the common perpendicular of two
/// ultraparallel geodesics. Its endpoints are the fixed points of the
/// product of the two reflections. The work is done after sending the
/// first geodesic to (0, inf), so nearby short geodesics keep their
/// relative precision.
fn perpendicular_feet(l1: (CirclePoint, CirclePoint), l2: (CirclePoint, CirclePoint)) -> Option<(Complex64, Complex64)> {
    let n = normalizer(&l1.0, &l1.1, &l2.0)?;
    let (m1, m2) = ((CirclePoint::zero(), CirclePoint::infinity()), (n.apply(&l2.0), n.apply(&l2.1)));
    let (j1, j2) = (boundary_reflection(&m1.0, &m1.1), boundary_reflection(&m2.0, &m2.1));
    let h = |i: usize, k: usize| j2[i][0] * j1[0][k] + j2[i][1] * j1[1][k];
    let (h11, h12, h21, h22) = (h(0, 0), h(0, 1), h(1, 0), h(1, 1));
    let (tr, det) = (h11 + h22, h11 * h22 - h12 * h21);
    let disc = tr * tr - 4.0 * det;
    if !(disc > 0.0) || !(det > 0.0) {
        return None;
    }
    let big = 0.5 * (tr + tr.signum() * disc.sqrt());
    let fixed = |lam: f64| {
        let (u, v) = ((h12, lam - h11), (lam - h22, h21));
        let (x, y) = if u.0.hypot(u.1) >= v.0.hypot(v.1) { u } else { v };
        CirclePoint::new(x, y).ok()
    };
    let x = fixed(big)?;
    fixed(det / big)?;
    // the foot on pq is i once p, q, x go to 0, inf and +-1
    let back = n.inverse();
    let foot = |p: &CirclePoint, q: &CirclePoint| -> Option<Complex64> {
        let g = normalizer(p, q, &x)?;
        Some(back.apply_uhp(g.inverse().apply_uhp(Complex64::i())))
    };
    Some((foot(&m1.0, &m1.1)?, foot(&m2.0, &m2.1)?))
}

/// Right-angled arc from cut a to cut b through the gap between their
/// caps: the gap is split at nodes equally spaced in visual angle from x0,
/// t_i = i / (1 + 2m), and the geodesics over [t_{2j-1}, t_{2j}] are joined
/// by common perpendiculars. Vertices are computed on the boundary circle
/// and placed in the upper half-plane, which keeps them accurate far out.
fn gap_arc(a: &Cut, b: &Cut, m: usize, to: &Matrix3<f64>, from: &Matrix3<f64>) -> Result<Vec<Complex64>> {
    let start = frame_angle(&(to * h2::ideal(&a.v)));
    let end = frame_angle(&(to * h2::ideal(&b.u)));
    let cap = frame_angle(&(to * h2::ideal(&a.u)));
    let ccw = |x: f64| (x - start).rem_euclid(2.0 * PI);
    // walk from a.v to b.u on the side away from a's cap
    let span = if ccw(cap) < ccw(end) { ccw(end) - 2.0 * PI } else { ccw(end) };
    let node = |i: usize| {
        let th = start + span * i as f64 / (1 + 2 * m) as f64;
        h2::ideal_to_circle(&(from * V3::new(1.0, th.cos(), th.sin())))
    };
    let mut lines = vec![(a.u, a.v)];
    for j in 1..=m {
        lines.push((node(2 * j - 1), node(2 * j)));
    }
    lines.push((b.u, b.v));
    let mut pts = Vec::with_capacity(2 * m + 2);
    for w in lines.windows(2) {
        let (p, q) = perpendicular_feet(w[0], w[1])
            .ok_or_else(|| Error::ConstructionFailure("arc geodesics are not ultraparallel".into()))?;
        pts.push(p);
        pts.push(q);
    }
    Ok(pts)
}

/// Arc segments stay farther than r from x0 and than 1 from every leaf;
/// checked in the frame of `to_arc`.
fn arc_far_enough(lam: &FiniteLamination, arc: &[V3], to_arc: &Matrix3<f64>, x0: &V3, r: f64) -> bool {
    let x = to_arc * x0;
    let normals: Vec<V3> = lam.leaves().iter().map(|l| to_arc * l.geodesic.normal()).collect();
    arc.windows(2).all(|w| {
        point_segment_distance(&x, &w[0], &w[1]) > r
            && normals.iter().all(|n| segment_line_distance(&w[0], &w[1], n) > 1.0)
    })
}

/// Smallest offset along a leaf at which an orthogonal geodesic is at
/// distance r from x0.
fn min_offset(x0: &V3, leaf_normal: &V3, r: f64) -> f64 {
    let h = h2::dist_to_line(x0, leaf_normal);
    (r.sinh() / h.cosh()).asinh()
}

/// Right-angled polygon containing B(x0, radius) whose boundary crosses
/// every leaf orthogonally twice, far from its vertices. The offsets of the
/// crossing sides and the arc subdivisions grow until the claims hold.
pub fn build_right_angled_polygon(lam: &FiniteLamination, x0: Complex64, radius: f64) -> Result<RightAngledPolygon> {
    let c = h2::from_uhp(x0);
    if lam.is_empty() {
        return Ok(regular_polygon(&c, radius));
    }
    let g = lam.geodesics();
    for i in 0..g.len() {
        for j in 0..i {
            if g[i].relation(&g[j]) != Relation::Ultraparallel {
                return Err(Error::ConstructionFailure("leaves are not pairwise ultraparallel".into()));
            }
        }
    }
    let cs = place_cuts(lam, &c, radius)
        .ok_or_else(|| Error::ConstructionFailure("crossing sides could not be placed".into()))?;
    let k = cs.len();
    let (to, from) = centred_frame(&c);
    let mut vertices = Vec::new();
    let mut kinds = Vec::new();
    let mut nodes = 0;
    for i in 0..k {
        let (a, b) = (&cs[i], &cs[(i + 1) % k]);
        let mut m = 1;
        let arc = loop {
            let arc = gap_arc(a, b, m, &to, &from)?;
            let framed: Vec<V3> = arc.iter().map(|z| to * h2::from_uhp(*z)).collect();
            if arc_far_enough(lam, &framed, &to, &c, radius) {
                break arc;
            }
            if m >= MAX_ARC_NODES {
                return Err(Error::ConstructionFailure("arc between crossing sides stays too close".into()));
            }
            m *= 2;
        };
        nodes = nodes.max(m);
        let len = arc.len();
        vertices.extend(arc);
        kinds.extend(std::iter::repeat_n(SideKind::Arc, len - 1));
        kinds.push(SideKind::Crossing(b.leaf));
    }
    let poly = RightAngledPolygon::from_uhp(vertices, kinds, c, radius, nodes);
    match check_polygon_claims(lam, &poly).first_violation() {
        None => Ok(poly),
        Some(v) => Err(Error::ConstructionFailure(v.into())),
    }
}

/// Orbit of a lamination under the reflection group of a polygon.
#[derive(Debug, Clone)]
pub struct OrbitReport {
    /// Orbit leaves meeting B(center, radius).
    pub lamination: FiniteLamination,
    /// Side reflections, as Lorentz matrices on the hyperboloid.
    pub generators: Vec<Matrix3<f64>>,
    /// d(center, r_s(center)) for each generator.
    pub displacements: Vec<f64>,
    /// Group elements whose tile meets the ball.
    pub elements: usize,
    pub radius: f64,
}

/// Leaves of `a` and `b` meeting B(center, radius) agree up to `tol` on
/// the endpoints.
pub fn restrictions_agree(a: &FiniteLamination, b: &FiniteLamination, center: &V3, radius: f64, tol: f64) -> bool {
    let inside = |l: &FiniteLamination| -> Vec<GeodesicH2> {
        l.geodesics().into_iter().filter(|g| g.distance_to_point(center) < radius).collect()
    };
    let (ga, gb) = (inside(a), inside(b));
    ga.iter().all(|g| gb.iter().any(|h| g.same_as(h, tol))) && gb.iter().all(|g| ga.iter().any(|h| g.same_as(h, tol)))
}

fn tile_key(x: &V3) -> (i64, i64, i64) {
    let q = |v: f64| (v * 1e6).round() as i64;
    (q(x[0].ln()), q(x[1] / x[0]), q(x[2] / x[0]))
}

fn lookup(map: &HashMap<(i64, i64, i64), usize>, pts: &[V3], x: &V3) -> Option<usize> {
    let (a, b, c) = tile_key(x);
    for da in -1..=1 {
        for db in -1..=1 {
            for dc in -1..=1 {
                if let Some(&i) = map.get(&(a + da, b + db, c + dc)) {
                    // 2 sinh(d / 2), stable for nearby points far out
                    let d = pts[i] - x;
                    if h2::inner(&d, &d) < 1e-12 {
                        return Some(i);
                    }
                }
            }
        }
    }
    None
}

fn map_geodesic(w: &Matrix3<f64>, l: &GeodesicH2) -> GeodesicH2 {
    GeodesicH2 { p: h2::ideal_to_circle(&(w * h2::ideal(&l.p))), q: h2::ideal_to_circle(&(w * h2::ideal(&l.q))) }
}

/// Images of the leaves under the group elements whose tiles meet
/// B(center, radius), truncated to the leaves meeting that ball.
pub fn reflection_orbit_lamination(
    lam: &FiniteLamination,
    poly: &RightAngledPolygon,
    radius: f64,
    budget: usize,
) -> Result<OrbitReport> {
    let c = poly.center;
    let gens = poly.reflections();
    let displacements = gens.iter().map(|r| h2::dist(&c, &(r * c))).collect();
    // (w, w^{-1} c) for each element found
    let mut elements: Vec<(Matrix3<f64>, V3)> = vec![(Matrix3::identity(), c)];
    let mut images: Vec<V3> = vec![c];
    let mut index: HashMap<(i64, i64, i64), usize> = HashMap::from([(tile_key(&c), 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(e) = queue.pop_front() {
        let (we, pe) = elements[e];
        for (s, r) in gens.iter().enumerate() {
            // tiles meeting the ball are connected through sides meeting it
            if poly.side_distance(s, &pe) >= radius {
                continue;
            }
            let w = we * r;
            let img = w * c;
            if lookup(&index, &images, &img).is_some() {
                continue;
            }
            if elements.len() >= budget {
                return Err(Error::OrbitBudgetExceeded);
            }
            index.insert(tile_key(&img), elements.len());
            images.push(img);
            elements.push((w, r * pe));
            queue.push_back(elements.len() - 1);
        }
    }
    let mut leaves: Vec<Leaf> = Vec::new();
    for (w, _) in &elements {
        for l in lam.leaves() {
            let g = map_geodesic(w, &l.geodesic);
            if g.distance_to_point(&c) >= radius {
                continue;
            }
            if leaves.iter().any(|m| m.geodesic.same_as(&g, 1e-9)) {
                continue;
            }
            leaves.push(Leaf { geodesic: g, weight: l.weight });
        }
    }
    Ok(OrbitReport {
        lamination: FiniteLamination::new(leaves)?,
        generators: gens,
        displacements,
        elements: elements.len(),
        radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concentric_feet() {
        let r = |x: f64| CirclePoint::from_real(x);
        let (p, q) = perpendicular_feet((r(-1.0), r(1.0)), (r(-4.0), r(4.0))).unwrap();
        assert!((p - Complex64::i()).norm() < 1e-14, "{p}");
        assert!((q - Complex64::new(0.0, 4.0)).norm() < 1e-14, "{q}");
    }
}
