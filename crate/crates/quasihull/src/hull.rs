//! Convex hull of a pointed cone in R^4 spanned by finitely many rays, by
//! exhaustive enumeration of supporting planes through point triples.
//! Used for ideal points in H^3 and for acausal points of Ein^{1,1}.

use crate::error::{Error, Result};
use std::collections::BTreeMap;

pub type R4 = [f64; 4];

/// One tolerance for both strict-side and incidence tests, on unit vectors.
pub const PLANE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ConeFace {
    /// Vertex indices in cyclic order around the face.
    pub vertices: Vec<usize>,
    /// Euclidean unit normal with n . P >= 0 on every input ray.
    pub normal: R4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConeEdge {
    pub a: usize,
    pub b: usize,
    pub faces: (usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeHull {
    pub faces: Vec<ConeFace>,
    pub edges: Vec<ConeEdge>,
    /// All rays lie in one hyperplane; there is a single face and each
    /// boundary edge lists it twice.
    pub planar: bool,
}

pub fn dot(a: &R4, b: &R4) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

fn unit(a: &R4) -> R4 {
    let r = dot(a, a).sqrt();
    [a[0] / r, a[1] / r, a[2] / r, a[3] / r]
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// n with n . x = det[p; q; r; x].
pub fn cross4(p: &R4, q: &R4, r: &R4) -> R4 {
    let mut n = [0.0; 4];
    for (l, nl) in n.iter_mut().enumerate() {
        let cols: Vec<usize> = (0..4).filter(|&c| c != l).collect();
        let minor = [
            [p[cols[0]], p[cols[1]], p[cols[2]]],
            [q[cols[0]], q[cols[1]], q[cols[2]]],
            [r[cols[0]], r[cols[1]], r[cols[2]]],
        ];
        let sign = if (3 + l) % 2 == 0 { 1.0 } else { -1.0 };
        *nl = sign * det3(minor);
    }
    n
}

/// Orders face vertices cyclically by azimuth around their barycentre,
/// inside the face hyperplane.
fn order_face(pts: &[R4], idx: &[usize], normal: &R4) -> Vec<usize> {
    let mut c = [0.0; 4];
    for &i in idx {
        for k in 0..4 {
            c[k] += pts[i][k];
        }
    }
    let c = unit(&c);
    let perp = |x: &R4| -> R4 {
        let a = dot(x, &c);
        let b = dot(x, normal);
        [
            x[0] - a * c[0] - b * normal[0],
            x[1] - a * c[1] - b * normal[1],
            x[2] - a * c[2] - b * normal[2],
            x[3] - a * c[3] - b * normal[3],
        ]
    };
    let qs: Vec<R4> = idx.iter().map(|&i| perp(&pts[i])).collect();
    let u = unit(&qs[0]);
    let mut best = (0.0, [0.0; 4]);
    for q in &qs {
        let a = dot(q, &u);
        let w = [q[0] - a * u[0], q[1] - a * u[1], q[2] - a * u[2], q[3] - a * u[3]];
        let r = dot(&w, &w);
        if r > best.0 {
            best = (r, w);
        }
    }
    let v = unit(&best.1);
    let mut keyed: Vec<(f64, usize)> =
        idx.iter().zip(&qs).map(|(&i, q)| (dot(q, &v).atan2(dot(q, &u)), i)).collect();
    keyed.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut order: Vec<usize> = keyed.into_iter().map(|(_, i)| i).collect();
    // canonical start and direction: smallest index first, then the
    // smaller of its two neighbours
    let m = order.iter().enumerate().min_by_key(|(_, &v)| v).unwrap().0;
    order.rotate_left(m);
    if order.len() > 2 && order[order.len() - 1] < order[1] {
        order[1..].reverse();
    }
    order
}

/// Convex hull of the cone spanned by the rays `points` (any scale).
pub fn cone_hull(points: &[R4]) -> Result<ConeHull> {
    let n = points.len();
    if n < 3 {
        return Err(Error::InvalidSamples("a hull needs at least 3 points".into()));
    }
    let pts: Vec<R4> = points.iter().map(unit).collect();
    for i in 0..n {
        for j in 0..i {
            let d = [pts[i][0] - pts[j][0], pts[i][1] - pts[j][1], pts[i][2] - pts[j][2], pts[i][3] - pts[j][3]];
            if dot(&d, &d).sqrt() < 1e-12 {
                return Err(Error::InvalidSamples(format!("points {j} and {i} coincide")));
            }
        }
    }
    let mut faces: BTreeMap<Vec<usize>, R4> = BTreeMap::new();
    let mut planar_normal: Option<R4> = None;
    let mut any_solid = false;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let raw = cross4(&pts[i], &pts[j], &pts[k]);
                let len = dot(&raw, &raw).sqrt();
                if len < 1e-12 {
                    continue;
                }
                let mut nrm = [raw[0] / len, raw[1] / len, raw[2] / len, raw[3] / len];
                let s: Vec<f64> = pts.iter().map(|p| dot(&nrm, p)).collect();
                let min = s.iter().cloned().fold(f64::INFINITY, f64::min);
                let max = s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                if min >= -PLANE_TOL && max <= PLANE_TOL {
                    planar_normal.get_or_insert(nrm);
                    continue;
                }
                any_solid = true;
                if min < -PLANE_TOL && max > PLANE_TOL {
                    continue;
                }
                if max <= PLANE_TOL {
                    nrm = nrm.map(|v| -v);
                }
                if [i, j, k].iter().any(|&m| s[m].abs() > PLANE_TOL) {
                    // ill-conditioned triple; a better one spans the same face
                    continue;
                }
                let on: Vec<usize> = (0..n).filter(|&m| s[m].abs() <= PLANE_TOL).collect();
                faces.entry(on).or_insert(nrm);
            }
        }
    }
    if !any_solid {
        let normal = planar_normal.ok_or(Error::InvalidSamples("degenerate point set".into()))?;
        let idx: Vec<usize> = (0..n).collect();
        let vertices = order_face(&pts, &idx, &normal);
        let edges = (0..n)
            .map(|t| {
                let (a, b) = (vertices[t], vertices[(t + 1) % n]);
                ConeEdge { a: a.min(b), b: a.max(b), faces: (0, 0) }
            })
            .collect();
        return Ok(ConeHull { faces: vec![ConeFace { vertices, normal }], edges, planar: true });
    }
    let faces: Vec<ConeFace> = faces
        .into_iter()
        .map(|(idx, normal)| ConeFace { vertices: order_face(&pts, &idx, &normal), normal })
        .collect();
    let mut edge_map: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (f, face) in faces.iter().enumerate() {
        let m = face.vertices.len();
        for t in 0..m {
            let (a, b) = (face.vertices[t], face.vertices[(t + 1) % m]);
            edge_map.entry((a.min(b), a.max(b))).or_default().push(f);
        }
    }
    let mut edges = Vec::with_capacity(edge_map.len());
    for ((a, b), fs) in edge_map {
        if fs.len() != 2 {
            return Err(Error::DegenerateHull);
        }
        edges.push(ConeEdge { a, b, faces: (fs[0], fs[1]) });
    }
    Ok(ConeHull { faces, edges, planar: false })
}

/// Checks that the closed path 0, 1, ..., n-1 runs along hull edges and
/// separates the faces labelled `upper` from the others.
pub fn validate_jordan(n: usize, hull: &ConeHull, upper: &[bool]) -> Result<()> {
    if hull.planar {
        return Ok(());
    }
    let consecutive = |a: usize, b: usize| (a + 1) % n == b || (b + 1) % n == a;
    let mut seen = vec![false; n];
    for e in &hull.edges {
        let (f, g) = e.faces;
        let cut = upper[f] != upper[g];
        if consecutive(e.a, e.b) {
            if !cut {
                return Err(Error::NonJordanOrder(format!(
                    "curve edge ({}, {}) does not separate the two sides",
                    e.a, e.b
                )));
            }
            let first = if (e.a + 1) % n == e.b { e.a } else { e.b };
            seen[first] = true;
        } else if cut {
            return Err(Error::NonJordanOrder(format!("edge ({}, {}) crosses between sides", e.a, e.b)));
        }
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Error::NonJordanOrder(format!("curve edge ({}, {}) is not a hull edge", i, (i + 1) % n)));
    }
    Ok(())
}
