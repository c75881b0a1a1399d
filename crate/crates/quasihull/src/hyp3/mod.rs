//! H^3 as the negative lines of Herm(2, C) with <X, X> = -det X, ideal
//! convex hulls of finite subsets of CP^1, their pleated boundaries and the
//! gluing map between the two sides.

mod develop;
mod retract;

pub use develop::{develop_from, develop_pleated_boundary, hyp_gluing_samples, PleatedDevelopment};
pub(crate) use develop::frame;
pub use retract::nearest_point_retract;

use crate::error::{Error, Result};
use crate::hull::{cone_hull, validate_jordan, R4};
use crate::mobius::{cross_ratio_complex, MobiusComplex, CP1};
use num_complex::Complex64;

/// (x1, x2, x3, x4) <-> [[x4 + x1, x2 - i x3], [x2 + i x3, x4 - x1]].
pub type Vec31 = [f64; 4];

pub fn inner31(x: &Vec31, y: &Vec31) -> f64 {
    x[0] * y[0] + x[1] * y[1] + x[2] * y[2] - x[3] * y[3]
}

pub type Herm = [[Complex64; 2]; 2];

pub fn to_herm(x: &Vec31) -> Herm {
    [
        [Complex64::new(x[3] + x[0], 0.0), Complex64::new(x[1], -x[2])],
        [Complex64::new(x[1], x[2]), Complex64::new(x[3] - x[0], 0.0)],
    ]
}

pub fn from_herm(h: &Herm) -> Vec31 {
    [0.5 * (h[0][0].re - h[1][1].re), h[0][1].re, -h[0][1].im, 0.5 * (h[0][0].re + h[1][1].re)]
}

pub fn det_herm(h: &Herm) -> f64 {
    (h[0][0] * h[1][1] - h[0][1] * h[1][0]).re
}

/// A . X = A X A^*.
pub fn act(a: &MobiusComplex, x: &Vec31) -> Vec31 {
    let m = a.matrix();
    let h = to_herm(x);
    let mut t = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    t[i][j] += m[i][k] * h[k][l] * m[j][l].conj();
                }
            }
        }
    }
    from_herm(&t)
}

/// Point of H^3, normalized to <X, X> = -1 and x4 > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint(pub Vec31);

impl HPoint {
    pub fn new(x: Vec31) -> Result<Self> {
        let q = inner31(&x, &x);
        if !(q < 0.0) {
            return Err(Error::InvalidSamples("vector is not timelike".into()));
        }
        let s = if x[3] < 0.0 { -1.0 } else { 1.0 } / (-q).sqrt();
        Ok(HPoint(x.map(|v| v * s)))
    }

    pub fn origin() -> Self {
        HPoint([0.0, 0.0, 0.0, 1.0])
    }

    /// Upper half-space point (w, t), t > 0.
    pub fn from_upper(w: Complex64, t: f64) -> Self {
        let h = [
            [Complex64::new((w.norm_sqr() + t * t) / t, 0.0), w / t],
            [w.conj() / t, Complex64::new(1.0 / t, 0.0)],
        ];
        HPoint(from_herm(&h))
    }

    pub fn to_upper(&self) -> (Complex64, f64) {
        let h = to_herm(&self.0);
        let x22 = h[1][1].re;
        (h[0][1] / x22, 1.0 / x22)
    }

    pub fn dist(&self, other: &HPoint) -> f64 {
        (-inner31(&self.0, &other.0)).max(1.0).acosh()
    }

    /// Affine chart x4 = 1; lands in the open unit ball.
    pub fn ball(&self) -> [f64; 3] {
        [self.0[0] / self.0[3], self.0[1] / self.0[3], self.0[2] / self.0[3]]
    }
}

/// Ideal point v v^* of the CP^1 point z = (v1 : v2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HIdealPoint {
    pub x: Vec31,
    pub z: CP1,
}

pub fn ideal_embed(z: &CP1) -> HIdealPoint {
    let (u, w) = (z.u, z.v);
    let h = [[Complex64::new(u.norm_sqr(), 0.0), u * w.conj()], [w * u.conj(), Complex64::new(w.norm_sqr(), 0.0)]];
    HIdealPoint { x: from_herm(&h), z: *z }
}

/// Unit spacelike vector; the plane is its orthogonal complement.
pub type DSPoint = Vec31;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Top,
    Bottom,
}

impl Side {
    pub fn name(&self) -> &'static str {
        match self {
            Side::Top => "top",
            Side::Bottom => "bottom",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FaceH3 {
    pub vertices: Vec<usize>,
    /// Inward unit normal: <X_i, plane> >= 0 for every vertex.
    pub plane: DSPoint,
    pub side: Side,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeH3 {
    pub a: usize,
    pub b: usize,
    pub faces: (usize, usize),
    /// Exterior dihedral angle, arccos of the pairing of outward normals.
    pub bending: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HullComplexH3 {
    pub vertices: Vec<HIdealPoint>,
    pub faces: Vec<FaceH3>,
    /// Interior edges of a solid hull; boundary edges of a planar one
    /// (listing the single face twice, bending 0).
    pub edges: Vec<EdgeH3>,
    pub planar: bool,
    pub marked: [usize; 3],
}

fn to_r4(x: &Vec31) -> R4 {
    *x
}

/// Top iff the other vertices lie to the right of the face circle oriented
/// by three of its vertices in curve order.
fn classify(points: &[CP1], face: &[usize]) -> Side {
    let mut s = face.to_vec();
    s.sort_unstable();
    let (i, j, k) = (s[0], s[1], s[2]);
    let mut acc = 0.0;
    for (l, p) in points.iter().enumerate() {
        if s.contains(&l) {
            continue;
        }
        if let Ok(t) = cross_ratio_complex(&points[i], &points[j], p, &points[k]) {
            acc += t.im;
        }
    }
    if acc < 0.0 {
        Side::Top
    } else {
        Side::Bottom
    }
}

/// True if the marked indices are distinct and in cyclic order.
pub(crate) fn marked_ok(marked: [usize; 3], n: usize) -> bool {
    let [a, b, c] = marked;
    if a >= n || b >= n || c >= n || a == b || b == c || a == c {
        return false;
    }
    let step = |x: usize, y: usize| (y + n - x) % n;
    step(a, b) < step(a, c)
}

/// Convex hull of ideal points listed in the cyclic order of a Jordan
/// curve through them. Coplanar input gives a single face with
/// `planar = true`.
pub fn convex_hull_ideal(points: &[CP1], marked: [usize; 3]) -> Result<HullComplexH3> {
    let n = points.len();
    if n < 3 {
        return Err(Error::InvalidSamples("at least 3 ideal points are required".into()));
    }
    if !marked_ok(marked, n) {
        return Err(Error::InvalidSamples("marked vertices must be 3 distinct indices in cyclic order".into()));
    }
    let vertices: Vec<HIdealPoint> = points.iter().map(ideal_embed).collect();
    let lifts: Vec<R4> = vertices.iter().map(|v| to_r4(&v.x)).collect();
    let cone = cone_hull(&lifts)?;
    let plane_of = |n: &R4| -> DSPoint {
        let p = [n[0], n[1], n[2], -n[3]];
        let q = inner31(&p, &p).max(1e-300).sqrt();
        p.map(|v| v / q)
    };
    if cone.planar {
        let f = &cone.faces[0];
        let faces = vec![FaceH3 { vertices: f.vertices.clone(), plane: plane_of(&f.normal), side: Side::Top }];
        let edges = cone.edges.iter().map(|e| EdgeH3 { a: e.a, b: e.b, faces: (0, 0), bending: 0.0 }).collect();
        return Ok(HullComplexH3 { vertices, faces, edges, planar: true, marked });
    }
    let faces: Vec<FaceH3> = cone
        .faces
        .iter()
        .map(|f| FaceH3 { vertices: f.vertices.clone(), plane: plane_of(&f.normal), side: classify(points, &f.vertices) })
        .collect();
    let upper: Vec<bool> = faces.iter().map(|f| f.side == Side::Top).collect();
    validate_jordan(n, &cone, &upper)?;
    let edges = cone
        .edges
        .iter()
        .map(|e| {
            let (p, q) = (&faces[e.faces.0].plane, &faces[e.faces.1].plane);
            let c = inner31(p, q).clamp(-1.0, 1.0);
            EdgeH3 { a: e.a, b: e.b, faces: e.faces, bending: c.acos() }
        })
        .collect();
    Ok(HullComplexH3 { vertices, faces, edges, planar: false, marked })
}

impl HullComplexH3 {
    pub fn points(&self) -> Vec<CP1> {
        self.vertices.iter().map(|v| v.z).collect()
    }

    pub fn faces_on(&self, side: Side) -> Vec<usize> {
        if self.planar {
            return vec![0];
        }
        (0..self.faces.len()).filter(|&f| self.faces[f].side == side).collect()
    }

    /// Edges between two faces of the given side.
    pub fn bending_edges(&self, side: Side) -> Vec<usize> {
        if self.planar {
            return Vec::new();
        }
        (0..self.edges.len())
            .filter(|&e| {
                let (f, g) = self.edges[e].faces;
                self.faces[f].side == side && self.faces[g].side == side
            })
            .collect()
    }

    pub fn require_solid(&self) -> Result<()> {
        if self.planar {
            Err(Error::CollinearInput)
        } else {
            Ok(())
        }
    }
}
