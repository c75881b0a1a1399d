//! AdS^3 as the negative lines of (M_2(R), -det), its ideal boundary
//! Ein^{1,1} = RP^1 x RP^1, convex hulls of acausal polygons, widths, face
//! projections, bending laminations and the gluing map between the future
//! and past boundaries.

mod gluing;
mod width;

pub use gluing::{
    ads_gluing_samples, bending_lamination, develop_side, develop_with, face_projections, gluing_routes, mess_check,
    route_b_positions, AdsDevelopment, GluingRoutes, MessReport, Projection, SideLaminations,
};
pub use width::{time_to_past, width, WidthReport};

use crate::error::{Error, Result};
use crate::hull::{cone_hull, validate_jordan, R4};
use crate::hyp3::marked_ok;
use crate::mobius::{angle_step, CirclePoint, MobiusReal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

/// Time orientation: the rotation generator [[0, -1], [1, 0]] at the
/// identity is future pointing when this is +1. With -1 the doubled future
/// bending lamination gives the left earthquake extending x_i -> y_i.
pub const FUTURE_SIGN: f64 = -1.0;

/// (x1, x2, x3, x4) <-> [[x1 - x3, -x2 + x4], [x2 + x4, x1 + x3]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec22(pub [f64; 4]);

pub type M2 = [[f64; 2]; 2];

impl Vec22 {
    pub fn from_matrix(m: &M2) -> Self {
        Vec22([
            0.5 * (m[0][0] + m[1][1]),
            0.5 * (m[1][0] - m[0][1]),
            0.5 * (m[1][1] - m[0][0]),
            0.5 * (m[0][1] + m[1][0]),
        ])
    }

    pub fn matrix(&self) -> M2 {
        let [x1, x2, x3, x4] = self.0;
        [[x1 - x3, -x2 + x4], [x2 + x4, x1 + x3]]
    }

    /// q = -det = -x1^2 - x2^2 + x3^2 + x4^2.
    pub fn q(&self) -> f64 {
        inner22(self, self)
    }

    pub fn scale(&self, s: f64) -> Vec22 {
        Vec22(self.0.map(|v| v * s))
    }

    pub fn add(&self, o: &Vec22) -> Vec22 {
        Vec22(std::array::from_fn(|k| self.0[k] + o.0[k]))
    }

    /// Euclidean vector n with n . x = <self, x>.
    pub fn euclidean_dual(&self) -> R4 {
        let [x1, x2, x3, x4] = self.0;
        [-x1, -x2, x3, x4]
    }
}

/// Polarization of q: -1/2 tr(M adj N).
pub fn inner22(x: &Vec22, y: &Vec22) -> f64 {
    -x.0[0] * y.0[0] - x.0[1] * y.0[1] + x.0[2] * y.0[2] + x.0[3] * y.0[3]
}

pub(crate) fn mat_mul(a: &M2, b: &M2) -> M2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j]))
}

pub(crate) fn adj(a: &M2) -> M2 {
    [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]
}

/// Point of AdS^3: q = -1, defined up to sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdSPoint(pub Vec22);

impl AdSPoint {
    /// Rescales any timelike vector.
    pub fn new(v: Vec22) -> Result<Self> {
        let q = v.q();
        if !(q < 0.0) {
            return Err(Error::NonUnitPoint);
        }
        Ok(AdSPoint(v.scale(1.0 / (-q).sqrt())))
    }

    pub fn identity() -> Self {
        AdSPoint(Vec22([1.0, 0.0, 0.0, 0.0]))
    }

    pub fn from_mobius(g: &MobiusReal) -> Self {
        AdSPoint(Vec22::from_matrix(&g.matrix()))
    }

    pub fn to_mobius(&self) -> MobiusReal {
        let m = self.0.matrix();
        MobiusReal::new(m[0][0], m[0][1], m[1][0], m[1][1]).expect("det 1")
    }

    /// The order-2 elliptic isometry fixing z in the upper half-plane.
    pub fn involution(z: num_complex::Complex64) -> Self {
        let (x, y) = (z.re, z.im);
        AdSPoint(Vec22::from_matrix(&[[x / y, -(x * x + y * y) / y], [1.0 / y, -x / y]]))
    }
}

/// A point (p, q) of Ein^{1,1}: the rank-one matrix with image p, kernel q.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EinPoint {
    pub p: CirclePoint,
    pub q: CirclePoint,
}

/// [a; b] [d, -c] for p = a/b, q = c/d.
pub fn ein_embed(p: &CirclePoint, q: &CirclePoint) -> Vec22 {
    let (a, b) = p.coords();
    let (c, d) = q.coords();
    rank_one(&[a, b], &[c, d])
}

fn rank_one(v: &[f64; 2], w: &[f64; 2]) -> Vec22 {
    let r = [w[1], -w[0]];
    Vec22::from_matrix(&[[v[0] * r[0], v[0] * r[1]], [v[1] * r[0], v[1] * r[1]]])
}

impl EinPoint {
    pub fn new(p: CirclePoint, q: CirclePoint) -> Self {
        EinPoint { p, q }
    }

    pub fn from_reals(x: f64, y: f64) -> Self {
        EinPoint { p: CirclePoint::from_real(x), q: CirclePoint::from_real(y) }
    }

    pub fn vector(&self) -> Vec22 {
        ein_embed(&self.p, &self.q)
    }

    /// Image and kernel of a rank-one matrix.
    pub fn from_vec22(v: &Vec22) -> Result<Self> {
        let m = v.matrix();
        let scale = m.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()));
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if !(scale > 0.0) || det.abs() > 1e-9 * scale * scale {
            return Err(Error::InvalidSamples("matrix is not of rank one".into()));
        }
        let col = if m[0][0].abs().max(m[1][0].abs()) >= m[0][1].abs().max(m[1][1].abs()) {
            [m[0][0], m[1][0]]
        } else {
            [m[0][1], m[1][1]]
        };
        let r = if m[0][0].abs().max(m[0][1].abs()) >= m[1][0].abs().max(m[1][1].abs()) { m[0] } else { m[1] };
        // row (d, -c) annihilates the kernel (c, d)
        Ok(EinPoint { p: CirclePoint::new(col[0], col[1])?, q: CirclePoint::new(-r[1], r[0])? })
    }
}

/// Plane {y : <x, y> = 0}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualPlane {
    /// Euclidean normal n with n . y = <x, y>.
    pub normal: R4,
}

pub fn dual_plane(x: &AdSPoint) -> Result<DualPlane> {
    if (x.0.q() + 1.0).abs() > 1e-9 {
        return Err(Error::NonUnitPoint);
    }
    Ok(DualPlane { normal: x.0.euclidean_dual() })
}

pub fn dual_point(plane: &DualPlane) -> Result<AdSPoint> {
    let [n1, n2, n3, n4] = plane.normal;
    let v = Vec22([-n1, -n2, n3, n4]);
    if !(v.q() < 0.0) {
        return Err(Error::NotSpacelike);
    }
    AdSPoint::new(v)
}

/// arccos |<x, y>| for timelike related unit points.
pub fn timelike_distance(x: &AdSPoint, y: &AdSPoint) -> Result<f64> {
    let p = inner22(&x.0, &y.0).abs();
    if p > 1.0 + 1e-12 {
        return Err(Error::NotTimelike);
    }
    if p > 1.0 - 1e-12 {
        let same = (0..4).all(|k| (x.0 .0[k] - y.0 .0[k]).abs() < 1e-9)
            || (0..4).all(|k| (x.0 .0[k] + y.0 .0[k]).abs() < 1e-9);
        return if same { Ok(0.0) } else { Err(Error::NotTimelike) };
    }
    Ok(p.acos())
}

/// Why a point list fails to be acausal.
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// The two points share a coordinate (or coincide).
    LightlikePair(usize, usize),
    /// The triple is positively ordered in one coordinate but not the other.
    ReversedTriple(usize, usize, usize),
    /// A coordinate does not wind once around RP^1 in the given order.
    Winding { coordinate: usize, turns: f64 },
}

impl std::fmt::Display for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Certificate::LightlikePair(i, j) => write!(f, "points {i} and {j} are lightlike related"),
            Certificate::ReversedTriple(i, j, k) => write!(f, "triple ({i}, {j}, {k}) has opposite orders"),
            Certificate::Winding { coordinate, turns } => {
                write!(f, "coordinate {coordinate} winds {turns:.3} times")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AcausalReport {
    pub acausal: bool,
    pub certificate: Option<Certificate>,
}

fn winding(c: &[CirclePoint]) -> f64 {
    let n = c.len();
    (0..n).map(|i| angle_step(&c[i], &c[(i + 1) % n])).sum::<f64>() / TAU
}

/// Both coordinate sequences strictly cyclically increasing.
pub fn acausal_check(points: &[EinPoint]) -> AcausalReport {
    check(points, true)
}

/// As `acausal_check`, but consecutive points may share one coordinate.
pub fn achronal_check(points: &[EinPoint]) -> AcausalReport {
    check(points, false)
}

fn check(points: &[EinPoint], strict: bool) -> AcausalReport {
    let n = points.len();
    let fail = |c| AcausalReport { acausal: false, certificate: Some(c) };
    if n < 3 {
        return fail(Certificate::Winding { coordinate: 0, turns: 0.0 });
    }
    let same = |a: &CirclePoint, b: &CirclePoint| a.approx_eq(b, 1e-12);
    for i in 0..n {
        for j in i + 1..n {
            let sx = same(&points[i].p, &points[j].p);
            let sy = same(&points[i].q, &points[j].q);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if (sx && sy) || ((sx || sy) && (strict || !adjacent)) {
                return fail(Certificate::LightlikePair(i, j));
            }
        }
    }
    let xs: Vec<CirclePoint> = points.iter().map(|e| e.p).collect();
    let ys: Vec<CirclePoint> = points.iter().map(|e| e.q).collect();
    let (wx, wy) = (winding(&xs), winding(&ys));
    if (wx - 1.0).abs() > 1e-9 || (wy - 1.0).abs() > 1e-9 {
        let ord = |c: &[CirclePoint], i: usize, j: usize, k: usize| {
            angle_step(&c[i], &c[j]) <= angle_step(&c[i], &c[k])
        };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if ord(&xs, i, j, k) != ord(&ys, i, j, k) {
                        return fail(Certificate::ReversedTriple(i, j, k));
                    }
                }
            }
        }
        let (coordinate, turns) = if (wx - 1.0).abs() > 1e-9 { (0, wx) } else { (1, wy) };
        return fail(Certificate::Winding { coordinate, turns });
    }
    AcausalReport { acausal: true, certificate: None }
}

/// Cyclically ordered points of Ein^{1,1} with three marked vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct AcausalPolygon {
    pub points: Vec<EinPoint>,
    pub marked: [usize; 3],
    /// Consecutive points may be lightlike related.
    pub weak: bool,
}

impl AcausalPolygon {
    pub fn new(points: Vec<EinPoint>, marked: [usize; 3]) -> Result<Self> {
        Self::build(points, marked, false)
    }

    /// Achronal variant admitting lightlike edges, such as the rhombus.
    pub fn achronal(points: Vec<EinPoint>, marked: [usize; 3]) -> Result<Self> {
        Self::build(points, marked, true)
    }

    fn build(points: Vec<EinPoint>, marked: [usize; 3], weak: bool) -> Result<Self> {
        let r = check(&points, !weak);
        if let Some(c) = r.certificate {
            return Err(Error::NotAcausal(c.to_string()));
        }
        if !marked_ok(marked, points.len()) {
            return Err(Error::InvalidSamples("marked vertices must be distinct and cyclically ordered".into()));
        }
        Ok(AcausalPolygon { points, marked, weak })
    }

    /// Graph points (x_i, f(x_i)).
    pub fn from_graph(xs: &[CirclePoint], ys: &[CirclePoint], marked: [usize; 3]) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidSamples("x and y lists differ in length".into()));
        }
        Self::new(xs.iter().zip(ys).map(|(p, q)| EinPoint::new(*p, *q)).collect(), marked)
    }

    pub fn xs(&self) -> Vec<CirclePoint> {
        self.points.iter().map(|e| e.p).collect()
    }

    pub fn ys(&self) -> Vec<CirclePoint> {
        self.points.iter().map(|e| e.q).collect()
    }

    /// Lifts to R^{2,2} following the curve: consecutive image and kernel
    /// vectors turn forward by less than a half turn, so every pairing of
    /// distinct lifts is <= 0 and they span a pointed cone.
    pub fn lifts(&self) -> Vec<Vec22> {
        let lift = |c: Vec<CirclePoint>| {
            let mut th = 0.5 * c[0].angle();
            let mut out = Vec::with_capacity(c.len());
            for i in 0..c.len() {
                if i > 0 {
                    th += 0.5 * angle_step(&c[i - 1], &c[i]);
                }
                out.push([th.sin(), th.cos()]);
            }
            out
        };
        let v = lift(self.xs());
        let w = lift(self.ys());
        v.iter().zip(&w).map(|(v, w)| rank_one(v, w)).collect()
    }
}

/// Points (a, b), (a', b), (a', b'), (a, b') joined by lightlike segments.
pub fn rhombus(a: f64, a2: f64, b: f64, b2: f64) -> Result<AcausalPolygon> {
    let pts = vec![
        EinPoint::from_reals(a, b),
        EinPoint::from_reals(a2, b),
        EinPoint::from_reals(a2, b2),
        EinPoint::from_reals(a, b2),
    ];
    AcausalPolygon::achronal(pts, [0, 1, 2])
}

/// Graph polygon with uniformly random angles in both coordinates,
/// resampled until every cyclic gap exceeds `gap`. Marked vertices
/// 0, n/3, 2n/3.
pub fn seeded_polygon(seed: u64, n: usize, gap: f64) -> Result<AcausalPolygon> {
    if n < 3 || gap * n as f64 >= TAU {
        return Err(Error::InvalidSamples("no polygon with that many vertices and gap".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut angles = || loop {
        let mut a: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
        a.sort_by(|x, y| x.partial_cmp(y).unwrap());
        if (0..n).all(|i| (if i + 1 < n { a[i + 1] } else { a[0] + TAU }) - a[i] > gap) {
            return a.into_iter().map(CirclePoint::from_angle).collect::<Vec<_>>();
        }
    };
    let xs = angles();
    let ys = angles();
    AcausalPolygon::from_graph(&xs, &ys, [0, n / 3, 2 * n / 3])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeSide {
    Future,
    Past,
}

impl TimeSide {
    pub fn name(&self) -> &'static str {
        match self {
            TimeSide::Future => "future",
            TimeSide::Past => "past",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FaceAdS {
    pub vertices: Vec<usize>,
    /// Dual vector with <P_i, normal> >= 0 on every lift; the face lies in
    /// its orthogonal plane.
    pub normal: Vec22,
    /// Unit dual point when the face is spacelike.
    pub dual: Option<AdSPoint>,
    pub side: TimeSide,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeAdS {
    pub a: usize,
    pub b: usize,
    pub faces: (usize, usize),
    /// arccosh |<gamma_F, gamma_G>| between spacelike neighbours.
    pub bending: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HullComplexAdS {
    pub polygon: AcausalPolygon,
    pub lifts: Vec<Vec22>,
    pub faces: Vec<FaceAdS>,
    pub edges: Vec<EdgeAdS>,
    pub planar: bool,
}

impl HullComplexAdS {
    pub fn marked(&self) -> [usize; 3] {
        self.polygon.marked
    }

    /// Faces on one side; the single face of a planar hull is on both.
    pub fn faces_on(&self, side: TimeSide) -> Vec<usize> {
        if self.planar {
            return vec![0];
        }
        (0..self.faces.len()).filter(|&f| self.faces[f].side == side).collect()
    }

    /// Interior edges between two faces of the given side.
    pub fn bending_edges(&self, side: TimeSide) -> Vec<usize> {
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
            Err(Error::PlanarHull)
        } else {
            Ok(())
        }
    }

    pub fn dual_of(&self, f: usize) -> Result<AdSPoint> {
        self.faces[f].dual.ok_or(Error::NotSpacelike)
    }
}

fn to_r4(v: &Vec22) -> R4 {
    v.0
}

/// True if the outward normal at the face is future pointing.
fn is_future(lifts: &[Vec22], face: &[usize], normal: &Vec22) -> bool {
    let mut s = Vec22([0.0; 4]);
    for &i in face {
        s = s.add(&lifts[i]);
    }
    // outward from the hull is +normal; write it as s . X
    let x = mat_mul(&adj(&s.matrix()), &normal.matrix());
    FUTURE_SIGN * (x[1][0] - x[0][1]) > 0.0
}

/// Convex hull of an acausal polygon, computed as the cone over the lifts
/// that follow the curve; no affine chart is needed.
pub fn convex_hull_acausal(poly: &AcausalPolygon) -> Result<HullComplexAdS> {
    let lifts = poly.lifts();
    let rays: Vec<R4> = lifts.iter().map(to_r4).collect();
    let cone = cone_hull(&rays)?;
    let mut faces = Vec::with_capacity(cone.faces.len());
    for cf in &cone.faces {
        let [n1, n2, n3, n4] = cf.normal;
        let normal = Vec22([-n1, -n2, n3, n4]);
        let dual = if normal.q() < -1e-12 { Some(AdSPoint::new(normal)?) } else { None };
        let side = if is_future(&lifts, &cf.vertices, &normal) { TimeSide::Future } else { TimeSide::Past };
        faces.push(FaceAdS { vertices: cf.vertices.clone(), normal, dual, side });
    }
    if cone.planar {
        let edges = cone.edges.iter().map(|e| EdgeAdS { a: e.a, b: e.b, faces: e.faces, bending: Some(0.0) }).collect();
        return Ok(HullComplexAdS { polygon: poly.clone(), lifts, faces, edges, planar: true });
    }
    let upper: Vec<bool> = faces.iter().map(|f| f.side == TimeSide::Future).collect();
    validate_jordan(lifts.len(), &cone, &upper)?;
    let edges = cone
        .edges
        .iter()
        .map(|e| {
            let (f, g) = e.faces;
            let bending = match (faces[f].dual, faces[g].dual) {
                (Some(x), Some(y)) if faces[f].side == faces[g].side => {
                    Some(inner22(&x.0, &y.0).abs().max(1.0).acosh())
                }
                _ => None,
            };
            EdgeAdS { a: e.a, b: e.b, faces: e.faces, bending }
        })
        .collect();
    Ok(HullComplexAdS { polygon: poly.clone(), lifts, faces, edges, planar: false })
}

/// True iff the dual plane of y misses the hull: every vertex lift pairs
/// with y with the same strict sign.
pub fn invisible_domain_contains(y: &AdSPoint, hull: &HullComplexAdS) -> bool {
    let s: Vec<f64> = hull.lifts.iter().map(|p| inner22(p, &y.0)).collect();
    s.iter().all(|&v| v > 0.0) || s.iter().all(|&v| v < 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_round_trip() {
        let v = Vec22([0.3, -1.2, 0.7, 2.0]);
        let w = Vec22::from_matrix(&v.matrix());
        for k in 0..4 {
            assert!((v.0[k] - w.0[k]).abs() < 1e-15);
        }
        let m = v.matrix();
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        assert!((v.q() + det).abs() < 1e-14);
    }

    #[test]
    fn ein_examples() {
        let z = EinPoint::from_reals(0.0, 0.0).vector().matrix();
        assert!(z[0][0].abs() < 1e-15 && z[0][1].abs() < 1e-15 && z[1][1].abs() < 1e-15);
        assert!((z[1][0] - 1.0).abs() < 1e-15);
        let o = EinPoint::from_reals(1.0, 1.0).vector().matrix();
        let s = o[0][0];
        assert!((o[0][1] + s).abs() < 1e-15 && (o[1][0] - s).abs() < 1e-15 && (o[1][1] + s).abs() < 1e-15);
    }

    #[test]
    fn ein_round_trip() {
        for (x, y) in [(0.0, 0.0), (1.5, -2.0), (f64::INFINITY, 0.3), (-0.2, f64::INFINITY)] {
            let e = EinPoint::from_reals(x, y);
            let back = EinPoint::from_vec22(&e.vector()).unwrap();
            assert!(back.p.approx_eq(&e.p, 1e-14) && back.q.approx_eq(&e.q, 1e-14));
        }
    }

    #[test]
    fn identity_dual_contains_involutions() {
        let id = AdSPoint::identity();
        let z = num_complex::Complex64::new(0.4, 1.3);
        let inv = AdSPoint::involution(z);
        assert!((inv.0.q() + 1.0).abs() < 1e-12);
        assert!(inner22(&id.0, &inv.0).abs() < 1e-14);
        assert!((timelike_distance(&id, &inv).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn acausal_examples() {
        let ok = [EinPoint::from_reals(0.0, 0.0), EinPoint::from_reals(1.0, 1.0), EinPoint::from_reals(f64::INFINITY, f64::INFINITY)];
        assert!(acausal_check(&ok).acausal);
        let light = [EinPoint::from_reals(0.0, 0.0), EinPoint::from_reals(1.0, 1.0), EinPoint::from_reals(2.0, 1.0)];
        let r = acausal_check(&light);
        assert_eq!(r.certificate, Some(Certificate::LightlikePair(1, 2)));
        let rev = [
            EinPoint::from_reals(0.0, 3.0),
            EinPoint::from_reals(1.0, 2.0),
            EinPoint::from_reals(2.0, 1.0),
            EinPoint::from_reals(3.0, 0.0),
        ];
        assert!(matches!(acausal_check(&rev).certificate, Some(Certificate::ReversedTriple(..))));
    }

    #[test]
    fn lifts_pair_negatively() {
        let xs: Vec<f64> = vec![-3.0, -0.5, 0.2, 1.0, 4.0];
        let ys: Vec<f64> = vec![-1.0, 0.0, 0.5, 2.0, 9.0];
        let pts = xs.iter().zip(&ys).map(|(x, y)| EinPoint::from_reals(*x, *y)).collect();
        let poly = AcausalPolygon::new(pts, [0, 1, 2]).unwrap();
        let l = poly.lifts();
        for i in 0..l.len() {
            assert!(l[i].q().abs() < 1e-14);
            for j in 0..i {
                assert!(inner22(&l[i], &l[j]) < 0.0);
            }
        }
    }
}
