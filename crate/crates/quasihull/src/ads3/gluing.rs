use super::{adj, inner22, mat_mul, AdSPoint, HullComplexAdS, TimeSide, Vec22};
use crate::earthquake::{EarthquakeSpec, FiniteLamination, GeodesicH2, Handedness, Leaf};
use crate::error::{Error, Result};
use crate::hyp3::frame;
use crate::mobius::{mobius_from_triples, CircleMap, CirclePoint, Interp, MobiusReal};
use num_complex::Complex64;
use std::collections::VecDeque;

/// Handedness of the earthquake from the left-projected picture to the
/// developed one, per side.
fn development_handedness(side: TimeSide) -> Handedness {
    match side {
        TimeSide::Future => Handedness::Left,
        TimeSide::Past => Handedness::Right,
    }
}

/// (Pi_l(s), Pi_r(s)) for s on the plane dual to gamma: with s = gamma I_x,
/// Pi_r(s) = x and Pi_l(s) = gamma(x).
pub fn face_projections(gamma: &AdSPoint, s: &Vec22) -> Result<(Complex64, Complex64)> {
    let q = s.q();
    if !(q < 0.0) {
        return Err(Error::NotOnFace);
    }
    let s = s.scale(1.0 / (-q).sqrt());
    if inner22(&s, &gamma.0).abs() > 1e-9 {
        return Err(Error::NotOnFace);
    }
    let m = mat_mul(&adj(&gamma.0.matrix()), &s.matrix());
    let a = 0.5 * (m[0][0] - m[1][1]);
    let (b, c) = (m[0][1], m[1][0]);
    let det = -a * a - b * c;
    if !(det > 0.0) || c == 0.0 {
        return Err(Error::NotOnFace);
    }
    let x = Complex64::new(a, c.signum() * det.sqrt()) / c;
    Ok((gamma.to_mobius().apply_uhp(x), x))
}

fn centroid(hull: &HullComplexAdS, f: usize) -> Vec22 {
    hull.faces[f].vertices.iter().fold(Vec22([0.0; 4]), |acc, &i| acc.add(&hull.lifts[i]))
}

/// Which projection charts the faces during development.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    Left,
    Right,
}

/// One boundary side unfolded into H^2.
#[derive(Debug, Clone)]
pub struct AdsDevelopment {
    pub side: TimeSide,
    pub base_face: usize,
    /// (face, D_F): D_F composed with the face projection is the
    /// isometric parametrization of the face, normalized.
    pub charts: Vec<(usize, MobiusReal)>,
    pub positions: Vec<CirclePoint>,
}

fn normalizer(hull: &HullComplexAdS, pos: &[CirclePoint]) -> Result<MobiusReal> {
    let [m0, m1, m2] = hull.marked();
    let std3 = [CirclePoint::zero(), CirclePoint::one(), CirclePoint::infinity()];
    mobius_from_triples(&[pos[m0], pos[m1], pos[m2]], &std3)
}

/// Development through the left projections, starting at the first face
/// of the side.
pub fn develop_side(hull: &HullComplexAdS, side: TimeSide) -> Result<AdsDevelopment> {
    let base = *hull.faces_on(side).first().ok_or(Error::NonDiskSide)?;
    develop_with(hull, side, base, Projection::Left)
}

/// Development from a chosen base face and projection chart.
pub fn develop_with(hull: &HullComplexAdS, side: TimeSide, base: usize, proj: Projection) -> Result<AdsDevelopment> {
    let faces = hull.faces_on(side);
    if !faces.contains(&base) {
        return Err(Error::NonDiskSide);
    }
    let ideal = |i: usize| match proj {
        Projection::Left => hull.polygon.points[i].p,
        Projection::Right => hull.polygon.points[i].q,
    };
    let chart = |f: usize, s: &Vec22| -> Result<Complex64> {
        let (l, r) = face_projections(&hull.dual_of(f)?, s)?;
        Ok(match proj {
            Projection::Left => l,
            Projection::Right => r,
        })
    };
    let nf = hull.faces.len();
    let mut dev: Vec<Option<MobiusReal>> = vec![None; nf];
    hull.dual_of(base)?;
    dev[base] = Some(MobiusReal::identity());
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
            if dev[g].is_some() {
                continue;
            }
            let s = hull.lifts[edge.a].add(&hull.lifts[edge.b]);
            let (xa, xb) = (ideal(edge.a), ideal(edge.b));
            let t = frame(&xa, &xb, chart(f, &s)?)?.compose(&frame(&xa, &xb, chart(g, &s)?)?.inverse());
            dev[g] = Some(dev[f].unwrap().compose(&t));
            order.push(g);
            queue.push_back(g);
        }
    }
    if order.len() != faces.len() {
        return Err(Error::NonDiskSide);
    }
    let n = hull.lifts.len();
    let mut pos: Vec<Option<CirclePoint>> = vec![None; n];
    for &f in &order {
        for &v in &hull.faces[f].vertices {
            pos[v].get_or_insert_with(|| dev[f].unwrap().apply(&ideal(v)));
        }
    }
    let pos: Vec<CirclePoint> = pos.into_iter().collect::<Option<_>>().ok_or(Error::NonDiskSide)?;
    let norm = normalizer(hull, &pos)?;
    Ok(AdsDevelopment {
        side,
        base_face: base,
        charts: order.iter().map(|&f| (f, norm.compose(&dev[f].unwrap()))).collect(),
        positions: pos.iter().map(|p| norm.apply(p)).collect(),
    })
}

/// Bending laminations of one side, seen through both projections.
#[derive(Debug, Clone, PartialEq)]
pub struct SideLaminations {
    /// Leaves (x_a, x_b) through Pi_l.
    pub left: FiniteLamination,
    /// Leaves (y_a, y_b) through Pi_r.
    pub right: FiniteLamination,
}

/// One leaf per bending edge of the side, weighted by its bending angle.
/// A planar hull gives empty laminations.
pub fn bending_lamination(hull: &HullComplexAdS, side: TimeSide) -> Result<SideLaminations> {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for e in hull.bending_edges(side) {
        let edge = hull.edges[e];
        let w = edge.bending.ok_or(Error::NotSpacelike)?;
        if w <= 0.0 {
            continue;
        }
        let (pa, pb) = (hull.polygon.points[edge.a], hull.polygon.points[edge.b]);
        left.push(Leaf { geodesic: GeodesicH2::new(pa.p, pb.p)?, weight: w });
        right.push(Leaf { geodesic: GeodesicH2::new(pa.q, pb.q)?, weight: w });
    }
    Ok(SideLaminations { left: FiniteLamination::new(left)?, right: FiniteLamination::new(right)? })
}

/// Earthquake along `lam` based at the left projection of the face's
/// centroid.
fn face_based_earthquake(
    hull: &HullComplexAdS,
    face: usize,
    lam: FiniteLamination,
    hand: Handedness,
) -> Result<EarthquakeSpec> {
    let (base, _) = face_projections(&hull.dual_of(face)?, &centroid(hull, face))?;
    EarthquakeSpec::new(lam, hand, base)
}

/// Developed vertex positions of a side as the earthquake of the left
/// bending lamination applied to the x-coordinates, normalized.
pub fn route_b_positions(hull: &HullComplexAdS, side: TimeSide) -> Result<Vec<CirclePoint>> {
    let base = *hull.faces_on(side).first().ok_or(Error::NonDiskSide)?;
    let lam = bending_lamination(hull, side)?.left;
    let eq = face_based_earthquake(hull, base, lam, development_handedness(side))?;
    let pos: Vec<CirclePoint> = hull.polygon.points.iter().map(|e| eq.eval_boundary(&e.p)).collect();
    let norm = normalizer(hull, &pos)?;
    Ok(pos.iter().map(|p| norm.apply(p)).collect())
}

/// Both computations of the gluing map and their largest disagreement.
#[derive(Debug, Clone)]
pub struct GluingRoutes {
    pub development: CircleMap,
    pub earthquakes: CircleMap,
    pub discrepancy: f64,
}

pub fn gluing_routes(hull: &HullComplexAdS) -> Result<GluingRoutes> {
    let fut = develop_side(hull, TimeSide::Future)?.positions;
    if hull.planar {
        let id = CircleMap::identity(fut)?;
        return Ok(GluingRoutes { development: id.clone(), earthquakes: id, discrepancy: 0.0 });
    }
    let past = develop_side(hull, TimeSide::Past)?.positions;
    let fut_b = route_b_positions(hull, TimeSide::Future)?;
    let past_b = route_b_positions(hull, TimeSide::Past)?;
    let discrepancy = fut
        .iter()
        .zip(&fut_b)
        .chain(past.iter().zip(&past_b))
        .map(|(p, q)| p.angular_distance(q))
        .fold(0.0, f64::max);
    Ok(GluingRoutes {
        development: CircleMap::from_samples(fut, past, Interp::PwMoebius)?,
        earthquakes: CircleMap::from_samples(fut_b, past_b, Interp::PwMoebius)?,
        discrepancy,
    })
}

/// Gluing map from the future to the past boundary sampled at the
/// vertices, cross-checked between development and earthquake routes.
pub fn ads_gluing_samples(hull: &HullComplexAdS) -> Result<CircleMap> {
    let r = gluing_routes(hull)?;
    if r.discrepancy > 1e-7 {
        return Err(Error::RouteMismatch(r.discrepancy));
    }
    Ok(r.development)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MessReport {
    /// max_i d(E^l_{2 lambda+}(x_i), y_i), angular.
    pub future_deviation: f64,
    /// max_i d(E^r_{2 lambda-}(x_i), y_i), angular.
    pub past_deviation: f64,
    pub max_deviation: f64,
}

fn mess_side(hull: &HullComplexAdS, side: TimeSide, hand: Handedness) -> Result<f64> {
    let base = *hull.faces_on(side).first().ok_or(Error::NonDiskSide)?;
    let lam = bending_lamination(hull, side)?.left.scaled(2.0);
    let eq = face_based_earthquake(hull, base, lam, hand)?;
    // the base stratum carries x_j -> y_j = gamma^{-1}(x_j)
    let g = hull.dual_of(base)?.to_mobius().inverse();
    Ok(hull
        .polygon
        .points
        .iter()
        .map(|e| g.apply(&eq.eval_boundary(&e.p)).angular_distance(&e.q))
        .fold(0.0, f64::max))
}

/// Checks that the doubled left bending laminations of the two sides give
/// the left and right earthquakes extending x_i -> y_i.
pub fn mess_check(hull: &HullComplexAdS) -> Result<MessReport> {
    let future_deviation = mess_side(hull, TimeSide::Future, Handedness::Left)?;
    let past_deviation = mess_side(hull, TimeSide::Past, Handedness::Right)?;
    Ok(MessReport { future_deviation, past_deviation, max_deviation: future_deviation.max(past_deviation) })
}
