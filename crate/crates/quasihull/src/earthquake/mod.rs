//! Finite measured laminations of H^2, earthquakes along them, Thurston
//! norm bounds, and the approximation pipeline by reflection-invariant
//! laminations.

mod approx;
mod thurston;

pub use approx::{
    build_right_angled_polygon, check_polygon_claims, geodesic_space_distance, perturb_ultraparallel,
    reflection_orbit_lamination, restrictions_agree, OrbitReport, PolygonClaims, RightAngledPolygon, SideKind,
};
pub use thurston::{thurston_norm_estimate, NormInterval};

use crate::error::{Error, Result};
use crate::h2::{self, V3};
use crate::mobius::{angle_step, CirclePoint, MobiusReal};
use num_complex::Complex64;

/// Endpoints closer than this (in det) are considered equal.
pub const ENDPOINT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Equal,
    Crossing,
    Asymptotic,
    Ultraparallel,
}

/// Complete geodesic of H^2 given by its ideal endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicH2 {
    pub p: CirclePoint,
    pub q: CirclePoint,
}

/// True if x lies strictly inside the positive arc from p to q.
fn in_open_arc(x: &CirclePoint, p: &CirclePoint, q: &CirclePoint) -> bool {
    let s = angle_step(p, x);
    s > 0.0 && s < angle_step(p, q)
}

impl GeodesicH2 {
    pub fn new(p: CirclePoint, q: CirclePoint) -> Result<Self> {
        if p.approx_eq(&q, ENDPOINT_TOL) {
            return Err(Error::InvalidSamples("geodesic endpoints coincide".into()));
        }
        Ok(GeodesicH2 { p, q })
    }

    pub fn from_reals(p: f64, q: f64) -> Result<Self> {
        Self::new(CirclePoint::from_real(p), CirclePoint::from_real(q))
    }

    /// Unit normal, positive on the right of p -> q.
    pub fn normal(&self) -> V3 {
        h2::line_normal(&self.p, &self.q)
    }

    pub fn reversed(&self) -> GeodesicH2 {
        GeodesicH2 { p: self.q, q: self.p }
    }

    pub fn has_endpoint(&self, x: &CirclePoint) -> bool {
        self.p.approx_eq(x, ENDPOINT_TOL) || self.q.approx_eq(x, ENDPOINT_TOL)
    }

    pub fn same_as(&self, other: &GeodesicH2, tol: f64) -> bool {
        (self.p.approx_eq(&other.p, tol) && self.q.approx_eq(&other.q, tol))
            || (self.p.approx_eq(&other.q, tol) && self.q.approx_eq(&other.p, tol))
    }

    pub fn relation(&self, other: &GeodesicH2) -> Relation {
        let sp = self.has_endpoint(&other.p);
        let sq = self.has_endpoint(&other.q);
        if sp && sq {
            return Relation::Equal;
        }
        if sp || sq {
            return Relation::Asymptotic;
        }
        if in_open_arc(&other.p, &self.p, &self.q) != in_open_arc(&other.q, &self.p, &self.q) {
            Relation::Crossing
        } else {
            Relation::Ultraparallel
        }
    }

    /// Distance between the geodesics; zero unless ultraparallel.
    pub fn distance(&self, other: &GeodesicH2) -> f64 {
        match self.relation(other) {
            Relation::Ultraparallel => h2::inner(&self.normal(), &other.normal()).abs().max(1.0).acosh(),
            _ => 0.0,
        }
    }

    /// Distance from a point of H^2 (hyperboloid model).
    pub fn distance_to_point(&self, x: &V3) -> f64 {
        h2::dist_to_line(x, &self.normal())
    }

    /// Translation of length t along this geodesic, toward q.
    pub fn translation(&self, t: f64) -> MobiusReal {
        MobiusReal::translation(&self.p, &self.q, t).expect("distinct endpoints")
    }

    pub fn map(&self, g: &MobiusReal) -> GeodesicH2 {
        GeodesicH2 { p: g.apply(&self.p), q: g.apply(&self.q) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Leaf {
    pub geodesic: GeodesicH2,
    pub weight: f64,
}

/// Finitely many pairwise non-crossing geodesics with positive weights.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FiniteLamination {
    leaves: Vec<Leaf>,
}

impl FiniteLamination {
    pub fn new(leaves: Vec<Leaf>) -> Result<Self> {
        for (i, l) in leaves.iter().enumerate() {
            if !(l.weight > 0.0) || !l.weight.is_finite() {
                return Err(Error::InvalidSamples(format!("leaf {i} has non-positive weight")));
            }
            for m in &leaves[..i] {
                match l.geodesic.relation(&m.geodesic) {
                    Relation::Crossing => return Err(Error::CrossingInput),
                    Relation::Equal => {
                        return Err(Error::InvalidSamples(format!("leaf {i} is repeated")))
                    }
                    _ => {}
                }
            }
        }
        Ok(FiniteLamination { leaves })
    }

    pub fn empty() -> Self {
        FiniteLamination { leaves: Vec::new() }
    }

    pub fn leaves(&self) -> &[Leaf] {
        &self.leaves
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn scaled(&self, s: f64) -> FiniteLamination {
        FiniteLamination {
            leaves: self.leaves.iter().map(|l| Leaf { geodesic: l.geodesic, weight: l.weight * s }).collect(),
        }
    }

    pub fn map(&self, g: &MobiusReal) -> FiniteLamination {
        FiniteLamination {
            leaves: self.leaves.iter().map(|l| Leaf { geodesic: l.geodesic.map(g), weight: l.weight }).collect(),
        }
    }

    pub fn geodesics(&self) -> Vec<GeodesicH2> {
        self.leaves.iter().map(|l| l.geodesic).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Handedness {
    Left,
    Right,
}

impl Handedness {
    pub fn name(&self) -> &'static str {
        match self {
            Handedness::Left => "left",
            Handedness::Right => "right",
        }
    }

    pub fn opposite(&self) -> Handedness {
        match self {
            Handedness::Left => Handedness::Right,
            Handedness::Right => Handedness::Left,
        }
    }
}

/// Earthquake along a finite lamination, normalized to be the identity on
/// the stratum containing `base`.
///
/// Sign convention: for the leaf (0, inf) with base in {Re z < 0}, the left
/// earthquake of weight t is z -> e^t z on {Re z > 0}.
#[derive(Debug, Clone, PartialEq)]
pub struct EarthquakeSpec {
    lamination: FiniteLamination,
    handedness: Handedness,
    base: Complex64,
    // leaves oriented with the base on their left, with unit normals
    oriented: Vec<(GeodesicH2, V3, f64)>,
}

impl EarthquakeSpec {
    pub fn new(lamination: FiniteLamination, handedness: Handedness, base: Complex64) -> Result<Self> {
        if !(base.im > 0.0) {
            return Err(Error::InvalidSamples("base point must lie in the upper half-plane".into()));
        }
        let x0 = h2::from_uhp(base);
        let mut oriented = Vec::with_capacity(lamination.len());
        for l in lamination.leaves() {
            let n = l.geodesic.normal();
            let s = h2::inner(&x0, &n);
            if s.abs() < 1e-12 {
                return Err(Error::OnWeightedLeaf);
            }
            if s > 0.0 {
                let g = l.geodesic.reversed();
                oriented.push((g, -n, l.weight));
            } else {
                oriented.push((l.geodesic, n, l.weight));
            }
        }
        Ok(EarthquakeSpec { lamination, handedness, base, oriented })
    }

    /// Uses the first point of a fixed list that lies off every leaf.
    pub fn with_default_base(lamination: FiniteLamination, handedness: Handedness) -> Result<Self> {
        let candidates = [
            Complex64::new(0.0, 1.0),
            Complex64::new(0.37, 1.61),
            Complex64::new(-0.53, 0.71),
            Complex64::new(1.9, 0.29),
        ];
        for c in candidates {
            match Self::new(lamination.clone(), handedness, c) {
                Err(Error::OnWeightedLeaf) => continue,
                r => return r,
            }
        }
        Err(Error::OnWeightedLeaf)
    }

    pub fn lamination(&self) -> &FiniteLamination {
        &self.lamination
    }

    pub fn handedness(&self) -> Handedness {
        self.handedness
    }

    pub fn base(&self) -> Complex64 {
        self.base
    }

    fn leaf_translation(&self, k: usize) -> MobiusReal {
        let (g, _, w) = &self.oriented[k];
        match self.handedness {
            Handedness::Left => g.translation(*w),
            Handedness::Right => g.translation(-*w),
        }
    }

    /// Product of translations over the given separating leaves, nearest
    /// to the base first.
    fn compose_separating(&self, mut sep: Vec<usize>) -> MobiusReal {
        let x0 = h2::from_uhp(self.base);
        sep.sort_by(|&a, &b| {
            let da = h2::inner(&x0, &self.oriented[a].1).abs();
            let db = h2::inner(&x0, &self.oriented[b].1).abs();
            da.partial_cmp(&db).unwrap()
        });
        sep.iter().fold(MobiusReal::identity(), |acc, &k| acc.compose(&self.leaf_translation(k)))
    }

    /// The isometry A(F) of the stratum containing the interior point z.
    pub fn stratum_isometry(&self, z: Complex64) -> Result<MobiusReal> {
        let x = h2::from_uhp(z);
        let mut sep = Vec::new();
        for (k, (_, n, _)) in self.oriented.iter().enumerate() {
            let s = h2::inner(&x, n);
            if s.abs() < 1e-12 {
                return Err(Error::OnWeightedLeaf);
            }
            if s > 0.0 {
                sep.push(k);
            }
        }
        Ok(self.compose_separating(sep))
    }

    pub fn eval_interior(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.stratum_isometry(z)?.apply_uhp(z))
    }

    /// Isometry used on the ideal point x. Leaves ending at x are skipped:
    /// their translations fix x, so both one-sided limits agree.
    pub fn boundary_isometry(&self, x: &CirclePoint) -> MobiusReal {
        let v = h2::ideal(x);
        let mut sep = Vec::new();
        for (k, (g, n, _)) in self.oriented.iter().enumerate() {
            if g.has_endpoint(x) {
                continue;
            }
            if h2::inner(&v, n) > 0.0 {
                sep.push(k);
            }
        }
        self.compose_separating(sep)
    }

    pub fn eval_boundary(&self, x: &CirclePoint) -> CirclePoint {
        self.boundary_isometry(x).apply(x)
    }

    /// The lamination carried to the target: each leaf moved by the
    /// isometry of the stratum on its near side.
    pub fn image_lamination(&self) -> FiniteLamination {
        let leaves = self
            .oriented
            .iter()
            .map(|(g, _, w)| {
                let p = self.eval_boundary(&g.p);
                let q = self.eval_boundary(&g.q);
                Leaf { geodesic: GeodesicH2 { p, q }, weight: *w }
            })
            .collect();
        FiniteLamination { leaves }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(v: &[(f64, f64, f64)]) -> FiniteLamination {
        FiniteLamination::new(
            v.iter().map(|&(p, q, w)| Leaf { geodesic: GeodesicH2::from_reals(p, q).unwrap(), weight: w }).collect(),
        )
        .unwrap()
    }

    #[test]
    fn anchor_convention() {
        let t = 0.8;
        let e = EarthquakeSpec::new(lam(&[(0.0, f64::INFINITY, t)]), Handedness::Left, Complex64::new(-1.0, 1.0))
            .unwrap();
        for x in [-3.0, -0.2] {
            assert!((e.eval_boundary(&CirclePoint::from_real(x)).to_f64() - x).abs() < 1e-14);
        }
        for x in [0.1, 2.0, 7.5] {
            assert!((e.eval_boundary(&CirclePoint::from_real(x)).to_f64() - t.exp() * x).abs() < 1e-12);
        }
        assert!(e.eval_boundary(&CirclePoint::zero()).approx_eq(&CirclePoint::zero(), 1e-15));
        assert!(e.eval_interior(Complex64::new(0.0, 2.0)).is_err());
    }

    #[test]
    fn right_is_opposite() {
        let e = EarthquakeSpec::new(lam(&[(0.0, f64::INFINITY, 0.5)]), Handedness::Right, Complex64::new(-1.0, 1.0))
            .unwrap();
        let y = e.eval_boundary(&CirclePoint::from_real(2.0)).to_f64();
        assert!((y - 2.0 * (-0.5f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn empty_is_identity() {
        let e = EarthquakeSpec::with_default_base(FiniteLamination::empty(), Handedness::Left).unwrap();
        let x = CirclePoint::from_real(0.77);
        assert!(e.eval_boundary(&x).approx_eq(&x, 1e-15));
    }

    #[test]
    fn crossing_rejected() {
        let r = FiniteLamination::new(vec![
            Leaf { geodesic: GeodesicH2::from_reals(0.0, 2.0).unwrap(), weight: 1.0 },
            Leaf { geodesic: GeodesicH2::from_reals(1.0, 3.0).unwrap(), weight: 1.0 },
        ]);
        assert_eq!(r, Err(Error::CrossingInput));
    }

    #[test]
    fn relations() {
        let a = GeodesicH2::from_reals(0.0, 1.0).unwrap();
        assert_eq!(a.relation(&GeodesicH2::from_reals(1.0, 2.0).unwrap()), Relation::Asymptotic);
        assert_eq!(a.relation(&GeodesicH2::from_reals(2.0, 3.0).unwrap()), Relation::Ultraparallel);
        assert_eq!(a.relation(&GeodesicH2::from_reals(0.5, 3.0).unwrap()), Relation::Crossing);
        assert_eq!(a.relation(&GeodesicH2::from_reals(1.0, 0.0).unwrap()), Relation::Equal);
        assert_eq!(a.relation(&GeodesicH2::from_reals(0.2, 0.4).unwrap()), Relation::Ultraparallel);
    }

    #[test]
    fn ultraparallel_distance_matches_formula() {
        // (-1, 1) and (-R, R) are concentric semicircles at distance ln R
        let a = GeodesicH2::from_reals(-1.0, 1.0).unwrap();
        let b = GeodesicH2::from_reals(-3.0, 3.0).unwrap();
        assert!((a.distance(&b) - 3f64.ln()).abs() < 1e-13);
    }
}
