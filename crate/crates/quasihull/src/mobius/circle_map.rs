use super::{angle_step, mobius_from_triples, CirclePoint, MobiusReal};
use crate::earthquake::EarthquakeSpec;
use crate::error::{Error, Result};
use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interp {
    /// Linear in the angle coordinate between consecutive samples.
    PlAngle,
    /// On the arc [x_i, x_{i+1}], the Möbius map through the three
    /// consecutive samples i-1, i, i+1. Exact for Möbius maps.
    PwMoebius,
}

impl Interp {
    pub fn name(&self) -> &'static str {
        match self {
            Interp::PlAngle => "pl-angle",
            Interp::PwMoebius => "pw-moebius",
        }
    }
}

/// One factor of a composite exact form.
#[derive(Debug, Clone)]
pub enum Link {
    Map(CircleMap),
    Inverse(CircleMap),
    Mobius(MobiusReal),
}

/// Closed-form description used instead of interpolation when present.
#[derive(Debug, Clone)]
pub enum ExactForm {
    Mobius(MobiusReal),
    Earthquake(EarthquakeSpec),
    /// Links applied first to last.
    Chain(Vec<Link>),
}

/// Orientation-preserving circle homeomorphism given by cyclically
/// increasing samples (x_i, y_i).
#[derive(Debug, Clone)]
pub struct CircleMap {
    xs: Vec<CirclePoint>,
    ys: Vec<CirclePoint>,
    interp: Interp,
    exact: Option<ExactForm>,
    x_off: Vec<f64>,
    y_off: Vec<f64>,
    arcs: Vec<MobiusReal>,
}

/// Cumulative angle offsets from the first point, ending at 2pi.
fn offsets(pts: &[CirclePoint], what: &str) -> Result<Vec<f64>> {
    let n = pts.len();
    let mut off = Vec::with_capacity(n + 1);
    off.push(0.0);
    let mut acc = 0.0;
    for i in 0..n {
        let step = angle_step(&pts[i], &pts[(i + 1) % n]);
        if !(step > 1e-14) {
            return Err(Error::NonMonotone(format!("{what}: repeated point at index {i}")));
        }
        acc += step;
        off.push(acc);
    }
    if (acc - TAU).abs() > 1e-9 {
        return Err(Error::NonMonotone(format!(
            "{what}: samples wind {:.3} times around the circle",
            acc / TAU
        )));
    }
    off[n] = TAU;
    Ok(off)
}

/// Index i with off[i] <= t < off[i+1].
fn locate(off: &[f64], t: f64) -> usize {
    let n = off.len() - 1;
    match off.binary_search_by(|v| v.partial_cmp(&t).unwrap()) {
        Ok(i) => i.min(n - 1),
        Err(i) => (i.max(1) - 1).min(n - 1),
    }
}

impl CircleMap {
    pub fn from_samples(xs: Vec<CirclePoint>, ys: Vec<CirclePoint>, interp: Interp) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidSamples("x and y lists differ in length".into()));
        }
        if xs.len() < 3 {
            return Err(Error::InvalidSamples("at least 3 samples are required".into()));
        }
        let x_off = offsets(&xs, "sources")?;
        let y_off = offsets(&ys, "images")?;
        let n = xs.len();
        let mut arcs = Vec::new();
        if interp == Interp::PwMoebius {
            for i in 0..n {
                let h = (i + n - 1) % n;
                let j = (i + 1) % n;
                arcs.push(mobius_from_triples(&[xs[h], xs[i], xs[j]], &[ys[h], ys[i], ys[j]])?);
            }
        }
        Ok(CircleMap { xs, ys, interp, exact: None, x_off, y_off, arcs })
    }

    /// Samples from a closed form; images are recomputed from the form.
    pub fn from_exact(xs: Vec<CirclePoint>, exact: ExactForm) -> Result<Self> {
        let tmp = CircleMap {
            xs: xs.clone(),
            ys: Vec::new(),
            interp: Interp::PlAngle,
            exact: Some(exact),
            x_off: Vec::new(),
            y_off: Vec::new(),
            arcs: Vec::new(),
        };
        let ys: Vec<_> = xs.iter().map(|x| tmp.eval_exact(x).unwrap()).collect();
        let interp = match tmp.exact {
            Some(ExactForm::Earthquake(_)) | Some(ExactForm::Mobius(_)) => Interp::PwMoebius,
            _ => Interp::PlAngle,
        };
        let mut m = Self::from_samples(xs, ys, interp)?;
        m.exact = tmp.exact;
        Ok(m)
    }

    pub fn from_mobius(g: MobiusReal, xs: Vec<CirclePoint>) -> Result<Self> {
        Self::from_exact(xs, ExactForm::Mobius(g))
    }

    pub fn identity(xs: Vec<CirclePoint>) -> Result<Self> {
        Self::from_mobius(MobiusReal::identity(), xs)
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn xs(&self) -> &[CirclePoint] {
        &self.xs
    }

    pub fn ys(&self) -> &[CirclePoint] {
        &self.ys
    }

    pub fn interp(&self) -> Interp {
        self.interp
    }

    pub fn exact(&self) -> Option<&ExactForm> {
        self.exact.as_ref()
    }

    fn eval_exact(&self, x: &CirclePoint) -> Option<CirclePoint> {
        match self.exact.as_ref()? {
            ExactForm::Mobius(g) => Some(g.apply(x)),
            ExactForm::Earthquake(spec) => Some(spec.eval_boundary(x)),
            ExactForm::Chain(links) => {
                let mut p = *x;
                for l in links {
                    p = match l {
                        Link::Map(m) => m.eval(&p),
                        Link::Inverse(m) => m.eval_inverse(&p),
                        Link::Mobius(g) => g.apply(&p),
                    };
                }
                Some(p)
            }
        }
    }

    fn interpolate(xs: &[CirclePoint], x_off: &[f64], y_off: &[f64], ys: &[CirclePoint], x: &CirclePoint) -> (usize, f64) {
        let t = (x.angle() - xs[0].angle()).rem_euclid(TAU);
        let i = locate(x_off, t);
        let (a, b) = (x_off[i], x_off[i + 1]);
        let s = ((t - a) / (b - a)).clamp(0.0, 1.0);
        let phi = ys[0].angle() + y_off[i] + s * (y_off[i + 1] - y_off[i]);
        (i, phi)
    }

    pub fn eval(&self, x: &CirclePoint) -> CirclePoint {
        if let Some(y) = self.eval_exact(x) {
            return y;
        }
        let (i, phi) = Self::interpolate(&self.xs, &self.x_off, &self.y_off, &self.ys, x);
        match self.interp {
            Interp::PlAngle => CirclePoint::from_angle(phi),
            Interp::PwMoebius => self.arcs[i].apply(x),
        }
    }

    pub fn eval_inverse(&self, y: &CirclePoint) -> CirclePoint {
        match &self.exact {
            None => {
                let (i, phi) = Self::interpolate(&self.ys, &self.y_off, &self.x_off, &self.xs, y);
                match self.interp {
                    Interp::PlAngle => CirclePoint::from_angle(phi),
                    Interp::PwMoebius => self.arcs[i].inverse().apply(y),
                }
            }
            Some(ExactForm::Mobius(g)) => g.inverse().apply(y),
            Some(_) => self.bisect_inverse(y),
        }
    }

    /// Inverse of a monotone exact form, bracketed by the samples.
    fn bisect_inverse(&self, y: &CirclePoint) -> CirclePoint {
        let s = (y.angle() - self.ys[0].angle()).rem_euclid(TAU);
        let j = locate(&self.y_off, s);
        let y_lo = self.ys[0].angle() + self.y_off[j];
        let span = self.y_off[j + 1] - self.y_off[j];
        let target = s - self.y_off[j];
        let x0 = self.xs[0].angle();
        let (mut lo, mut hi) = (x0 + self.x_off[j], x0 + self.x_off[j + 1]);
        let g = |theta: f64| {
            let v = self.eval_exact(&CirclePoint::from_angle(theta)).unwrap();
            let mut d = (v.angle() - y_lo).rem_euclid(TAU);
            if d > 0.5 * (span + TAU) {
                d -= TAU;
            }
            d
        };
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if g(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        CirclePoint::from_angle(0.5 * (lo + hi))
    }

    fn inverse_exact(e: &ExactForm, original: &CircleMap) -> ExactForm {
        match e {
            ExactForm::Mobius(g) => ExactForm::Mobius(g.inverse()),
            ExactForm::Earthquake(_) => ExactForm::Chain(vec![Link::Inverse(original.clone())]),
            ExactForm::Chain(links) => ExactForm::Chain(
                links
                    .iter()
                    .rev()
                    .map(|l| match l {
                        Link::Map(m) => Link::Inverse(m.clone()),
                        Link::Inverse(m) => Link::Map(m.clone()),
                        Link::Mobius(g) => Link::Mobius(g.inverse()),
                    })
                    .collect(),
            ),
        }
    }

    pub fn inverse(&self) -> CircleMap {
        let mut m = CircleMap::from_samples(self.ys.clone(), self.xs.clone(), self.interp)
            .expect("swapping samples keeps monotonicity");
        m.exact = self.exact.as_ref().map(|e| Self::inverse_exact(e, self));
        m
    }

    /// Post-composition by the Möbius map B with B(h(0)) = 0, B(h(1)) = 1,
    /// B(h(inf)) = inf.
    pub fn normalize(&self) -> CircleMap {
        let std3 = [CirclePoint::zero(), CirclePoint::one(), CirclePoint::infinity()];
        let img = [self.eval(&std3[0]), self.eval(&std3[1]), self.eval(&std3[2])];
        let b = mobius_from_triples(&img, &std3).expect("images of a homeomorphism are distinct and ordered");
        self.post_compose(&b)
    }

    /// g ∘ self, keeping the source grid.
    pub fn post_compose(&self, g: &MobiusReal) -> CircleMap {
        let ys = self.ys.iter().map(|y| g.apply(y)).collect();
        let mut m = CircleMap::from_samples(self.xs.clone(), ys, self.interp).expect("Möbius maps preserve order");
        m.exact = Some(match &self.exact {
            Some(ExactForm::Mobius(h)) => ExactForm::Mobius(g.compose(h)),
            _ => ExactForm::Chain(vec![Link::Map(self.clone()), Link::Mobius(*g)]),
        });
        m
    }

    /// f ∘ self on self's grid.
    pub fn then(&self, f: &CircleMap) -> Result<CircleMap> {
        let ys = self.ys.iter().map(|y| f.eval(y)).collect();
        let mut m = CircleMap::from_samples(self.xs.clone(), ys, Interp::PlAngle)?;
        m.exact = Some(ExactForm::Chain(vec![Link::Map(self.clone()), Link::Map(f.clone())]));
        Ok(m)
    }

    /// Largest angular distance between the images of the samples of self
    /// under self and under other.
    pub fn sup_distance(&self, other: &CircleMap) -> f64 {
        self.xs
            .iter()
            .zip(self.ys.iter())
            .map(|(x, y)| y.angular_distance(&other.eval(x)))
            .fold(0.0, f64::max)
    }

    /// Largest angular displacement of the samples, i.e. distance to identity.
    pub fn sup_displacement(&self) -> f64 {
        self.xs.iter().zip(self.ys.iter()).map(|(x, y)| x.angular_distance(y)).fold(0.0, f64::max)
    }
}

/// comp(f1, f2) = f1^{-1} ∘ f2, sampled on the source grid of f2.
pub fn comparison_compose(f1: &CircleMap, f2: &CircleMap) -> Result<CircleMap> {
    let ys = f2.ys().iter().map(|y| f1.eval_inverse(y)).collect();
    let mut m = CircleMap::from_samples(f2.xs().to_vec(), ys, Interp::PlAngle)?;
    m.exact = Some(ExactForm::Chain(vec![Link::Map(f2.clone()), Link::Inverse(f1.clone())]));
    Ok(m)
}
