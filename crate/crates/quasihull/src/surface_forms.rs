//! Pointwise algebra of fundamental forms: a jet (I, B) at one point of a
//! surface in H^3, AdS^3 or de Sitter space, with Gauss equations, polar
//! duality, projection pullbacks and the horospherical metric.

use crate::error::{Error, Result};
use nalgebra::Matrix2;

pub type M2 = Matrix2<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ambient {
    Hyp,
    Ads,
    /// Spacelike surfaces in de Sitter space; the polar duals of convex
    /// surfaces in H^3 live here.
    DeSitter,
}

impl Ambient {
    pub fn name(&self) -> &'static str {
        match self {
            Ambient::Hyp => "hyp",
            Ambient::Ads => "ads",
            Ambient::DeSitter => "ds",
        }
    }

    pub fn parse(s: &str) -> Option<Ambient> {
        match s {
            "hyp" => Some(Ambient::Hyp),
            "ads" => Some(Ambient::Ads),
            "ds" => Some(Ambient::DeSitter),
            _ => None,
        }
    }
}

/// First fundamental form I (positive definite) and shape operator B
/// (self-adjoint for I) at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceJet {
    i: M2,
    b: M2,
    ambient: Ambient,
}

impl SurfaceJet {
    pub fn new(i: M2, b: M2, ambient: Ambient) -> Result<Self> {
        let scale = i.abs().max().max(1.0);
        if (i[(0, 1)] - i[(1, 0)]).abs() > 1e-12 * scale {
            return Err(Error::InvalidJet("I is not symmetric".into()));
        }
        if !(i[(0, 0)] > 0.0 && i.determinant() > 0.0) {
            return Err(Error::InvalidJet("I is not positive definite".into()));
        }
        let ib = i * b;
        let bscale = ib.abs().max().max(1.0);
        if (ib[(0, 1)] - ib[(1, 0)]).abs() > 1e-9 * bscale {
            return Err(Error::InvalidJet("B is not self-adjoint for I".into()));
        }
        if !(i.iter().chain(b.iter()).all(|v| v.is_finite())) {
            return Err(Error::InvalidJet("non-finite entry".into()));
        }
        Ok(SurfaceJet { i, b, ambient })
    }

    pub fn first_form(&self) -> M2 {
        self.i
    }

    pub fn shape(&self) -> M2 {
        self.b
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    /// Rotation by +pi/2 for I in the coordinate orientation:
    /// J = (det I)^{-1/2} [[-I12, -I22], [I11, I12]]. This equals
    /// L^{-T} R L^T for the Cholesky factor I = L L^T and the standard
    /// rotation R.
    pub fn j(&self) -> M2 {
        let i = &self.i;
        let s = 1.0 / i.determinant().sqrt();
        M2::new(-i[(0, 1)], -i[(1, 1)], i[(0, 0)], i[(0, 1)]) * s
    }

    /// Principal curvatures mu1 >= mu2.
    pub fn principal_curvatures(&self) -> (f64, f64) {
        let t = self.b.trace();
        let d = self.b.determinant();
        let disc = (0.25 * t * t - d).max(0.0).sqrt();
        (0.5 * t + disc, 0.5 * t - disc)
    }

    pub fn mean_curvature(&self) -> f64 {
        self.b.trace()
    }

    /// Adjoint of A with respect to I: I^{-1} A^T I.
    pub fn adjoint(&self, a: &M2) -> M2 {
        self.i.try_inverse().expect("I is definite") * a.transpose() * self.i
    }
}

/// (II, III) as Gram matrices: II = I B, III = B^T I B.
pub fn forms_from_jet(j: &SurfaceJet) -> (M2, M2) {
    let ii = j.i * j.b;
    let iii = j.b.transpose() * j.i * j.b;
    (0.5 * (ii + ii.transpose()), 0.5 * (iii + iii.transpose()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curvature {
    pub k: f64,
    /// Extrinsic curvature det B.
    pub k_ext: f64,
}

/// Gauss equation: K = det B - 1 (hyp), -1 - det B (ads), 1 - det B (ds).
pub fn gauss_curvature(j: &SurfaceJet) -> Curvature {
    let d = j.b.determinant();
    let k = match j.ambient {
        Ambient::Hyp => d - 1.0,
        Ambient::Ads => -1.0 - d,
        Ambient::DeSitter => 1.0 - d,
    };
    Curvature { k, k_ext: d }
}

/// Curvature of the third fundamental form, from K alone:
/// K/(K+1) (hyp), -K/(K+1) (ads), K/(1-K) (ds).
pub fn third_form_curvature(j: &SurfaceJet) -> Result<f64> {
    if j.b.determinant() == 0.0 {
        return Err(Error::DegenerateShape);
    }
    let k = gauss_curvature(j).k;
    Ok(match j.ambient {
        Ambient::Hyp => k / (k + 1.0),
        Ambient::Ads => -k / (k + 1.0),
        Ambient::DeSitter => k / (1.0 - k),
    })
}

/// Polar dual: I* = III, B* = B^{-1}. Hyperbolic and de Sitter jets are
/// exchanged; AdS jets stay in AdS.
pub fn dual_jet(j: &SurfaceJet) -> Result<SurfaceJet> {
    let binv = j.b.try_inverse().ok_or(Error::DegenerateShape)?;
    if !binv.iter().all(|v| v.is_finite()) {
        return Err(Error::DegenerateShape);
    }
    let (_, iii) = forms_from_jet(j);
    let ambient = match j.ambient {
        Ambient::Hyp => Ambient::DeSitter,
        Ambient::DeSitter => Ambient::Hyp,
        Ambient::Ads => Ambient::Ads,
    };
    SurfaceJet::new(iii, binv, ambient).map_err(|_| Error::DegenerateShape)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pullbacks {
    pub g_l: M2,
    pub g_r: M2,
    /// det(E + J B), with 1 + det B and -K to compare against.
    pub det_plus: f64,
    pub one_plus_det_b: f64,
    pub minus_k: f64,
    /// tr of (E+JB)^* (E+JB) for the I-adjoint, with 2 + tr B^2.
    pub trace_plus: f64,
    pub two_plus_tr_b2: f64,
}

/// g_l = I((E + J B)., (E + J B).) and g_r with E - J B.
pub fn projection_pullback_metrics(j: &SurfaceJet) -> Result<Pullbacks> {
    let e = M2::identity();
    let jb = j.j() * j.b;
    let (ap, am) = (e + jb, e - jb);
    let tol = 1e-14;
    if ap.determinant().abs() <= tol || am.determinant().abs() <= tol {
        return Err(Error::SingularProjection);
    }
    let sym = |m: M2| 0.5 * (m + m.transpose());
    let g_l = sym(ap.transpose() * j.i * ap);
    let g_r = sym(am.transpose() * j.i * am);
    let db = j.b.determinant();
    Ok(Pullbacks {
        g_l,
        g_r,
        det_plus: ap.determinant(),
        one_plus_det_b: 1.0 + db,
        minus_k: -gauss_curvature(&SurfaceJet { ambient: Ambient::Ads, ..*j }).k,
        trace_plus: (j.adjoint(&ap) * ap).trace(),
        two_plus_tr_b2: 2.0 + (j.b * j.b).trace(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Horospherical {
    pub i_star: M2,
    pub k_star: f64,
}

/// I* = I + 2 II + III and K* = K / ((1 + mu1)(1 + mu2)).
pub fn horospherical_identity(j: &SurfaceJet) -> Result<Horospherical> {
    let (mu1, mu2) = j.principal_curvatures();
    if (1.0 + mu1).abs() < 1e-14 || (1.0 + mu2).abs() < 1e-14 {
        return Err(Error::CuspidalJet);
    }
    let (ii, iii) = forms_from_jet(j);
    let hyp = SurfaceJet { ambient: Ambient::Hyp, ..*j };
    Ok(Horospherical { i_star: j.i + 2.0 * ii + iii, k_star: gauss_curvature(&hyp).k / ((1.0 + mu1) * (1.0 + mu2)) })
}
