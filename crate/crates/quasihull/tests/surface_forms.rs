use nalgebra::{SymmetricEigen, Vector2};
use proptest::prelude::*;
use quasihull::surface_forms::*;
use quasihull::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rot(t: f64) -> M2 {
    M2::new(t.cos(), -t.sin(), t.sin(), t.cos())
}

/// I = L L^T for a random lower-triangular L, and B with prescribed
/// principal curvatures: B = L^{-T} Q diag(mu) Q^T L^T, which is
/// I-self-adjoint.
fn jet_with(rng: &mut ChaCha8Rng, mu: (f64, f64), ambient: Ambient) -> SurfaceJet {
    let l = M2::new(rng.gen_range(0.5..2.0), 0.0, rng.gen_range(-1.0..1.0), rng.gen_range(0.5..2.0));
    let q = rot(rng.gen_range(0.0..std::f64::consts::TAU));
    let d = M2::new(mu.0, 0.0, 0.0, mu.1);
    let lt_inv = l.transpose().try_inverse().unwrap();
    SurfaceJet::new(l * l.transpose(), lt_inv * q * d * q.transpose() * l.transpose(), ambient).unwrap()
}

fn random_jet(rng: &mut ChaCha8Rng, ambient: Ambient) -> SurfaceJet {
    let mu = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
    jet_with(rng, mu, ambient)
}

/// Bilinear form (v, w) -> v^T G w.
fn form(g: &M2, v: &Vector2<f64>, w: &Vector2<f64>) -> f64 {
    (v.transpose() * g * w)[(0, 0)]
}

fn basis() -> [Vector2<f64>; 2] {
    [Vector2::new(1.0, 0.0), Vector2::new(0.0, 1.0)]
}

fn close(a: &M2, b: &M2, tol: f64) -> bool {
    (a - b).abs().max() <= tol * b.abs().max().max(1.0)
}

/// Rotation by +pi/2 for I built from a Cholesky factor: L^{-T} R L^T.
fn j_oracle(i: &M2) -> M2 {
    let l = i.cholesky().unwrap().l();
    let r = M2::new(0.0, -1.0, 1.0, 0.0);
    l.transpose().try_inverse().unwrap() * r * l.transpose()
}

fn eigenvalues_rel(i: &M2, g: &M2) -> (f64, f64) {
    // eigenvalues of I^{-1} g via the symmetric pencil L^{-1} g L^{-T}
    let l = i.cholesky().unwrap().l();
    let li = l.try_inverse().unwrap();
    let e = SymmetricEigen::new(li * g * li.transpose()).eigenvalues;
    (e[0].min(e[1]), e[0].max(e[1]))
}

#[test]
fn forms_of_zero_and_identity_shape() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let j = jet_with(&mut rng, (0.0, 0.0), Ambient::Hyp);
    let (ii, iii) = forms_from_jet(&j);
    assert_eq!(ii, M2::zeros());
    assert_eq!(iii, M2::zeros());
    let j = SurfaceJet::new(j.first_form(), M2::identity(), Ambient::Hyp).unwrap();
    let (ii, iii) = forms_from_jet(&j);
    assert_eq!(ii, j.first_form());
    assert_eq!(iii, j.first_form());
}

#[test]
fn forms_match_bilinear_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let j = random_jet(&mut rng, Ambient::Hyp);
        let (ii, iii) = forms_from_jet(&j);
        let (i, b) = (j.first_form(), j.shape());
        for v in basis() {
            for w in basis() {
                assert!((form(&ii, &v, &w) - form(&i, &(b * v), &w)).abs() < 1e-12);
                assert!((form(&iii, &v, &w) - form(&i, &(b * v), &(b * w))).abs() < 1e-12);
            }
        }
        assert_eq!(ii, ii.transpose());
        assert_eq!(iii, iii.transpose());
        // III is positive semidefinite
        assert!(iii[(0, 0)] >= 0.0 && iii.determinant() >= -1e-12 * iii.abs().max().powi(2));
    }
}

#[test]
fn gauss_equation_examples() {
    let rng = ChaCha8Rng::seed_from_u64(3);
    let c = |mu, a| gauss_curvature(&jet_with(&mut rng.clone(), mu, a));
    assert!((c((1.0, 1.0), Ambient::Hyp).k_ext - 1.0).abs() < 1e-14);
    assert!(c((1.0, 1.0), Ambient::Hyp).k.abs() < 1e-14);
    assert_eq!(c((0.0, 0.0), Ambient::Hyp).k, -1.0);
    assert_eq!(c((0.0, 0.0), Ambient::Ads).k, -1.0);
}

#[test]
fn third_form_curvature_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    // III = lam^2 I for an umbilic jet, so its curvature is K / lam^2
    for lam in [0.2f64, 0.5, 2.0, 7.0] {
        let j = jet_with(&mut rng, (lam, lam), Ambient::Hyp);
        let k = third_form_curvature(&j).unwrap();
        assert!((k - (lam * lam - 1.0) / (lam * lam)).abs() < 1e-12, "{k}");
    }
    // K -> -1 from above: K* -> -inf, monotonically
    let mut prev = f64::INFINITY;
    for e in 1..12 {
        let lam = 0.5f64.powi(e);
        let k = third_form_curvature(&jet_with(&mut rng, (lam, 1.0), Ambient::Hyp)).unwrap();
        assert!(k < prev);
        prev = k;
    }
    assert!(prev < -1000.0);
    // ads, det B = 1: K = -2 and K* = -2
    let j = jet_with(&mut rng, (2.0, 0.5), Ambient::Ads);
    assert!((gauss_curvature(&j).k + 2.0).abs() < 1e-12);
    assert!((third_form_curvature(&j).unwrap() + 2.0).abs() < 1e-12);
}

#[test]
fn dual_of_umbilic_unit_jet_is_itself() {
    let j = SurfaceJet::new(M2::new(2.0, 0.5, 0.5, 1.0), M2::identity(), Ambient::Ads).unwrap();
    let d = dual_jet(&j).unwrap();
    assert!(close(&d.first_form(), &j.first_form(), 1e-15));
    assert!(close(&d.shape(), &j.shape(), 1e-15));
    assert_eq!(d.ambient(), Ambient::Ads);
    // hyperbolic jets dualize into de Sitter space and back
    let h = SurfaceJet::new(j.first_form(), M2::identity(), Ambient::Hyp).unwrap();
    assert_eq!(dual_jet(&h).unwrap().ambient(), Ambient::DeSitter);
}

#[test]
fn dual_curvature_is_third_form_curvature() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for ambient in [Ambient::Hyp, Ambient::Ads] {
        for _ in 0..200 {
            let j = random_jet(&mut rng, ambient);
            if j.shape().determinant().abs() < 1e-3 {
                continue;
            }
            let d = dual_jet(&j).unwrap();
            let k = third_form_curvature(&j).unwrap();
            assert!((gauss_curvature(&d).k - k).abs() <= 1e-10 * k.abs().max(1.0));
        }
    }
    // ads K = -2 stays -2 under duality
    let j = jet_with(&mut rng, (4.0, 0.25), Ambient::Ads);
    assert!((gauss_curvature(&dual_jet(&j).unwrap()).k + 2.0).abs() < 1e-12);
}

#[test]
fn pullbacks_of_a_flat_jet_equal_the_metric() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let j = jet_with(&mut rng, (0.0, 0.0), Ambient::Ads);
    let p = projection_pullback_metrics(&j).unwrap();
    assert!(close(&p.g_l, &j.first_form(), 1e-15));
    assert!(close(&p.g_r, &j.first_form(), 1e-15));
}

#[test]
fn pullback_singular_at_det_minus_one() {
    // det(E + J B) = 1 + det B vanishes for det B = -1
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let j = jet_with(&mut rng, (2.0, -0.5), Ambient::Ads);
    assert_eq!(projection_pullback_metrics(&j), Err(Error::SingularProjection));
}

#[test]
fn pullback_eigenvalues_stay_in_the_derived_interval() {
    // In an I-orthonormal principal frame (E + JB)^*(E + JB) is
    // [[1 + mu1^2, mu1 - mu2], [mu1 - mu2, 1 + mu2^2]], with determinant
    // (1 + mu1 mu2)^2 and trace 2 + mu1^2 + mu2^2. For mu in [1/D, D] its
    // eigenvalues lie in [(1 + D^-2)^2 / (2 + 2 D^2), 2 + 2 D^2].
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for d in [1.5f64, 3.0, 10.0] {
        let (lo, hi) = ((1.0 + 1.0 / (d * d)).powi(2) / (2.0 + 2.0 * d * d), 2.0 + 2.0 * d * d);
        for _ in 0..300 {
            let mu = (rng.gen_range(1.0 / d..d), rng.gen_range(1.0 / d..d));
            let j = jet_with(&mut rng, mu, Ambient::Ads);
            let p = projection_pullback_metrics(&j).unwrap();
            for g in [p.g_l, p.g_r] {
                let (a, b) = eigenvalues_rel(&j.first_form(), &g);
                assert!(a >= lo * (1.0 - 1e-12) && b <= hi * (1.0 + 1e-12), "{a} {b} not in [{lo}, {hi}]");
            }
        }
    }
}

#[test]
fn horospherical_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let j = jet_with(&mut rng, (1.0, 1.0), Ambient::Hyp);
    let h = horospherical_identity(&j).unwrap();
    assert!(close(&h.i_star, &(4.0 * j.first_form()), 1e-14));
    assert!(h.k_star.abs() < 1e-14);
    let j = jet_with(&mut rng, (0.0, 0.0), Ambient::Hyp);
    let h = horospherical_identity(&j).unwrap();
    assert!(close(&h.i_star, &j.first_form(), 1e-15));
    assert_eq!(h.k_star, -1.0);
    for lam in [0.3, 1.7, 5.0] {
        let j = jet_with(&mut rng, (lam, lam), Ambient::Hyp);
        let h = horospherical_identity(&j).unwrap();
        assert!((h.k_star - (lam - 1.0) / (lam + 1.0)).abs() < 1e-12);
    }
}

#[test]
fn cuspidal_jet_is_refused() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let j = jet_with(&mut rng, (0.5, -1.0), Ambient::Hyp);
    assert_eq!(horospherical_identity(&j), Err(Error::CuspidalJet));
}

#[test]
fn invalid_jets_are_refused() {
    let i = M2::new(1.0, 0.0, 0.0, 1.0);
    assert!(matches!(SurfaceJet::new(M2::new(1.0, 0.2, 0.3, 1.0), M2::zeros(), Ambient::Hyp), Err(Error::InvalidJet(_))));
    assert!(matches!(SurfaceJet::new(M2::new(-1.0, 0.0, 0.0, 1.0), M2::zeros(), Ambient::Hyp), Err(Error::InvalidJet(_))));
    assert!(matches!(SurfaceJet::new(i, M2::new(0.0, 1.0, 2.0, 0.0), Ambient::Ads), Err(Error::InvalidJet(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn j_is_an_oriented_isometric_quarter_turn(seed in 0u64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let j = random_jet(&mut rng, Ambient::Hyp);
        let jj = j.j();
        let i = j.first_form();
        prop_assert!(close(&(jj * jj), &(-M2::identity()), 1e-13));
        prop_assert!(close(&(jj.transpose() * i * jj), &i, 1e-13));
        prop_assert!(close(&jj, &j_oracle(&i), 1e-13));
    }

    #[test]
    fn double_dual_is_the_original(seed in 0u64..1_000_000, ads in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = if ads { Ambient::Ads } else { Ambient::Hyp };
        let mu = (rng.gen_range(0.2..3.0) * if rng.gen() { 1.0 } else { -1.0 }, rng.gen_range(0.2..3.0));
        let j = jet_with(&mut rng, mu, a);
        let dd = dual_jet(&dual_jet(&j).unwrap()).unwrap();
        prop_assert!(close(&dd.first_form(), &j.first_form(), 1e-12));
        prop_assert!(close(&dd.shape(), &j.shape(), 1e-12));
        prop_assert_eq!(dd.ambient(), a);
    }

    #[test]
    fn pullback_certificates(seed in 0u64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let j = random_jet(&mut rng, Ambient::Ads);
        prop_assume!((1.0 + j.shape().determinant()).abs() > 1e-3);
        let p = projection_pullback_metrics(&j).unwrap();
        let b = j.shape();
        prop_assert!((p.det_plus - (1.0 + b.determinant())).abs() <= 1e-12 * (1.0 + b.abs().max().powi(2)));
        prop_assert!((p.det_plus - p.minus_k).abs() <= 1e-12 * (1.0 + b.abs().max().powi(2)));
        prop_assert!((p.trace_plus - (2.0 + (b * b).trace())).abs() <= 1e-12 * (2.0 + (b * b).trace()));
        prop_assert_eq!(p.g_l, p.g_l.transpose());
        // both pullbacks are positive definite
        for g in [p.g_l, p.g_r] {
            prop_assert!(g[(0, 0)] > 0.0 && g.determinant() > 0.0);
        }
    }

    #[test]
    fn dual_conjugates_the_pullbacks(seed in 0u64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mu = (rng.gen_range(0.3..3.0), rng.gen_range(0.3..3.0));
        let j = jet_with(&mut rng, mu, Ambient::Ads);
        let d = dual_jet(&j).unwrap();
        let (_, iii) = forms_from_jet(&j);
        let binv = j.shape().try_inverse().unwrap();
        // g_l written out with I -> III and B -> B^{-1}
        let a = M2::identity() + j_oracle(&iii) * binv;
        let want = a.transpose() * iii * a;
        let got = projection_pullback_metrics(&d).unwrap().g_l;
        prop_assert!(close(&got, &want, 1e-10));
    }

    #[test]
    fn pinched_curvatures_pinch_the_third_form(seed in 0u64..1_000_000, n in 1.1f64..8.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mu = (rng.gen_range(1.0 / n..n), rng.gen_range(1.0 / n..n));
        let j = jet_with(&mut rng, mu, Ambient::Hyp);
        let (_, iii) = forms_from_jet(&j);
        let (a, b) = eigenvalues_rel(&j.first_form(), &iii);
        prop_assert!(a >= 1.0 / (n * n) * (1.0 - 1e-12) && b <= n * n * (1.0 + 1e-12));
    }

    #[test]
    fn ads_curvature_below_minus_one_iff_convex(seed in 0u64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let j = random_jet(&mut rng, Ambient::Ads);
        let k = gauss_curvature(&j).k;
        prop_assert_eq!(k <= -1.0, j.shape().determinant() >= 0.0);
        let (mu1, mu2) = j.principal_curvatures();
        prop_assert!(mu1 >= mu2);
        prop_assert!((mu1 * mu2 - j.shape().determinant()).abs() < 1e-10);
    }

    #[test]
    fn horospherical_identities(seed in 0u64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mu = (rng.gen_range(-0.9..4.0), rng.gen_range(-0.9..4.0));
        let j = jet_with(&mut rng, mu, Ambient::Hyp);
        let h = horospherical_identity(&j).unwrap();
        // I* evaluated as I((E + B)v, (E + B)w)
        let e = M2::identity() + j.shape();
        prop_assert!(close(&h.i_star, &(e.transpose() * j.first_form() * e), 1e-12));
        let k = mu.0 * mu.1 - 1.0;
        prop_assert!((h.k_star - k / ((1.0 + mu.0) * (1.0 + mu.1))).abs() <= 1e-10 * h.k_star.abs().max(1.0));
    }
}
