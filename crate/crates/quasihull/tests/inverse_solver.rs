use quasihull::earthquake::{EarthquakeSpec, FiniteLamination, GeodesicH2, Handedness, Leaf};
use quasihull::inverse_solver::{
    forward_residual, refine, solve_gluing_inverse, ForwardOracle, OracleKind, SolveOptions,
};
use quasihull::mobius::{CircleMap, CirclePoint, Interp};
use quasihull::Error;
use std::f64::consts::TAU;

fn grid(n: usize) -> Vec<CirclePoint> {
    (0..n).map(|i| CirclePoint::from_angle(TAU * i as f64 / n as f64)).collect()
}

fn marked(n: usize) -> [usize; 3] {
    [0, n / 3, 2 * n / 3]
}

fn bumped(xs: &[CirclePoint], bumps: &[(usize, f64)]) -> Vec<CirclePoint> {
    let mut ys = xs.to_vec();
    for &(i, d) in bumps {
        ys[i] = CirclePoint::from_angle(xs[i].angle() + d);
    }
    ys
}

const HEX_BUMPS: [(usize, f64); 3] = [(1, 0.25), (3, -0.2), (5, 0.15)];

#[test]
fn identity_graph_has_zero_residual_against_identity() {
    for kind in [OracleKind::Ads, OracleKind::Hyp] {
        let xs = grid(6);
        let o = ForwardOracle::new(kind, xs.clone(), marked(6)).unwrap();
        let target = CircleMap::identity(xs.clone()).unwrap();
        assert!(forward_residual(&o, &xs, &target).unwrap() < 1e-12, "{kind:?}");
    }
}

#[test]
fn self_consistent_target_has_zero_residual() {
    for kind in [OracleKind::Ads, OracleKind::Hyp] {
        let xs = grid(6);
        let o = ForwardOracle::new(kind, xs.clone(), marked(6)).unwrap();
        let ys = bumped(&xs, &HEX_BUMPS);
        let target = o.gluing(&ys).unwrap();
        assert!(target.sup_displacement() > 1e-3, "{kind:?}: gluing should be non-trivial");
        assert!(forward_residual(&o, &ys, &target).unwrap() < 1e-12, "{kind:?}");
    }
}

#[test]
fn perturbed_params_give_positive_continuous_residual() {
    let xs = grid(6);
    let o = ForwardOracle::new(OracleKind::Ads, xs.clone(), marked(6)).unwrap();
    let ys = bumped(&xs, &HEX_BUMPS);
    let target = o.gluing(&ys).unwrap();
    let mut prev = 0.0;
    for k in 1..=5 {
        let eps = 1e-3 * k as f64;
        let r = forward_residual(&o, &bumped(&ys, &[(1, eps)]), &target).unwrap();
        assert!(r > 0.0);
        assert!(r > prev);
        assert!(r < 50.0 * eps, "residual {r} not small for eps {eps}");
        prev = r;
    }
}

#[test]
fn non_monotone_params_are_infeasible() {
    let xs = grid(6);
    let o = ForwardOracle::new(OracleKind::Ads, xs.clone(), marked(6)).unwrap();
    let mut ys = xs.clone();
    ys.swap(1, 2);
    assert!(matches!(o.gluing(&ys), Err(Error::InfeasibleParams)));
}

#[test]
fn oracle_rejects_bad_grids() {
    let mut xs = grid(6);
    xs.swap(2, 3);
    assert!(ForwardOracle::new(OracleKind::Ads, xs, marked(6)).is_err());
    assert!(ForwardOracle::new(OracleKind::Ads, grid(6), [0, 0, 3]).is_err());
}

#[test]
fn hexagon_round_trip() {
    for kind in [OracleKind::Ads, OracleKind::Hyp] {
        let xs = grid(6);
        let o = ForwardOracle::new(kind, xs.clone(), marked(6)).unwrap();
        let target = o.gluing(&bumped(&xs, &HEX_BUMPS)).unwrap();
        let opts = SolveOptions { budget: 10_000, seed: 7, restarts: 8, tol: 1e-9 };
        let rep = solve_gluing_inverse(&o, &target, &opts).unwrap();
        assert!(rep.residual < 1e-3, "{kind:?}: residual {}", rep.residual);
        assert!(rep.evaluations <= opts.budget);
    }
}

#[test]
fn two_leaf_earthquake_target_at_eight_points() {
    let xs = grid(8);
    let leaf = |p: f64, q: f64, w: f64| Leaf {
        geodesic: GeodesicH2::new(CirclePoint::from_angle(p), CirclePoint::from_angle(q)).unwrap(),
        weight: w,
    };
    let lam = FiniteLamination::new(vec![leaf(0.3, 2.2, 0.3), leaf(3.5, 5.4, 0.25)]).unwrap();
    let eq = EarthquakeSpec::with_default_base(lam, Handedness::Left).unwrap();
    let ys = xs.iter().map(|x| eq.eval_boundary(x)).collect();
    let target = CircleMap::from_samples(xs.clone(), ys, Interp::PwMoebius).unwrap();
    let o = ForwardOracle::new(OracleKind::Ads, xs, marked(8)).unwrap();
    let opts = SolveOptions { budget: 10_000, seed: 1, restarts: 8, tol: 1e-9 };
    let rep = solve_gluing_inverse(&o, &target, &opts).unwrap();
    assert!(rep.residual < 1e-3, "residual {}", rep.residual);
    assert!(rep.evaluations <= opts.budget);
}

#[test]
fn same_seed_same_report() {
    let xs = grid(6);
    let o = ForwardOracle::new(OracleKind::Ads, xs.clone(), marked(6)).unwrap();
    let target = o.gluing(&bumped(&xs, &HEX_BUMPS)).unwrap();
    let opts = SolveOptions { budget: 2_000, seed: 3, restarts: 3, tol: 1e-12 };
    let a = solve_gluing_inverse(&o, &target, &opts).unwrap();
    let b = solve_gluing_inverse(&o, &target, &opts).unwrap();
    assert_eq!(a, b);
}

#[test]
fn trace_is_nonincreasing() {
    let xs = grid(6);
    let o = ForwardOracle::new(OracleKind::Hyp, xs.clone(), marked(6)).unwrap();
    let target = o.gluing(&bumped(&xs, &HEX_BUMPS)).unwrap();
    let rep = solve_gluing_inverse(&o, &target, &SolveOptions { budget: 3_000, ..Default::default() }).unwrap();
    assert!(rep.trace.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(*rep.trace.last().unwrap(), rep.residual);
}

#[test]
fn tiny_budget_reports_exhaustion() {
    let xs = grid(6);
    let o = ForwardOracle::new(OracleKind::Ads, xs.clone(), marked(6)).unwrap();
    let target = o.gluing(&bumped(&xs, &HEX_BUMPS)).unwrap();
    let rep = solve_gluing_inverse(&o, &target, &SolveOptions { budget: 8, seed: 0, restarts: 1, tol: 1e-12 }).unwrap();
    assert!(rep.exhausted);
    assert!(rep.evaluations <= 8);
}

#[test]
fn hyp_targets_off_the_pinned_family_are_reached() {
    // the generating polygon moves the marked vertices too
    let xs = grid(6);
    let o = ForwardOracle::new(OracleKind::Hyp, xs.clone(), marked(6)).unwrap();
    let ys = bumped(&xs, &[(0, 0.3), (1, 0.25), (2, -0.1), (4, 0.2)]);
    let target = o.gluing(&ys).unwrap();
    let rep = solve_gluing_inverse(&o, &target, &SolveOptions::default()).unwrap();
    assert!(rep.residual < 1e-3, "residual {}", rep.residual);
}

#[test]
fn refine_from_the_generator_is_exact() {
    let xs = grid(6);
    let o = ForwardOracle::new(OracleKind::Ads, xs.clone(), marked(6)).unwrap();
    let ys = bumped(&xs, &HEX_BUMPS);
    let target = o.gluing(&ys).unwrap();
    let rep = refine(&o, &target, &ys, &SolveOptions::default()).unwrap();
    assert_eq!(rep.trace.len(), 1);
    assert!(rep.residual < 1e-12);
    assert!(!rep.exhausted);
    assert!(matches!(refine(&o, &target, &bumped(&xs, &[(0, 0.1)]), &SolveOptions::default()), Err(Error::InfeasibleParams)));
}
