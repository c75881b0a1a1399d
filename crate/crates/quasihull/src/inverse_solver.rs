//! Finite realization search: find polygons on a fixed first-coordinate
//! grid whose convex-hull gluing map matches a target circle map at the
//! sample points.

use crate::ads3::{convex_hull_acausal, develop_side, AcausalPolygon, TimeSide};
use crate::error::{Error, Result};
use crate::hyp3::{convex_hull_ideal, hyp_gluing_samples};
use crate::mobius::{angle_step, CircleMap, CirclePoint, Interp, CP1};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    /// Ideal vertex sets in CP^1; gluing map top -> bottom.
    Hyp,
    /// Acausal polygons in Ein^{1,1}; gluing map future -> past.
    Ads,
}

impl OracleKind {
    pub fn name(&self) -> &'static str {
        match self {
            OracleKind::Hyp => "hyp",
            OracleKind::Ads => "ads",
        }
    }
}

/// Forward map from second coordinates y_1..y_n on a fixed grid
/// x_1..x_n to the gluing samples of the hull.
///
/// The AdS polygon is the graph {(x_i, y_i)}. The hyperbolic vertex set
/// uses the angle coordinates a_i, b_i of x_i, y_i and places the vertex
/// at exp((b_i - a_i)/2 + i (a_i + b_i)/2); y = x gives the round circle,
/// and the points stay in cyclic order around 0.
#[derive(Debug, Clone)]
pub struct ForwardOracle {
    pub kind: OracleKind,
    pub grid: Vec<CirclePoint>,
    pub marked: [usize; 3],
}

/// Unwrapped angles of a strictly cyclically increasing list, starting at
/// the angle of the first point; None if the list winds other than once.
fn unwrap(pts: &[CirclePoint]) -> Option<Vec<f64>> {
    let n = pts.len();
    let mut out = Vec::with_capacity(n);
    let mut t = pts[0].angle();
    out.push(t);
    let mut total = 0.0;
    for i in 0..n {
        let s = angle_step(&pts[i], &pts[(i + 1) % n]);
        if !(s > 1e-12) {
            return None;
        }
        total += s;
        if i + 1 < n {
            t += s;
            out.push(t);
        }
    }
    ((total - TAU).abs() < 1e-9).then_some(out)
}

impl ForwardOracle {
    pub fn new(kind: OracleKind, grid: Vec<CirclePoint>, marked: [usize; 3]) -> Result<Self> {
        if grid.len() < 3 {
            return Err(Error::InvalidSamples("at least 3 grid points are required".into()));
        }
        if unwrap(&grid).is_none() {
            return Err(Error::NonMonotone("grid is not strictly cyclically increasing".into()));
        }
        let n = grid.len();
        let [a, b, c] = marked;
        if a >= n || b >= n || c >= n || a == b || b == c || a == c {
            return Err(Error::InvalidSamples("marked indices must be distinct grid indices".into()));
        }
        Ok(ForwardOracle { kind, grid, marked })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    /// Coordinates the search may move. For AdS the marked vertices stay
    /// at y = x: post-composing y by a Möbius map is an isometry of AdS^3,
    /// so nothing is lost. The hyperbolic vertex map has no such symmetry
    /// and every coordinate is free.
    pub fn free_indices(&self) -> Vec<usize> {
        match self.kind {
            OracleKind::Ads => (0..self.len()).filter(|i| !self.marked.contains(i)).collect(),
            OracleKind::Hyp => (0..self.len()).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Gluing samples (u_i, v_i) of the hull spanned by the parameters,
    /// normalized at the marked vertices on both sides.
    pub fn gluing(&self, params: &[CirclePoint]) -> Result<CircleMap> {
        if params.len() != self.grid.len() || unwrap(params).is_none() {
            return Err(Error::InfeasibleParams);
        }
        match self.kind {
            OracleKind::Ads => {
                let poly = AcausalPolygon::from_graph(&self.grid, params, self.marked)?;
                let hull = convex_hull_acausal(&poly)?;
                let fut = develop_side(&hull, TimeSide::Future)?.positions;
                if hull.planar {
                    return CircleMap::identity(fut);
                }
                let past = develop_side(&hull, TimeSide::Past)?.positions;
                CircleMap::from_samples(fut, past, Interp::PwMoebius)
            }
            OracleKind::Hyp => {
                let a = unwrap(&self.grid).expect("checked in new");
                let mut b = unwrap(params).expect("checked above");
                // same branch as the grid
                let shift = ((a[0] - b[0]) / TAU).round() * TAU;
                b.iter_mut().for_each(|t| *t += shift);
                let pts: Vec<CP1> = a
                    .iter()
                    .zip(&b)
                    .map(|(a, b)| CP1::from_complex(Complex64::from_polar((0.5 * (b - a)).exp(), 0.5 * (a + b))))
                    .collect();
                hyp_gluing_samples(&convex_hull_ideal(&pts, self.marked)?)
            }
        }
    }
}

/// Max over the samples of the angular distance between the achieved
/// gluing value and the target at the same point. The achieved map fixes
/// 0, 1, inf by construction; the target is normalized the same way.
pub fn forward_residual(oracle: &ForwardOracle, params: &[CirclePoint], target: &CircleMap) -> Result<f64> {
    residual_normalized(oracle, params, &target.normalize())
}

fn residual_normalized(oracle: &ForwardOracle, params: &[CirclePoint], target: &CircleMap) -> Result<f64> {
    Ok(discrepancies(oracle, params, target)?.iter().fold(0.0, |m, v| m.max(v.abs())))
}

fn wrap(t: f64) -> f64 {
    (t + PI).rem_euclid(TAU) - PI
}

/// Signed angle from the achieved value to the target value, per sample.
fn discrepancies(oracle: &ForwardOracle, params: &[CirclePoint], target: &CircleMap) -> Result<Vec<f64>> {
    let g = oracle.gluing(params)?;
    Ok(g.xs().iter().zip(g.ys()).map(|(u, v)| wrap(target.eval(u).angle() - v.angle())).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Total forward evaluations over all restarts.
    pub budget: usize,
    pub seed: u64,
    pub restarts: usize,
    /// Stop once the residual is at most this.
    pub tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { budget: 10_000, seed: 0, restarts: 8, tol: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub params: Vec<CirclePoint>,
    pub residual: f64,
    pub evaluations: usize,
    pub iterations: usize,
    /// Residual after each accepted step, starting with the initial point.
    pub trace: Vec<f64>,
    /// Restart that produced the report.
    pub restart: usize,
    /// The budget ran out before the tolerance or the minimal step was
    /// reached.
    pub exhausted: bool,
}

struct Search<'a> {
    oracle: &'a ForwardOracle,
    target: &'a CircleMap,
    free: Vec<usize>,
    evals: usize,
    budget: usize,
}

impl Search<'_> {
    /// Max-norm residual and the signed discrepancies behind it.
    fn eval(&mut self, phi: &[f64]) -> (f64, Option<Vec<f64>>) {
        self.evals += 1;
        let ys: Vec<CirclePoint> = phi.iter().map(|&t| CirclePoint::from_angle(t)).collect();
        match discrepancies(self.oracle, &ys, self.target) {
            Ok(r) => (r.iter().fold(0.0, |m, v| m.max(v.abs())), Some(r)),
            Err(_) => (f64::INFINITY, None),
        }
    }

    /// Polls the least-squares Newton direction of a finite-difference
    /// model of the discrepancies, with a few halvings. Returns the first
    /// point that lowers the max-norm.
    #[allow(clippy::type_complexity)]
    fn model_poll(&mut self, x: &[f64], fx: f64, rx: &[f64], h: f64) -> Option<(Vec<f64>, f64, Vec<f64>)> {
        let d = self.free.len();
        if self.evals + d + 4 > self.budget {
            return None;
        }
        let mut jac = DMatrix::zeros(rx.len(), d);
        for k in 0..d {
            let i = self.free[k];
            let mut e = vec![0.0; d];
            e[k] = 1.0;
            let xp = self.moved(x, &e, h);
            let delta = xp[i] - x[i];
            if delta.abs() < 1e-14 {
                continue;
            }
            if let (_, Some(rp)) = self.eval(&xp) {
                for (m, (a, b)) in rp.iter().zip(rx).enumerate() {
                    jac[(m, k)] = wrap(a - b) / delta;
                }
            }
        }
        let svd = jac.svd(true, true);
        let eps = 1e-10 * svd.singular_values.max();
        let step = svd.solve(&-DVector::from_column_slice(rx), eps).ok()?;
        let dir: Vec<f64> = step.iter().copied().collect();
        let mut t = 1.0;
        for _ in 0..4 {
            let y = self.moved(x, &dir, t);
            if let (fy, Some(ry)) = self.eval(&y) {
                if fy < fx {
                    return Some((y, fy, ry));
                }
            }
            t *= 0.5;
        }
        None
    }

    /// Moves phi by step * dir on the free coordinates and projects each
    /// coordinate back between its neighbours.
    fn moved(&self, phi: &[f64], dir: &[f64], step: f64) -> Vec<f64> {
        let n = phi.len();
        let mut out = phi.to_vec();
        for (k, &i) in self.free.iter().enumerate() {
            let lo = if i == 0 { phi[n - 1] - TAU } else { out[i - 1] };
            let hi = if i + 1 == n { out[0] + TAU } else { phi[i + 1] };
            let gap = 1e-9 * (hi - lo).max(0.0);
            let v = phi[i] + step * dir[k];
            out[i] = if hi - lo > 2.0 * gap { v.clamp(lo + gap, hi - gap) } else { phi[i] };
        }
        out
    }

    fn report(&mut self, start: Vec<f64>, rng: &mut ChaCha8Rng, tol: f64, restart: usize) -> SolveReport {
        let (x, fx, iterations, trace, exhausted) = self.run(start, rng, tol);
        SolveReport {
            params: x.iter().map(|&t| CirclePoint::from_angle(t)).collect(),
            residual: fx,
            evaluations: self.evals,
            iterations,
            trace,
            restart,
            exhausted,
        }
    }

    /// Rosenbrock-style pattern search: poll each direction of an
    /// orthonormal basis (initially the coordinate axes), growing the step
    /// on success and reversing and shrinking it on failure. Once every
    /// direction has seen both, the basis is rotated onto the accumulated
    /// progress, which keeps long narrow valleys from stalling the search.
    fn run(&mut self, start: Vec<f64>, rng: &mut ChaCha8Rng, tol: f64) -> (Vec<f64>, f64, usize, Vec<f64>, bool) {
        let d = self.free.len();
        let mut x = start;
        let (mut fx, mut rx) = self.eval(&x);
        let mut trace = vec![fx];
        let mut iterations = 0;
        let mut use_model = true;
        if d == 0 {
            return (x, fx, iterations, trace, false);
        }
        let mut basis: Vec<Vec<f64>> = (0..d).map(|k| (0..d).map(|j| if j == k { 1.0 } else { 0.0 }).collect()).collect();
        let mut steps = vec![0.1f64; d];
        let mut progress = vec![0.0; d];
        let mut succeeded = vec![false; d];
        let mut failed = vec![false; d];
        while fx > tol {
            if steps.iter().all(|s| s.abs() < 1e-13) {
                // stalled, usually on a kink of the max-norm: poll again
                // from here along a fresh random basis
                if self.evals + 2 * d > self.budget {
                    return (x, fx, iterations, trace, true);
                }
                basis = random_basis(rng, d);
                steps.iter_mut().for_each(|s| *s = 1e-2);
                progress.iter_mut().for_each(|p| *p = 0.0);
                succeeded.iter_mut().for_each(|v| *v = false);
                failed.iter_mut().for_each(|v| *v = false);
            }
            iterations += 1;
            if use_model {
                if let Some(r) = rx.clone() {
                    let h = steps.iter().fold(0.0f64, |m, s| m.max(s.abs())).clamp(1e-9, 1e-5);
                    match self.model_poll(&x, fx, &r, h) {
                        Some((y, fy, ry)) => {
                            x = y;
                            fx = fy;
                            rx = Some(ry);
                            trace.push(fx);
                            continue;
                        }
                        None => use_model = false,
                    }
                }
            }
            for k in 0..d {
                if self.evals >= self.budget {
                    return (x, fx, iterations, trace, true);
                }
                let y = self.moved(&x, &basis[k], steps[k]);
                let (fy, ry) = if y == x { (f64::INFINITY, None) } else { self.eval(&y) };
                if fy < fx {
                    x = y;
                    fx = fy;
                    rx = ry;
                    use_model = true;
                    trace.push(fx);
                    progress[k] += steps[k];
                    steps[k] *= 3.0;
                    succeeded[k] = true;
                } else {
                    steps[k] *= -0.5;
                    failed[k] = true;
                }
            }
            if succeeded.iter().zip(&failed).all(|(s, f)| *s && *f) {
                if let Some(b) = rotated(&basis, &progress) {
                    basis = b;
                    let scale = steps.iter().fold(0.0f64, |m, s| m.max(s.abs()));
                    steps.iter_mut().for_each(|s| *s = scale);
                }
                progress.iter_mut().for_each(|p| *p = 0.0);
                succeeded.iter_mut().for_each(|v| *v = false);
                failed.iter_mut().for_each(|v| *v = false);
            }
        }
        (x, fx, iterations, trace, false)
    }
}

/// Free coordinates drawn uniformly in the arcs between the pinned
/// marked ones, sorted within each arc.
fn uniform_start(base: &[f64], marked: &[usize; 3], rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = base.len();
    let mut out = base.to_vec();
    let mut m = marked.to_vec();
    m.sort_unstable();
    for k in 0..3 {
        let (a, b) = (m[k], m[(k + 1) % 3]);
        let lo = base[a];
        let hi = if b > a { base[b] } else { base[b] + TAU };
        let idx: Vec<usize> = (1..n).map(|j| (a + j) % n).take_while(|&i| i != b).collect();
        let mut draws: Vec<f64> = idx.iter().map(|_| rng.gen_range(lo..hi)).collect();
        draws.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (&i, v) in idx.iter().zip(draws) {
            out[i] = if i < a { v - TAU } else { v };
        }
    }
    out
}

fn random_basis(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<f64>> {
    loop {
        let raw: Vec<Vec<f64>> = (0..d).map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let unit = vec![1.0; d];
        if let Some(b) = rotated(&raw, &unit) {
            return b;
        }
    }
}

/// Gram-Schmidt on a_k = sum_{j >= k} progress_j basis_j; None when the
/// progress vectors are too close to dependent.
fn rotated(basis: &[Vec<f64>], progress: &[f64]) -> Option<Vec<Vec<f64>>> {
    let d = basis.len();
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(d);
    for k in 0..d {
        let mut a = vec![0.0; d];
        for j in k..d {
            for (ai, bi) in a.iter_mut().zip(&basis[j]) {
                *ai += progress[j] * bi;
            }
        }
        if k > 0 && a.iter().all(|v| *v == 0.0) {
            a = basis[k].clone();
        }
        for q in &out {
            let dot: f64 = a.iter().zip(q).map(|(u, v)| u * v).sum();
            a.iter_mut().zip(q).for_each(|(u, v)| *u -= dot * v);
        }
        let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 1e-12) {
            return None;
        }
        out.push(a.iter().map(|v| v / norm).collect());
    }
    Some(out)
}

/// Derivative-free search over the second coordinates (see
/// `ForwardOracle::free_indices` for which ones move). Restart 0 starts from the
/// identity graph, restart 1 from the target's own samples, the others
/// from seeded uniform draws in the monotone cone. Restarts run in parallel
/// with their share of the budget; the best residual wins, ties going to
/// the lower restart index. Never claims global optimality.
pub fn solve_gluing_inverse(oracle: &ForwardOracle, target: &CircleMap, opts: &SolveOptions) -> Result<SolveReport> {
    if oracle.len() > 16 {
        return Err(Error::InvalidSamples("at most 16 grid points are supported".into()));
    }
    let target = target.normalize();
    let n = oracle.len();
    let free = oracle.free_indices();
    let base = unwrap(&oracle.grid).expect("grid checked in new");
    let restarts = opts.restarts.max(1);
    let share = (opts.budget / restarts).max(1);
    let mut reports: Vec<SolveReport> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = restart_rng(opts.seed, r);
            let mut search = Search { oracle, target: &target, free: free.clone(), evals: 0, budget: share };
            let start = match r {
                0 => base.clone(),
                1 => {
                    let ys: Vec<CirclePoint> = oracle.grid.iter().map(|x| target.eval(x)).collect();
                    match unwrap(&ys) {
                        Some(mut t) => {
                            let shift = ((base[0] - t[0]) / TAU).round() * TAU;
                            t.iter_mut().for_each(|v| *v += shift);
                            if oracle.kind == OracleKind::Ads {
                                for &m in &oracle.marked {
                                    t[m] = base[m];
                                }
                            }
                            if t.windows(2).all(|w| w[1] > w[0]) && t[n - 1] < t[0] + TAU {
                                t
                            } else {
                                base.clone()
                            }
                        }
                        None => base.clone(),
                    }
                }
                _ => match oracle.kind {
                    OracleKind::Ads => uniform_start(&base, &oracle.marked, &mut rng),
                    OracleKind::Hyp => {
                        let mut t: Vec<f64> = (0..n).map(|_| rng.gen_range(base[0] - PI..base[0] + PI)).collect();
                        t.sort_by(|a, b| a.partial_cmp(b).unwrap());
                        t
                    }
                },
            };
            search.report(start, &mut rng, opts.tol, r)
        })
        .collect();
    let total: usize = reports.iter().map(|r| r.evaluations).sum();
    reports.sort_by(|a, b| a.residual.partial_cmp(&b.residual).unwrap().then(a.restart.cmp(&b.restart)));
    let mut best = reports.swap_remove(0);
    best.evaluations = total;
    Ok(best)
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9).wrapping_add(restart as u64))
}

/// Single search from a given start (restart index 0). The start must be
/// strictly cyclically increasing and, for AdS, agree with the grid at the
/// marked vertices.
pub fn refine(oracle: &ForwardOracle, target: &CircleMap, start: &[CirclePoint], opts: &SolveOptions) -> Result<SolveReport> {
    let base = unwrap(&oracle.grid).expect("grid checked in new");
    let mut t = match unwrap(start) {
        Some(t) if start.len() == oracle.len() => t,
        _ => return Err(Error::InfeasibleParams),
    };
    let shift = ((base[0] - t[0]) / TAU).round() * TAU;
    t.iter_mut().for_each(|v| *v += shift);
    if oracle.kind == OracleKind::Ads && oracle.marked.iter().any(|&m| (t[m] - base[m]).abs() > 1e-9) {
        return Err(Error::InfeasibleParams);
    }
    let target = target.normalize();
    let free = oracle.free_indices();
    let mut search = Search { oracle, target: &target, free, evals: 0, budget: opts.budget.max(1) };
    Ok(search.report(t, &mut restart_rng(opts.seed, 0), opts.tol, 0))
}
