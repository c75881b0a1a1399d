use super::{FiniteLamination, Relation};
use crate::h2::{self, V3};

/// Sound bounds lower <= ||lambda||_Th <= upper.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormInterval {
    pub lower: f64,
    pub upper: f64,
}

/// Total weight of the leaves met by the closed segment [a, b].
fn crossing_weight(lam: &FiniteLamination, normals: &[V3], a: &V3, b: &V3) -> f64 {
    lam.leaves()
        .iter()
        .zip(normals)
        .filter(|(_, n)| h2::inner(a, n) * h2::inner(b, n) <= 0.0)
        .map(|(l, _)| l.weight)
        .sum()
}

/// Segment of length 1 centred at x in the unit direction t.
fn unit_segment(x: &V3, t: &V3) -> (V3, V3) {
    (h2::exp_point(x, t, -0.5), h2::exp_point(x, t, 0.5))
}

/// Parameter interval {s : |a cosh s + b sinh s| <= c} along a leaf, where
/// a and b pair the foot and the unit tangent with another leaf's normal.
fn near_interval(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    const FAR: f64 = 60.0;
    let (aa, ab) = (a.abs(), b.abs());
    if (aa - ab).abs() <= 1e-14 * aa.max(ab) {
        if aa == 0.0 {
            return Some((-FAR, FAR));
        }
        // a e^{+-s}
        let r = (c / aa).ln();
        return Some(if a * b > 0.0 { (-FAR, r) } else { (-r, FAR) });
    }
    if aa > ab {
        let r = (a * a - b * b).sqrt();
        if r > c {
            return None;
        }
        let sigma = (b / a).atanh();
        let h = (c / r).acosh();
        Some((-sigma - h, -sigma + h))
    } else {
        let r = (b * b - a * a).sqrt();
        let sigma = (a / b).atanh();
        let h = (c / r).asinh();
        Some((-sigma - h, -sigma + h))
    }
}

/// Largest total weight of leaves within distance 1 of a single point of
/// leaf i, by sweeping their parameter intervals along the leaf.
fn stab_bound(lam: &FiniteLamination, normals: &[V3], i: usize) -> f64 {
    let leaves = lam.leaves();
    let f = h2::project(&h2::origin(), &normals[i]);
    let t = h2::normalize_spacelike(&h2::cross(&normals[i], &f));
    let c = 1f64.sinh();
    let mut events: Vec<(f64, f64)> = Vec::new();
    for (j, nj) in normals.iter().enumerate() {
        if j == i {
            continue;
        }
        if let Some((lo, hi)) = near_interval(h2::inner(&f, nj), h2::inner(&t, nj), c) {
            // widened so rounding cannot make the bound unsound
            events.push((lo - 1e-9, leaves[j].weight));
            events.push((hi + 1e-9, -leaves[j].weight));
        }
    }
    events.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap().then(y.1.partial_cmp(&x.1).unwrap()));
    let mut cur = leaves[i].weight;
    let mut best = cur;
    for (_, w) in events {
        cur += w;
        best = best.max(cur);
    }
    best
}

/// Lower bound from explicit unit segments: perpendiculars to each leaf
/// centred on it, common perpendiculars of close pairs, and perpendiculars
/// pushed toward shared endpoints of asymptotic pairs. Upper bound: a unit
/// segment crossing leaf i at y only meets leaves within distance 1 of y.
pub fn thurston_norm_estimate(lam: &FiniteLamination) -> NormInterval {
    let leaves = lam.leaves();
    let normals: Vec<V3> = leaves.iter().map(|l| l.geodesic.normal()).collect();
    let n = leaves.len();
    if n == 0 {
        return NormInterval { lower: 0.0, upper: 0.0 };
    }
    let mut lower: f64 = leaves.iter().map(|l| l.weight).fold(0.0, f64::max);
    let o = h2::origin();
    for (i, ni) in normals.iter().enumerate() {
        let f = h2::project(&o, ni);
        let (a, b) = unit_segment(&f, ni);
        lower = lower.max(crossing_weight(lam, &normals, &a, &b));
        for j in 0..n {
            if j == i {
                continue;
            }
            let gi = &leaves[i].geodesic;
            let gj = &leaves[j].geodesic;
            match gi.relation(gj) {
                Relation::Ultraparallel if j > i => {
                    let d = gi.distance(gj);
                    if d <= 1.0 {
                        let m = h2::normalize_spacelike(&h2::cross(ni, &normals[j]));
                        let (Some(fi), Some(fj)) =
                            (h2::line_intersection(ni, &m), h2::line_intersection(&normals[j], &m))
                        else {
                            continue;
                        };
                        let mid = h2::normalize_timelike(&(fi + fj)).unwrap_or(fi);
                        let t = h2::direction(&mid, &fj);
                        let (a, b) = unit_segment(&mid, &t);
                        lower = lower.max(crossing_weight(lam, &normals, &a, &b));
                    }
                }
                Relation::Asymptotic => {
                    // walk along leaf i toward the shared endpoint
                    let shared = if gj.has_endpoint(&gi.p) { gi.p } else { gi.q };
                    let e = h2::ideal(&shared);
                    let tan = h2::direction(&f, &(f + e * (1.0 / e[0])));
                    let tan = tan - ni * h2::inner(&tan, ni);
                    let tan = h2::normalize_spacelike(&tan);
                    let mut s = 0.5;
                    while s < 40.0 {
                        let x = h2::exp_point(&f, &tan, s);
                        let (a, b) = unit_segment(&x, ni);
                        let nj = &normals[j];
                        if h2::inner(&a, nj) * h2::inner(&b, nj) <= 0.0 {
                            lower = lower.max(crossing_weight(lam, &normals, &a, &b));
                            break;
                        }
                        s += 0.5;
                    }
                }
                _ => {}
            }
        }
    }
    let mut upper: f64 = 0.0;
    for i in 0..n {
        upper = upper.max(stab_bound(lam, &normals, i));
    }
    NormInterval { lower: lower.min(upper), upper }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::earthquake::{GeodesicH2, Leaf};

    fn lam(v: &[(f64, f64, f64)]) -> FiniteLamination {
        FiniteLamination::new(
            v.iter().map(|&(p, q, w)| Leaf { geodesic: GeodesicH2::from_reals(p, q).unwrap(), weight: w }).collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_leaf_is_exact() {
        let r = thurston_norm_estimate(&lam(&[(-1.0, 1.0, 0.7)]));
        assert_eq!((r.lower, r.upper), (0.7, 0.7));
    }

    #[test]
    fn far_leaves_give_max_weight() {
        // concentric semicircles with ratio e^2 are 2 apart
        let r2 = 2f64.exp();
        let r = thurston_norm_estimate(&lam(&[(-1.0, 1.0, 0.3), (-r2, r2, 0.9), (-r2 * r2, r2 * r2, 0.5)]));
        assert!((r.lower - 0.9).abs() < 1e-15 && (r.upper - 0.9).abs() < 1e-15);
    }

    #[test]
    fn asymptotic_pair_sums() {
        let r = thurston_norm_estimate(&lam(&[(0.0, 1.0, 0.4), (1.0, 2.0, 0.5)]));
        assert!((r.lower - 0.9).abs() < 1e-15);
        assert!((r.upper - 0.9).abs() < 1e-15);
    }
}
