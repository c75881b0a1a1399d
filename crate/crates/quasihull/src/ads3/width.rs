use super::{inner22, HullComplexAdS, TimeSide, Vec22};
use crate::error::Result;
use nalgebra::{Matrix4x3, Vector4};
use std::f64::consts::FRAC_PI_2;

/// Width estimate: `lower` is attained, `upper` adds the spread of the
/// objective over the finest cells kept by the search (clamped at pi/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidthReport {
    pub lower: f64,
    pub upper: f64,
    /// (future face, past face) realizing `lower`.
    pub argmax_faces: [usize; 2],
    pub planar: bool,
}

const KEEP: usize = 16;
const MAX_DEPTH: usize = 24;

struct PastData {
    /// (face, unit dual, fan triangles of lifts)
    faces: Vec<(usize, Vec22, Vec<[Vec22; 3]>)>,
    /// (lift a, lift b, -<P_a, P_b>, a past face on the edge)
    edges: Vec<(Vec22, Vec22, f64, usize)>,
}

/// Rescales three null vectors to pairwise pairing -1, so that barycentric
/// coordinates on the triangle do not depend on the lifts' scales.
fn balanced(t: [Vec22; 3]) -> [Vec22; 3] {
    let ab = -inner22(&t[0], &t[1]);
    let bc = -inner22(&t[1], &t[2]);
    let ca = -inner22(&t[2], &t[0]);
    if !(ab > 0.0 && bc > 0.0 && ca > 0.0) {
        return t;
    }
    [t[0].scale((bc / (ab * ca)).sqrt()), t[1].scale((ca / (ab * bc)).sqrt()), t[2].scale((ab / (bc * ca)).sqrt())]
}

fn fan(hull: &HullComplexAdS, f: usize) -> Vec<[Vec22; 3]> {
    let v = &hull.faces[f].vertices;
    (1..v.len() - 1).map(|k| balanced([hull.lifts[v[0]], hull.lifts[v[k]], hull.lifts[v[k + 1]]])).collect()
}

fn past_data(hull: &HullComplexAdS) -> PastData {
    let faces = hull
        .faces_on(TimeSide::Past)
        .into_iter()
        .filter_map(|f| hull.faces[f].dual.map(|d| (f, d.0, fan(hull, f))))
        .collect();
    let mut edges = Vec::new();
    for e in &hull.edges {
        let (f, g) = e.faces;
        let pf = if hull.faces[f].side == TimeSide::Past {
            f
        } else if hull.faces[g].side == TimeSide::Past {
            g
        } else {
            continue;
        };
        let (pa, pb) = (hull.lifts[e.a], hull.lifts[e.b]);
        edges.push((pa, pb, -inner22(&pa, &pb), pf));
    }
    PastData { faces, edges }
}

/// Nonnegative coefficients c with x = +-(c . tri), if any.
fn in_cone(x: &Vec22, tri: &[Vec22; 3]) -> bool {
    let a = Matrix4x3::from_fn(|r, c| tri[c].0[r]);
    let b = Vector4::from_column_slice(&x.0);
    let ata = a.transpose() * a;
    let Some(inv) = ata.try_inverse() else { return false };
    let c = inv * (a.transpose() * b);
    let resid = (a * c - b).norm();
    if resid > 1e-9 * b.norm().max(1e-300) {
        return false;
    }
    let tol = 1e-12 * c.amax();
    c.iter().all(|&v| v >= -tol) || c.iter().all(|&v| v <= tol)
}

fn time_to_past_with(data: &PastData, y: &Vec22) -> (f64, usize) {
    let q = y.q();
    if !(q < 0.0) {
        return (0.0, usize::MAX);
    }
    let y = y.scale(1.0 / (-q).sqrt());
    let mut best = (0.0, usize::MAX);
    for (f, g, tris) in &data.faces {
        let s = inner22(&y, g);
        if s.abs() >= 1.0 {
            continue;
        }
        let d = s.abs().asin();
        if d <= best.0 {
            continue;
        }
        let foot = y.add(&g.scale(s));
        if tris.iter().any(|t| in_cone(&foot, t)) {
            best = (d, *f);
        }
    }
    for (pa, pb, c, f) in &data.edges {
        if *c <= 1e-14 {
            continue;
        }
        let (a, b) = (inner22(pa, &y), inner22(pb, &y));
        let d = if a * b <= 0.0 {
            FRAC_PI_2
        } else {
            let cs = (2.0 * a * b / c).sqrt();
            if cs >= 1.0 {
                continue;
            }
            cs.acos()
        };
        if d > best.0 {
            best = (d, *f);
        }
    }
    best
}

/// Largest timelike distance from y to the past boundary, with the past
/// face where it is attained. Within a spacelike face the maximum is at the
/// orthogonal foot; otherwise it is on the face's edges.
pub fn time_to_past(hull: &HullComplexAdS, y: &Vec22) -> (f64, usize) {
    time_to_past_with(&past_data(hull), y)
}

#[derive(Clone, Copy)]
struct Cell {
    face: usize,
    tri: [Vec22; 3],
    bary: [[f64; 3]; 3],
    value: f64,
    past: usize,
}

fn point(tri: &[Vec22; 3], w: &[f64; 3]) -> Vec22 {
    tri[0].scale(w[0]).add(&tri[1].scale(w[1])).add(&tri[2].scale(w[2]))
}

fn centre(b: &[[f64; 3]; 3]) -> [f64; 3] {
    std::array::from_fn(|k| (b[0][k] + b[1][k] + b[2][k]) / 3.0)
}

fn mid(p: &[f64; 3], q: &[f64; 3]) -> [f64; 3] {
    std::array::from_fn(|k| 0.5 * (p[k] + q[k]))
}

/// Coordinate pattern search on the barycentric weights of one triangle.
fn polish(data: &PastData, tri: &[Vec22; 3], mut w: [f64; 3], mut value: f64, mut past: usize) -> (f64, [f64; 3], usize) {
    let mut h = 1e-3;
    while h > 1e-13 {
        let mut moved = false;
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            for s in [h, -h] {
                let mut v = w;
                v[i] += s;
                v[j] -= s;
                if v[i] < 0.0 || v[j] < 0.0 {
                    continue;
                }
                let (t, f) = time_to_past_with(data, &point(tri, &v));
                if t > value {
                    (w, value, past, moved) = (v, t, f, true);
                }
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    (value, w, past)
}

/// Supremum of the timelike distance between the future and past
/// boundaries, by recursive barycentric subdivision of the future faces.
pub fn width(hull: &HullComplexAdS) -> Result<WidthReport> {
    if hull.planar {
        return Ok(WidthReport { lower: 0.0, upper: 0.0, argmax_faces: [0, 0], planar: true });
    }
    let data = past_data(hull);
    let eval = |face: usize, tri: &[Vec22; 3], bary: [[f64; 3]; 3]| {
        let (value, past) = time_to_past_with(&data, &point(tri, &centre(&bary)));
        Cell { face, tri: *tri, bary, value, past }
    };
    let id = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut cells: Vec<Cell> = hull
        .faces_on(TimeSide::Future)
        .into_iter()
        .flat_map(|f| fan(hull, f).into_iter().map(move |t| (f, t)))
        .map(|(f, t)| eval(f, &t, id))
        .collect();
    let mut best = cells.iter().copied().fold(None::<Cell>, |b, c| match b {
        Some(b) if b.value >= c.value => Some(b),
        _ => Some(c),
    });
    for _ in 0..MAX_DEPTH {
        let mut next = Vec::with_capacity(cells.len() * 4);
        for c in &cells {
            let [p, q, r] = c.bary;
            let (pq, qr, rp) = (mid(&p, &q), mid(&q, &r), mid(&r, &p));
            for b in [[p, pq, rp], [pq, q, qr], [rp, qr, r], [qr, rp, pq]] {
                next.push(eval(c.face, &c.tri, b));
            }
        }
        next.sort_by(|a, b| b.value.partial_cmp(&a.value).unwrap());
        next.truncate(KEEP);
        if let Some(top) = next.first() {
            if best.is_none_or(|b| top.value > b.value) {
                best = Some(*top);
            }
        }
        cells = next;
    }
    let mut best = best.expect("a solid hull has future faces");
    for c in cells.iter().chain(std::iter::once(&best.clone())) {
        let (value, w, past) = polish(&data, &c.tri, centre(&c.bary), c.value, c.past);
        if value > best.value {
            best = Cell { face: c.face, tri: c.tri, bary: [w; 3], value, past };
        }
    }
    let mut spread: f64 = 0.0;
    for c in &cells {
        for v in c.bary {
            let t = time_to_past_with(&data, &point(&c.tri, &v)).0;
            spread = spread.max((t - c.value).abs());
        }
    }
    let lower = best.value;
    Ok(WidthReport {
        lower,
        upper: (lower + spread).min(FRAC_PI_2),
        argmax_faces: [best.face, best.past],
        planar: false,
    })
}
