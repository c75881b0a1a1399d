use super::{cross_ratio, rotation, CircleMap, CirclePoint, MobiusReal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

/// Seeded generator of symmetric quadruples g·(0, 1, -1, inf) with
/// g = R(t1) diag(e^{s/2}, e^{-s/2}) R(t2), t1, t2 uniform on the circle and
/// s uniform in [-spread, spread].
#[derive(Debug, Clone)]
pub struct QuadrupleSampler {
    rng: ChaCha8Rng,
    spread: f64,
}

impl QuadrupleSampler {
    pub fn new(seed: u64) -> Self {
        Self::with_spread(seed, 8.0)
    }

    pub fn with_spread(seed: u64, spread: f64) -> Self {
        QuadrupleSampler { rng: ChaCha8Rng::seed_from_u64(seed), spread }
    }

    pub fn next_mobius(&mut self) -> MobiusReal {
        let t1 = self.rng.gen_range(0.0..TAU);
        let t2 = self.rng.gen_range(0.0..TAU);
        let s = self.rng.gen_range(-self.spread..=self.spread);
        let d = MobiusReal::new((0.5 * s).exp(), 0.0, 0.0, (-0.5 * s).exp()).expect("positive diagonal");
        rotation(t1).compose(&d).compose(&rotation(t2))
    }

    pub fn next_quadruple(&mut self) -> [CirclePoint; 4] {
        let g = self.next_mobius();
        standard_symmetric().map(|p| g.apply(&p))
    }
}

pub fn standard_symmetric() -> [CirclePoint; 4] {
    [
        CirclePoint::zero(),
        CirclePoint::one(),
        CirclePoint::from_real(-1.0),
        CirclePoint::infinity(),
    ]
}

/// max over sampled symmetric quadruples Q of max(|cr h(Q)|, 1/|cr h(Q)|),
/// together with the standard quadruple itself. `count` is clamped to >= 1.
pub fn qs_norm_estimate(h: &CircleMap, sampler: &mut QuadrupleSampler, count: usize) -> f64 {
    let mut best: f64 = 1.0;
    let mut eval = |q: &[CirclePoint; 4]| {
        let img = q.map(|p| h.eval(&p));
        if let Ok(c) = cross_ratio(&img[0], &img[1], &img[2], &img[3]) {
            let a = c.abs();
            best = best.max(a).max(1.0 / a);
        }
    };
    eval(&standard_symmetric());
    for _ in 0..count.max(1) {
        let q = sampler.next_quadruple();
        eval(&q);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_quadruples_are_symmetric() {
        let mut s = QuadrupleSampler::new(11);
        for _ in 0..1000 {
            let q = s.next_quadruple();
            let c = cross_ratio(&q[0], &q[1], &q[2], &q[3]).unwrap();
            assert!((c + 1.0).abs() <= 1e-10, "cr = {c}");
        }
    }

    #[test]
    fn sampler_is_deterministic() {
        let a = QuadrupleSampler::new(5).next_quadruple();
        let b = QuadrupleSampler::new(5).next_quadruple();
        assert_eq!(a, b);
    }
}
