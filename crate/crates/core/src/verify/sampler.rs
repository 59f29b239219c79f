use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::{Field, Rational};

/// Seeded source of small rationals `p/q` with `1 <= p, q <= 97`.
#[derive(Debug, Clone)]
pub struct PointSampler {
    rng: ChaCha8Rng,
}

const BOUND: i64 = 97;

impl PointSampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn draw(&mut self) -> (i64, i64) {
        (self.rng.random_range(1..=BOUND), self.rng.random_range(1..=BOUND))
    }

    /// Positive point.
    pub fn positive(&mut self) -> Rational {
        let (p, q) = self.draw();
        Rational::from_ratio(p, q)
    }

    /// Point in the open interval `(0, 1)`.
    pub fn unit_interval(&mut self) -> Rational {
        loop {
            let (p, q) = self.draw();
            if p < q {
                return Rational::from_ratio(p, q);
            }
        }
    }

    /// Nonzero point of either sign outside `exclude`.
    pub fn avoiding(&mut self, exclude: &[Rational]) -> Rational {
        loop {
            let (p, q) = self.draw();
            let v = if self.rng.random_bool(0.5) { Rational::from_ratio(-p, q) } else { Rational::from_ratio(p, q) };
            if !exclude.contains(&v) {
                return v;
            }
        }
    }

    /// `count` distinct points outside `exclude`.
    pub fn distinct(&mut self, count: usize, exclude: &[Rational]) -> Vec<Rational> {
        let mut banned = exclude.to_vec();
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let v = self.avoiding(&banned);
            banned.push(v.clone());
            out.push(v);
        }
        out
    }
}
