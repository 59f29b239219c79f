//! Closed-form stationary vectors for three small `n = 2` sectors. Each
//! listed term stands for its whole orbit under the rotation
//! `|σ_1..σ_L⟩ -> |σ_L, σ_1..σ_{L-1}⟩` combined with `x_i -> x_{i+1}`.

use crate::combinatorics::{Configuration, SectorBasis};
use crate::scalar::{pow, Field, Rational};

pub struct OrbitTerm {
    pub state: &'static str,
    /// Numerator monomials `t^e x_i` as `(e, i)`, `i` 1-based.
    pub numerator: &'static [(u32, usize)],
    /// Denominator `Π x_i`.
    pub denominator: &'static [usize],
}

pub struct KnownStationary {
    pub m: [usize; 3],
    pub terms: &'static [OrbitTerm],
}

const T5: [(u32, usize); 3] = [(0, 5), (1, 5), (2, 5)];

pub const KNOWN_STATIONARY: [KnownStationary; 3] = [
    KnownStationary {
        m: [1, 1, 1],
        terms: &[
            OrbitTerm { state: "012", numerator: &[(1, 1), (0, 3), (1, 3)], denominator: &[1] },
            OrbitTerm { state: "102", numerator: &[(0, 2), (0, 3), (1, 3)], denominator: &[2] },
        ],
    },
    KnownStationary {
        m: [1, 2, 1],
        terms: &[
            OrbitTerm { state: "0112", numerator: &[(2, 1), (0, 4), (1, 4), (2, 4)], denominator: &[1] },
            OrbitTerm { state: "1012", numerator: &[(1, 2), (0, 4), (1, 4), (2, 4)], denominator: &[2] },
            OrbitTerm { state: "1102", numerator: &[(0, 3), (0, 4), (1, 4), (2, 4)], denominator: &[3] },
        ],
    },
    KnownStationary {
        m: [2, 2, 1],
        terms: &[
            OrbitTerm { state: "00112", numerator: &[(2, 1), (2, 2), T5[0], T5[1], T5[2]], denominator: &[1, 2] },
            OrbitTerm { state: "01012", numerator: &[(2, 1), (1, 3), T5[0], T5[1], T5[2]], denominator: &[1, 3] },
            OrbitTerm { state: "10012", numerator: &[(1, 2), (1, 3), T5[0], T5[1], T5[2]], denominator: &[2, 3] },
            OrbitTerm { state: "01102", numerator: &[(2, 1), (0, 4), T5[0], T5[1], T5[2]], denominator: &[1, 4] },
            OrbitTerm { state: "10102", numerator: &[(1, 2), (0, 4), T5[0], T5[1], T5[2]], denominator: &[2, 4] },
            OrbitTerm { state: "11002", numerator: &[(0, 3), (0, 4), T5[0], T5[1], T5[2]], denominator: &[3, 4] },
        ],
    },
];

pub fn known_stationary(m: &[usize]) -> Option<&'static KnownStationary> {
    KNOWN_STATIONARY.iter().find(|k| k.m == m)
}

impl KnownStationary {
    /// The vector on `basis` for the given `t` and `x`; `None` if an orbit
    /// leaves the basis or two orbit terms collide.
    pub fn expand(&self, basis: &SectorBasis, t: &Rational, x: &[Rational]) -> Option<Vec<Rational>> {
        let l = x.len();
        let mut v = vec![Rational::from_i64(0); basis.len()];
        let mut seen = vec![false; basis.len()];
        for term in self.terms {
            let mut state = Configuration::decode(term.state).ok()?;
            for r in 0..l {
                let xi = |i: usize| &x[(i - 1 + r) % l];
                let num = term
                    .numerator
                    .iter()
                    .fold(Rational::from_i64(0), |acc, &(e, i)| acc + pow(t, e) * xi(i).clone());
                let den = term.denominator.iter().fold(Rational::from_i64(1), |acc, &i| acc * xi(i).clone());
                let idx = basis.index_of(&state)?;
                if seen[idx] {
                    return None;
                }
                seen[idx] = true;
                v[idx] = num / den;
                state = state.cyclic_shift();
            }
        }
        seen.iter().all(|&s| s).then_some(v)
    }
}
