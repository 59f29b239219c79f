//! `S^{k,1}(z)` from traces of products of q-oscillator valued L-operators
//! over the Fock space, followed by the gauge that makes it polynomial.
//!
//! `q` never becomes a number on the `S` path: every trace is kept as a
//! finite sum `Σ c q^p / (1 - q^β z)` with integer exponents, and after the
//! gauge every exponent must be even so that `q^2 = t` can be substituted.

use std::collections::BTreeMap;

use super::closed::assemble;
use super::{RIndex, RMatrixElementQuery};
use crate::combinatorics::MultiplicityArray;
use crate::error::{Error, Result};
use crate::scalar::{powi, sign, Field};
use crate::sparse::SparseMatrix;

/// The operator sitting at one component of the L-operator, chosen by the
/// four boundary bits `(a, b, i, j)` of `𝓛^{a,b}_{i,j}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LOperatorEntry {
    One,
    K,
    MinusQK,
    APlus,
    AMinus,
    Zero,
}

impl LOperatorEntry {
    pub fn of(a: u32, b: u32, i: u32, j: u32) -> Self {
        match (a, b, i, j) {
            (0, 0, 0, 0) | (1, 1, 1, 1) => Self::One,
            (1, 0, 1, 0) => Self::K,
            (0, 1, 0, 1) => Self::MinusQK,
            (1, 0, 0, 1) => Self::APlus,
            (0, 1, 1, 0) => Self::AMinus,
            _ => Self::Zero,
        }
    }
}

/// `Tr(z^h X)` for a word `X` in the q-oscillators, as `Σ coeff · q^p / (1 - q^β z)`
/// keyed by `(p, β)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FockTrace {
    pub terms: BTreeMap<(i64, i64), i64>,
}

impl FockTrace {
    /// Trace of `word[len-1] ⋯ word[0]`; `word[0]` acts first on `|m⟩`.
    pub fn of_word(word: &[LOperatorEntry]) -> Self {
        // The word sends |m⟩ to  ± q^{γ m + c} Π_δ (1 - q^{2(m+δ)}) |m + o⟩.
        let mut negative = false;
        let (mut gamma, mut c, mut o) = (0i64, 0i64, 0i64);
        let mut deltas = Vec::new();
        for op in word {
            match op {
                LOperatorEntry::Zero => return Self::default(),
                LOperatorEntry::One => {}
                LOperatorEntry::K => {
                    gamma += 1;
                    c += o;
                }
                LOperatorEntry::MinusQK => {
                    negative = !negative;
                    gamma += 1;
                    c += 1 + o;
                }
                LOperatorEntry::APlus => o += 1,
                LOperatorEntry::AMinus => {
                    deltas.push(o);
                    o -= 1;
                }
            }
        }
        let mut trace = Self::default();
        if o != 0 {
            return trace;
        }
        // expand the product over subsets and sum each geometric series in m
        for mask in 0u32..(1 << deltas.len()) {
            let size = mask.count_ones() as i64;
            let shift: i64 = deltas
                .iter()
                .enumerate()
                .filter(|(s, _)| mask >> s & 1 == 1)
                .map(|(_, d)| 2 * d)
                .sum();
            let coeff = if negative ^ (size % 2 == 1) { -1 } else { 1 };
            *trace.terms.entry((c + shift, gamma + 2 * size)).or_insert(0) += coeff;
        }
        trace.terms.retain(|_, v| *v != 0);
        trace
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at numeric `q` and `z`.
    pub fn eval<F: Field>(&self, q: &F, z: &F) -> Result<F> {
        let mut total = F::zero();
        for (&(p, beta), &c) in &self.terms {
            let den = F::one() - powi(q, beta) * z.clone();
            if den.is_zero() {
                return Err(Error::TracePole { beta });
            }
            total = total + F::from_i64(c) * powi(q, p) / den;
        }
        Ok(total)
    }
}

fn word_of(a: &[u32], b: &[u32], i: &[u32], j: &[u32]) -> Vec<LOperatorEntry> {
    (0..a.len()).map(|s| LOperatorEntry::of(a[s], b[s], i[s], j[s])).collect()
}

/// `R(z)^{a,b}_{i,j} = Tr(z^h 𝓛^{a_n,b_n}_{i_n,j_n} ⋯ 𝓛^{a_0,b_0}_{i_0,j_0})` at numeric `q`.
pub fn l_trace<F: Field>(
    q: &F,
    z: &F,
    a: &MultiplicityArray,
    b: &MultiplicityArray,
    i: &MultiplicityArray,
    j: &MultiplicityArray,
) -> Result<F> {
    let lens = [a.n(), b.n(), i.n(), j.n()];
    if lens.iter().any(|&l| l != lens[0]) {
        return Err(Error::Malformed("arrays of different lengths".into()));
    }
    FockTrace::of_word(&word_of(a.entries(), b.entries(), i.entries(), j.entries())).eval(q, z)
}

/// Gauged element with `q^2 = t`: `(1-z)(1-tz)(-q)^{k-1+η} R(q^{1-k} z)`.
fn gauged<F: Field>(k: usize, t: &F, z: &F, a: &MultiplicityArray, b: usize, i: &MultiplicityArray, j: usize) -> Result<F> {
    let n = a.n();
    let eb = MultiplicityArray::unit(n, b, true);
    let ej = MultiplicityArray::unit(n, j, true);
    let trace = FockTrace::of_word(&word_of(a.entries(), eb.entries(), i.entries(), ej.entries()));
    if trace.is_zero() {
        return Ok(F::zero());
    }
    let eta = a.range_sum(b + 1, n as isize) as i64 - i.range_sum(0, j as isize - 1) as i64;
    let gauge = k as i64 - 1 + eta;
    let mut total = F::zero();
    for (&(p, beta), &c) in &trace.terms {
        let power = p + gauge;
        let den_power = beta + 1 - k as i64;
        if power.rem_euclid(2) != 0 {
            return Err(Error::OddQPower(power));
        }
        if den_power.rem_euclid(2) != 0 {
            return Err(Error::OddQPower(den_power));
        }
        let den = F::one() - powi(t, den_power / 2) * z.clone();
        if den.is_zero() {
            return Err(Error::TracePole { beta: den_power });
        }
        let num: F = sign::<F>(gauge) * F::from_i64(c) * powi(t, power / 2);
        total = total + num / den;
    }
    Ok((F::one() - z.clone()) * (F::one() - t.clone() * z.clone()) * total)
}

pub fn s_k1_3d_element<F: Field>(q: &RMatrixElementQuery<F>) -> Result<F> {
    q.validate()?;
    gauged(q.k, &q.t, &q.z, &q.a, q.b, &q.i, q.j)
}

pub fn s_k1_3d<F: Field>(n: usize, k: usize, t: &F, z: &F) -> Result<SparseMatrix<F>> {
    let idx = RIndex::hardcore(n, k)?;
    let mut err = None;
    let m = assemble(&idx, |a, b, i, j| match gauged(k, t, z, a, b, i, j) {
        Ok(v) => v,
        Err(e) => {
            err.get_or_insert(e);
            F::zero()
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(m),
    }
}
