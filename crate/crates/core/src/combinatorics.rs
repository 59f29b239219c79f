//! Index sets: 0/1 multiplicity arrays and tableaux, compositions, particle
//! sectors, the constants `K_i` and `D_m`, and elementary symmetric
//! polynomials.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{pow, Field};

/// Level-`k` auxiliary state: multiplicities `(i_0, ..., i_n)` of the letters
/// `0..=n`. Hardcore arrays have entries in `{0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiplicityArray {
    entries: Vec<u32>,
    hardcore: bool,
}

impl MultiplicityArray {
    pub fn new(entries: Vec<u32>, hardcore: bool) -> Result<Self> {
        if hardcore && entries.iter().any(|&e| e > 1) {
            return Err(Error::NotHardcore(entries));
        }
        Ok(Self { entries, hardcore })
    }

    pub fn hardcore(entries: Vec<u32>) -> Result<Self> {
        Self::new(entries, true)
    }

    pub fn composition(entries: Vec<u32>) -> Self {
        Self {
            entries,
            hardcore: false,
        }
    }

    pub fn zero(n: usize, hardcore: bool) -> Self {
        Self {
            entries: vec![0; n + 1],
            hardcore,
        }
    }

    /// The unit array `e_alpha`.
    pub fn unit(n: usize, alpha: usize, hardcore: bool) -> Self {
        let mut a = Self::zero(n, hardcore);
        a.entries[alpha] = 1;
        a
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn is_hardcore(&self) -> bool {
        self.hardcore
    }

    pub fn n(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn level(&self) -> u32 {
        self.entries.iter().sum()
    }

    pub fn get(&self, alpha: usize) -> u32 {
        self.entries[alpha]
    }

    /// `a_lo + ... + a_hi` over the inclusive range; empty when `lo > hi`.
    pub fn range_sum(&self, lo: usize, hi: isize) -> u32 {
        if hi < lo as isize {
            return 0;
        }
        self.entries[lo..=hi as usize].iter().sum()
    }

    /// `self + e_plus - e_minus`, or `None` if that leaves the index set.
    pub fn shifted(&self, plus: usize, minus: usize) -> Option<Self> {
        if plus == minus {
            return Some(self.clone());
        }
        if self.entries[minus] == 0 || (self.hardcore && self.entries[plus] == 1) {
            return None;
        }
        let mut out = self.clone();
        out.entries[plus] += 1;
        out.entries[minus] -= 1;
        Some(out)
    }
}

impl Serialize for MultiplicityArray {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(serializer)
    }
}

impl fmt::Display for MultiplicityArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Column-strict tableau: strictly increasing letters from `0..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tableau(Vec<usize>);

impl Tableau {
    pub fn new(letters: Vec<usize>) -> Result<Self> {
        if letters.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Malformed(format!("tableau letters {letters:?} not strictly increasing")));
        }
        Ok(Self(letters))
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }
}

/// All 0/1 arrays of length `n + 1` with `k` ones, in lexicographic order.
pub fn enumerate_hardcore(n: usize, k: usize) -> Result<Vec<MultiplicityArray>> {
    if k > n + 1 {
        return Err(Error::LevelOutOfRange { n, k });
    }
    Ok(enumerate_arrays(n + 1, k as u32, 1)
        .into_iter()
        .map(|e| MultiplicityArray {
            entries: e,
            hardcore: true,
        })
        .collect())
}

/// All nonnegative arrays of length `n + 1` summing to `k`, lexicographic.
pub fn enumerate_compositions(n: usize, k: usize) -> Vec<MultiplicityArray> {
    enumerate_arrays(n + 1, k as u32, k as u32)
        .into_iter()
        .map(MultiplicityArray::composition)
        .collect()
}

fn enumerate_arrays(len: usize, total: u32, cap: u32) -> Vec<Vec<u32>> {
    fn go(pos: usize, left: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let len = cur.len();
        if pos == len {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let remaining_slots = (len - pos - 1) as u32;
        for v in 0..=cap.min(left) {
            if left - v > remaining_slots * cap {
                continue;
            }
            cur[pos] = v;
            go(pos + 1, left - v, cap, cur, out);
        }
        cur[pos] = 0;
    }
    let mut out = Vec::new();
    go(0, total, cap, &mut vec![0; len], &mut out);
    out
}

/// Letters `alpha` with `a_alpha = 1`.
pub fn tableau_of(a: &MultiplicityArray) -> Result<Tableau> {
    if a.entries.iter().any(|&e| e > 1) {
        return Err(Error::NotHardcore(a.entries.clone()));
    }
    Ok(Tableau(
        a.entries
            .iter()
            .enumerate()
            .filter(|(_, &e)| e == 1)
            .map(|(i, _)| i)
            .collect(),
    ))
}

pub fn multiplicity_of(t: &Tableau, n: usize) -> Result<MultiplicityArray> {
    let mut a = MultiplicityArray::zero(n, true);
    for &l in &t.0 {
        if l > n {
            return Err(Error::Malformed(format!("letter {l} exceeds n={n}")));
        }
        a.entries[l] = 1;
    }
    Ok(a)
}

/// `e_k(ws)`; zero for `k > ws.len()`.
pub fn elementary_symmetric<F: Field>(k: usize, ws: &[F]) -> F {
    // e[j] after processing a prefix holds e_j of that prefix
    let mut e = vec![F::zero(); k + 1];
    e[0] = F::one();
    for w in ws {
        for j in (1..=k).rev() {
            e[j] = e[j].clone() + e[j - 1].clone() * w.clone();
        }
    }
    e.swap_remove(k)
}

/// `e_k` with a possibly negative index (zero below 0).
pub fn elementary_symmetric_signed<F: Field>(k: i64, ws: &[F]) -> F {
    if k < 0 {
        F::zero()
    } else {
        elementary_symmetric(k as usize, ws)
    }
}

/// A ring configuration `(sigma_1, ..., sigma_L)`; sites are 0-based here.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Configuration(pub Vec<usize>);

impl Configuration {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sites(&self) -> &[usize] {
        &self.0
    }

    /// Digit string for `n <= 9`, comma-separated otherwise.
    pub fn encode(&self, n: usize) -> String {
        if n <= 9 {
            self.0.iter().map(|d| char::from(b'0' + *d as u8)).collect()
        } else {
            self.0.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
        }
    }

    pub fn decode(s: &str) -> Result<Self> {
        let bad = || Error::Malformed(format!("configuration {s:?}"));
        if s.contains(',') {
            s.split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()
                .map(Configuration)
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<Vec<_>>>()
                .map(Configuration)
        }
    }

    /// `(sigma_L, sigma_1, ..., sigma_{L-1})`.
    pub fn cyclic_shift(&self) -> Self {
        let mut v = self.0.clone();
        v.rotate_right(1);
        Configuration(v)
    }

    pub fn counts(&self, n: usize) -> Vec<usize> {
        let mut m = vec![0; n + 1];
        for &s in &self.0 {
            m[s] += 1;
        }
        m
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.0.iter().copied().max().unwrap_or(0);
        write!(f, "|{}>", self.encode(n))
    }
}

/// Species counts `m = (m_0, ..., m_n)` on a ring of length `L`, all `m_i >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SectorSpec {
    pub n: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub m: Vec<usize>,
}

impl SectorSpec {
    pub fn new(n: usize, l: usize, m: Vec<usize>) -> Result<Self> {
        let spec = Self { n, l, m };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m.len() != self.n + 1 {
            return Err(Error::InvalidSector(format!(
                "m has {} entries, expected n+1 = {}",
                self.m.len(),
                self.n + 1
            )));
        }
        if let Some(i) = self.m.iter().position(|&c| c == 0) {
            return Err(Error::InvalidSector(format!("m_{i} = 0; every species must be present")));
        }
        let total: usize = self.m.iter().sum();
        if total != self.l {
            return Err(Error::InvalidSector(format!("sum of m is {total}, expected L = {}", self.l)));
        }
        Ok(())
    }

    /// `K_i = m_0 + ... + m_{i-1}`, `K_0 = 0`.
    pub fn k_values(&self) -> Vec<u32> {
        let mut acc = 0u32;
        self.m
            .iter()
            .map(|&c| {
                let k = acc;
                acc += c as u32;
                k
            })
            .collect()
    }

    pub fn contains(&self, c: &Configuration) -> bool {
        c.len() == self.l && c.0.iter().all(|&s| s <= self.n) && c.counts(self.n) == self.m
    }

    /// Every valid sector (all `m_i >= 1`) for the given `n` and `L`, in
    /// increasing order of sector size.
    pub fn all(n: usize, l: usize) -> Vec<SectorSpec> {
        if l < n + 1 {
            return Vec::new();
        }
        let mut specs: Vec<SectorSpec> = enumerate_arrays(n + 1, (l - n - 1) as u32, (l - n - 1) as u32)
            .into_iter()
            .map(|extra| SectorSpec {
                n,
                l,
                m: extra.iter().map(|&e| e as usize + 1).collect(),
            })
            .collect();
        specs.sort_by_key(|s| (s.size(), s.m.clone()));
        specs
    }

    /// Multinomial `L! / (m_0! ... m_n!)`.
    pub fn size(&self) -> usize {
        let mut acc: u128 = 1;
        let mut placed = 0u128;
        for &c in &self.m {
            for i in 1..=c as u128 {
                placed += 1;
                acc = acc * placed / i;
            }
        }
        acc as usize
    }
}

/// Ordered basis of a sector (or of the whole space `{0..n}^L`).
#[derive(Clone, Debug)]
pub struct SectorBasis {
    pub n: usize,
    pub l: usize,
    spec: Option<SectorSpec>,
    states: Vec<Configuration>,
    index: HashMap<Configuration, usize>,
}

impl SectorBasis {
    pub fn spec(&self) -> Option<&SectorSpec> {
        self.spec.as_ref()
    }

    pub fn states(&self) -> &[Configuration] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, c: &Configuration) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn state(&self, i: usize) -> &Configuration {
        &self.states[i]
    }

    /// All of `{0..n}^L`, lexicographic.
    pub fn full(n: usize, l: usize) -> Self {
        let states = enumerate_words(n, l, None);
        Self::from_states(n, l, None, states)
    }

    fn from_states(n: usize, l: usize, spec: Option<SectorSpec>, states: Vec<Configuration>) -> Self {
        let index = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Self {
            n,
            l,
            spec,
            states,
            index,
        }
    }
}

fn enumerate_words(n: usize, l: usize, counts: Option<&[usize]>) -> Vec<Configuration> {
    fn go(l: usize, n: usize, left: &mut Option<Vec<usize>>, cur: &mut Vec<usize>, out: &mut Vec<Configuration>) {
        if cur.len() == l {
            out.push(Configuration(cur.clone()));
            return;
        }
        for s in 0..=n {
            if let Some(left) = left.as_mut() {
                if left[s] == 0 {
                    continue;
                }
                left[s] -= 1;
            }
            cur.push(s);
            go(l, n, left, cur, out);
            cur.pop();
            if let Some(left) = left.as_mut() {
                left[s] += 1;
            }
        }
    }
    let mut out = Vec::new();
    go(l, n, &mut counts.map(<[usize]>::to_vec), &mut Vec::with_capacity(l), &mut out);
    out
}

/// Lexicographically ordered basis of the sector.
pub fn sector_basis(spec: &SectorSpec) -> Result<SectorBasis> {
    spec.validate()?;
    let states = enumerate_words(spec.n, spec.l, Some(&spec.m));
    Ok(SectorBasis::from_states(spec.n, spec.l, Some(spec.clone()), states))
}

/// `(K, D_m)` with `D_m = (1-t) prod_{i=1..n} (1 - t^{K_i})`.
pub fn sector_constants<F: Field>(spec: &SectorSpec, t: &F) -> Result<(Vec<u32>, F)> {
    spec.validate()?;
    let k = spec.k_values();
    let d = k[1..]
        .iter()
        .fold(F::one() - t.clone(), |acc, &ki| acc * (F::one() - pow(t, ki)));
    if t.is_zero() || d.is_zero() {
        return Err(Error::DegenerateT(t.to_string()));
    }
    Ok((k, d))
}

/// `u^{(sigma)}_i = t^{delta_{i,sigma} + K_i}`.
pub fn u_values<F: Field>(sigma: usize, k_values: &[u32], t: &F) -> Vec<F> {
    k_values
        .iter()
        .enumerate()
        .map(|(i, &ki)| pow(t, ki + (i == sigma) as u32))
        .collect()
}
