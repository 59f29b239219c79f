//! Markov generators on a sector: the t-PushTASEP from its transition rules,
//! an exact enumeration of its cascade dynamics, and the multispecies ASEP.
//!
//! Sites are 0-based throughout; site `j` here is site `j + 1` on the ring
//! `1..=L`. Matrices follow the column convention of [`SparseMatrix`]:
//! entry `(target, source)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{sector_basis, sector_constants, Configuration, SectorBasis, SectorSpec};
use crate::error::{Error, Result};
use crate::linalg::kernel_basis;
use crate::scalar::{pow, Field};
use crate::sparse::SparseMatrix;

/// Species count, ring length, `t` and the site inhomogeneities `x_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams<F> {
    pub n: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub t: F,
    pub x: Vec<F>,
}

impl<F: Field + PartialOrd> ModelParams<F> {
    pub fn new(n: usize, l: usize, t: F, x: Vec<F>) -> Result<Self> {
        let p = Self { n, l, t, x };
        p.validate()?;
        Ok(p)
    }

    /// Homogeneous inhomogeneities `x_j = 1`.
    pub fn homogeneous(n: usize, l: usize, t: F) -> Result<Self> {
        Self::new(n, l, t, vec![F::one(); l])
    }

    pub fn validate(&self) -> Result<()> {
        if self.l < 2 {
            return Err(Error::InvalidParams(format!("L = {} but the ring needs L >= 2", self.l)));
        }
        if self.x.len() != self.l {
            return Err(Error::InvalidParams(format!("x has {} entries, expected L = {}", self.x.len(), self.l)));
        }
        if let Some(j) = self.x.iter().position(|v| *v <= F::zero()) {
            return Err(Error::InvalidParams(format!("x_{} = {} is not positive", j + 1, self.x[j])));
        }
        if self.t.is_zero() || self.t == F::one() || self.t == -F::one() {
            return Err(Error::InvalidParams(format!("t = {} is excluded (0, 1 and -1 are degenerate)", self.t)));
        }
        Ok(())
    }
}

impl<F: Field> ModelParams<F> {
    pub fn check_sector(&self, spec: &SectorSpec) -> Result<()> {
        if spec.n != self.n || spec.l != self.l {
            return Err(Error::InvalidSector(format!(
                "sector has n={}, L={} but the model has n={}, L={}",
                spec.n, spec.l, self.n, self.l
            )));
        }
        spec.validate()
    }

    pub fn inv_x_sum(&self) -> F {
        self.x.iter().fold(F::zero(), |acc, x| acc + x.inv())
    }
}

/// One nonzero summand of the generator: activation at `site` sends
/// `source` to `target` with rate `(1/x_site) Π_h factors[h-1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionRecord<F> {
    pub source: Configuration,
    pub target: Configuration,
    pub site: usize,
    pub factors: Vec<F>,
    pub rate: F,
}

/// Number of sites strictly inside the clockwise interval `(p, p')` whose
/// value in `sigma` is smaller than `h`.
pub fn ell_count(sigma: &Configuration, h: usize, p: usize, p_prime: usize) -> u32 {
    let l = sigma.len();
    let mut s = (p + 1) % l;
    let mut count = 0;
    while s != p_prime && s != p {
        if sigma.sites()[s] < h {
            count += 1;
        }
        s = (s + 1) % l;
    }
    count
}

/// Per-species factors `w^{(j)}(h)`, `h = 1..=n`, or `None` when the
/// structural conditions fail.
fn species_factors<F: Field>(sigma: &Configuration, target: &Configuration, j: usize, n: usize, t: &F, k: &[u32]) -> Option<Vec<F>> {
    let (s, sp) = (sigma.sites(), target.sites());
    if s == sp {
        return None;
    }
    // j must be the unique site emptied, and no other site may lose strength
    for i in 0..s.len() {
        let emptied = s[i] >= 1 && sp[i] == 0;
        if emptied != (i == j) {
            return None;
        }
        if i != j && s[i] > sp[i] {
            return None;
        }
    }
    let mut factors = Vec::with_capacity(n);
    for h in 1..=n {
        let left: Vec<usize> = (0..s.len()).filter(|&i| s[i] == h && sp[i] != h).collect();
        let arrived: Vec<usize> = (0..s.len()).filter(|&i| sp[i] == h && s[i] != h).collect();
        match (left.as_slice(), arrived.as_slice()) {
            ([], []) => factors.push(F::one()),
            ([p], [pp]) => {
                let ell = ell_count(sigma, h, *p, *pp);
                factors.push((F::one() - t.clone()) * pow(t, ell) / (F::one() - pow(t, k[h])));
            }
            _ => return None,
        }
    }
    Some(factors)
}

/// The activation-at-`j` summand of the `(target, sigma)` generator entry.
pub fn transition_rate<F: Field>(sigma: &Configuration, target: &Configuration, j: usize, params: &ModelParams<F>) -> Result<F> {
    transition_record(sigma, target, j, params).map(|r| r.map_or_else(F::zero, |r| r.rate))
}

pub fn transition_record<F: Field>(
    sigma: &Configuration,
    target: &Configuration,
    j: usize,
    params: &ModelParams<F>,
) -> Result<Option<TransitionRecord<F>>> {
    let n = params.n;
    if sigma.len() != params.l || target.len() != params.l {
        return Err(Error::InvalidParams(format!("configurations must have length L = {}", params.l)));
    }
    if sigma.counts(n) != target.counts(n) {
        return Err(Error::SectorMismatch);
    }
    // K_h = m_0 + ... + m_{h-1}; species absent from sigma never move
    let k: Vec<u32> = sigma
        .counts(n)
        .iter()
        .scan(0u32, |acc, &m| {
            let out = *acc;
            *acc += m as u32;
            Some(out)
        })
        .collect();
    Ok(species_factors(sigma, target, j, n, &params.t, &k).map(|factors| {
        let rate = factors.iter().fold(params.x[j].inv(), |acc, w| acc * w.clone());
        TransitionRecord {
            source: sigma.clone(),
            target: target.clone(),
            site: j,
            factors,
            rate,
        }
    }))
}

/// `H_PushTASEP` on a sector, together with its basis.
pub fn pushtasep_markov<F: Field>(params: &ModelParams<F>, spec: &SectorSpec) -> Result<SparseMatrix<F>> {
    Ok(pushtasep_markov_with_basis(params, spec)?.0)
}

pub fn pushtasep_markov_with_basis<F: Field>(params: &ModelParams<F>, spec: &SectorSpec) -> Result<(SparseMatrix<F>, SectorBasis)> {
    params.check_sector(spec)?;
    let (k, _) = sector_constants(spec, &params.t)?;
    let basis = sector_basis(spec)?;
    let dim = basis.len();
    let inv_x: Vec<F> = params.x.iter().map(Field::inv).collect();
    let mut m = SparseMatrix::zeros(dim, dim);
    for (c, sigma) in basis.states().iter().enumerate() {
        let mut diag = F::zero();
        for j in 0..params.l {
            if sigma.sites()[j] == 0 {
                continue;
            }
            diag = diag - inv_x[j].clone();
            for (r, target) in basis.states().iter().enumerate() {
                if let Some(w) = species_factors(sigma, target, j, params.n, &params.t, &k) {
                    let rate = w.into_iter().fold(inv_x[j].clone(), |acc, f| acc * f);
                    m.add_to(r, c, rate);
                }
            }
        }
        m.add_to(c, c, diag);
    }
    Ok((m, basis))
}

/// The stationary vector on the sector basis, normalized to sum 1.
pub fn stationary_state<F: Field>(params: &ModelParams<F>, spec: &SectorSpec) -> Result<Vec<F>> {
    let h = pushtasep_markov(params, spec)?;
    let mut kernel = kernel_basis(&h)?;
    if kernel.len() != 1 {
        return Err(Error::KernelDimension(kernel.len()));
    }
    let mut v = kernel.pop().unwrap();
    let total = v.iter().fold(F::zero(), |acc, x| acc + x.clone());
    for x in v.iter_mut() {
        *x = x.clone() / total.clone();
    }
    Ok(v)
}

/// Every nonzero transition out of the sector's states, sorted by source
/// then target then site.
pub fn transition_listing<F: Field>(params: &ModelParams<F>, spec: &SectorSpec) -> Result<Vec<TransitionRecord<F>>> {
    params.check_sector(spec)?;
    let basis = sector_basis(spec)?;
    let mut out = Vec::new();
    for sigma in basis.states() {
        for target in basis.states() {
            for j in 0..params.l {
                if let Some(rec) = transition_record(sigma, target, j, params)? {
                    out.push(rec);
                }
            }
        }
    }
    Ok(out)
}

/// Exact outcome distribution of the cascade triggered by activating site `j`.
///
/// The moving particle of type `h` ranks the sites ahead of it whose value in
/// the initial configuration is below `h` and settles on the `i`-th with
/// probability `t^{i-1}(1-t)/(1-t^z)`, `z` being their number. The emptied
/// site `j` keeps its initial value for this ranking, so it is never a target
/// during its own cascade.
pub fn cascade_distribution<F: Field>(sigma: &Configuration, j: usize, t: &F) -> Result<BTreeMap<Configuration, F>> {
    let s = sigma.sites();
    if s[j] == 0 {
        return Err(Error::EmptySite { site: j });
    }
    let mut out = BTreeMap::new();
    if !s.contains(&0) {
        // without a vacancy a cascade can never terminate: no transition
        return Ok(out);
    }
    let mut cur = s.to_vec();
    cur[j] = 0;
    cascade_step(s, &mut cur, j, s[j], F::one(), t, &mut out)?;
    Ok(out)
}

fn cascade_step<F: Field>(
    initial: &[usize],
    cur: &mut Vec<usize>,
    pos: usize,
    h: usize,
    prob: F,
    t: &F,
    out: &mut BTreeMap<Configuration, F>,
) -> Result<()> {
    let l = initial.len();
    let ahead: Vec<usize> = (1..l).map(|d| (pos + d) % l).filter(|&s| initial[s] < h).collect();
    let z = ahead.len() as u32;
    let norm = F::one() - pow(t, z);
    if norm.is_zero() {
        return Err(Error::DegenerateT(t.to_string()));
    }
    let mut ti = F::one();
    for &site in &ahead {
        let p = prob.clone() * ti.clone() * (F::one() - t.clone()) / norm.clone();
        ti = ti * t.clone();
        let displaced = cur[site];
        cur[site] = h;
        if displaced == 0 {
            let key = Configuration(cur.clone());
            let acc = out.remove(&key).unwrap_or_else(F::zero) + p;
            out.insert(key, acc);
        } else {
            cascade_step(initial, cur, site, displaced, p, t, out)?;
        }
        cur[site] = displaced;
    }
    Ok(())
}

/// Multispecies ASEP generator on a sector: every bond `(i, i+1 mod L)`
/// swaps `(α, β) → (β, α)` at rate `t^{[α > β]}`.
pub fn asep_markov<F: Field>(n: usize, l: usize, t: &F, spec: &SectorSpec) -> Result<SparseMatrix<F>> {
    if spec.n != n || spec.l != l {
        return Err(Error::InvalidSector(format!("sector does not match n={n}, L={l}")));
    }
    let basis = sector_basis(spec)?;
    Ok(asep_on_basis(&basis, t))
}

pub(crate) fn asep_on_basis<F: Field>(basis: &SectorBasis, t: &F) -> SparseMatrix<F> {
    let dim = basis.len();
    let l = basis.l;
    let mut m = SparseMatrix::zeros(dim, dim);
    for (c, sigma) in basis.states().iter().enumerate() {
        for i in 0..l {
            let (p, q) = (i, (i + 1) % l);
            let (alpha, beta) = (sigma.sites()[p], sigma.sites()[q]);
            if alpha == beta {
                continue;
            }
            let rate = if alpha > beta { t.clone() } else { F::one() };
            let mut swapped = sigma.clone();
            swapped.0.swap(p, q);
            let r = basis.index_of(&swapped).expect("swap stays in the sector");
            m.add_to(r, c, rate.clone());
            m.add_to(c, c, -rate);
        }
    }
    m
}

/// `𝒞|σ_1, ..., σ_L⟩ = |σ_L, σ_1, ..., σ_{L-1}⟩` on the basis.
pub fn cyclic_shift_matrix<F: Field>(basis: &SectorBasis) -> SparseMatrix<F> {
    SparseMatrix::from_triplets(
        basis.len(),
        basis.len(),
        basis.states().iter().enumerate().map(|(c, s)| {
            let r = basis.index_of(&s.cyclic_shift()).expect("shift stays in the basis");
            (r, c, F::one())
        }),
    )
}
