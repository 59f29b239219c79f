//! Row-to-row transfer matrices `T^k(z)` (antisymmetric carriers) and
//! `T_k(z)` (symmetric carriers) with inhomogeneities `x_1..x_L`, their
//! derivatives at the origin, and the operators built from them.

mod signature;

pub use signature::{leading_coefficient, transition_signature, TransitionSignature};

use std::collections::HashMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    elementary_symmetric, elementary_symmetric_signed, enumerate_compositions, enumerate_hardcore, sector_basis,
    sector_constants, u_values, Configuration, MultiplicityArray, SectorBasis, SectorSpec,
};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::processes::ModelParams;
use crate::rmatrix::{closed_weight, sym_weight, LinearWeight};
use crate::scalar::{pow, Field, Ring};
use crate::sparse::SparseMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransferKind {
    #[serde(rename = "antisym")]
    Antisymmetric,
    #[serde(rename = "sym")]
    Symmetric,
}

impl std::str::FromStr for TransferKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "antisym" | "antisymmetric" => Ok(Self::Antisymmetric),
            "sym" | "symmetric" => Ok(Self::Symmetric),
            other => Err(Error::Malformed(format!("unknown transfer kind {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TransferSpec<F> {
    pub kind: TransferKind,
    pub k: usize,
    pub params: ModelParams<F>,
    /// Full space `{0..n}^L` when absent.
    pub sector: Option<SectorSpec>,
}

impl<F: Field> TransferSpec<F> {
    pub fn new(kind: TransferKind, k: usize, params: ModelParams<F>, sector: Option<SectorSpec>) -> Result<Self> {
        let spec = Self { kind, k, params, sector };
        spec.validate()?;
        Ok(spec)
    }

    pub fn antisymmetric(k: usize, params: &ModelParams<F>, sector: &SectorSpec) -> Result<Self> {
        Self::new(TransferKind::Antisymmetric, k, params.clone(), Some(sector.clone()))
    }

    pub fn symmetric(k: usize, params: &ModelParams<F>, sector: &SectorSpec) -> Result<Self> {
        Self::new(TransferKind::Symmetric, k, params.clone(), Some(sector.clone()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == TransferKind::Antisymmetric && self.k > self.params.n + 1 {
            return Err(Error::LevelOutOfRange { n: self.params.n, k: self.k });
        }
        if self.params.x.len() != self.params.l {
            return Err(Error::InvalidParams(format!("x has {} entries, expected L = {}", self.params.x.len(), self.params.l)));
        }
        if let Some(s) = &self.sector {
            self.params.check_sector(s)?;
        }
        Ok(())
    }

    pub fn basis(&self) -> Result<SectorBasis> {
        match &self.sector {
            Some(s) => sector_basis(s),
            None => Ok(SectorBasis::full(self.params.n, self.params.l)),
        }
    }
}

/// Precomputed single-vertex moves: for carrier `c`, vertical input `j` and
/// output `b`, the next carrier and the weight (when nonzero).
struct VertexTable<F> {
    n: usize,
    carriers: Vec<MultiplicityArray>,
    moves: Vec<Option<(usize, LinearWeight<F>)>>,
}

impl<F: Field> VertexTable<F> {
    fn new(kind: TransferKind, n: usize, k: usize, t: &F) -> Result<Self> {
        let carriers = match kind {
            TransferKind::Antisymmetric => enumerate_hardcore(n, k)?,
            TransferKind::Symmetric => enumerate_compositions(n, k),
        };
        let lookup: HashMap<&MultiplicityArray, usize> = carriers.iter().enumerate().map(|(p, a)| (a, p)).collect();
        let mut moves = Vec::with_capacity(carriers.len() * (n + 1) * (n + 1));
        for c in &carriers {
            for j in 0..=n {
                for b in 0..=n {
                    let entry = c.shifted(j, b).and_then(|next| {
                        let w = match kind {
                            TransferKind::Antisymmetric => closed_weight(t, &next, b, c, j),
                            TransferKind::Symmetric => sym_weight(t, &next, b, c, j),
                        };
                        (!w.is_zero()).then(|| (lookup[&next], w))
                    });
                    moves.push(entry);
                }
            }
        }
        Ok(Self { n, carriers, moves })
    }

    fn step(&self, carrier: usize, j: usize, b: usize) -> Option<&(usize, LinearWeight<F>)> {
        self.moves[(carrier * (self.n + 1) + j) * (self.n + 1) + b].as_ref()
    }
}

/// Walks every closed carrier path under the column `sigma` and hands each
/// target together with its per-site weights to `visit`. With `max_z` set,
/// paths carrying more than that many purely linear weights are pruned.
fn walk_column<F: Field>(
    table: &VertexTable<F>,
    sigma: &[usize],
    max_z: Option<usize>,
    visit: &mut dyn FnMut(&[usize], &[LinearWeight<F>]),
) {
    #[allow(clippy::too_many_arguments)]
    fn go<F: Field>(
        table: &VertexTable<F>,
        sigma: &[usize],
        start: usize,
        carrier: usize,
        pure_z: usize,
        max_z: Option<usize>,
        target: &mut Vec<usize>,
        weights: &mut Vec<LinearWeight<F>>,
        visit: &mut dyn FnMut(&[usize], &[LinearWeight<F>]),
    ) {
        let r = target.len();
        if r == sigma.len() {
            if carrier == start {
                visit(target, weights);
            }
            return;
        }
        for b in 0..=table.n {
            let Some((next, w)) = table.step(carrier, sigma[r], b) else {
                continue;
            };
            let pz = pure_z + w.c0.is_zero() as usize;
            if max_z.is_some_and(|m| pz > m) {
                continue;
            }
            target.push(b);
            weights.push(w.clone());
            go(table, sigma, start, *next, pz, max_z, target, weights, visit);
            target.pop();
            weights.pop();
        }
    }
    let mut target = Vec::with_capacity(sigma.len());
    let mut weights = Vec::with_capacity(sigma.len());
    for start in 0..table.carriers.len() {
        go(table, sigma, start, start, 0, max_z, &mut target, &mut weights, visit);
    }
}

/// Assembles a matrix on the spec's basis whose `(σ', σ)` entry is the sum of
/// `f(weights)` over carrier paths.
fn assemble<F: Field, R: Ring>(
    spec: &TransferSpec<F>,
    basis: &SectorBasis,
    max_z: Option<usize>,
    f: impl Fn(&[LinearWeight<F>]) -> R,
) -> Result<SparseMatrix<R>> {
    spec.validate()?;
    let table = VertexTable::new(spec.kind, spec.params.n, spec.k, &spec.params.t)?;
    let dim = basis.len();
    let mut m = SparseMatrix::zeros(dim, dim);
    let mut key = Configuration(Vec::new());
    let mut escaped = None;
    for (c, sigma) in basis.states().iter().enumerate() {
        walk_column(&table, sigma.sites(), max_z, &mut |target, weights| {
            key.0.clear();
            key.0.extend_from_slice(target);
            match basis.index_of(&key) {
                Some(r) => m.add_to(r, c, f(weights)),
                None => {
                    escaped.get_or_insert_with(|| format!("{sigma} -> {key}"));
                }
            }
        });
    }
    match escaped {
        Some(e) => Err(Error::Malformed(format!("transfer matrix leaves the basis: {e}"))),
        None => Ok(m),
    }
}

fn inv_x<F: Field>(params: &ModelParams<F>) -> Vec<F> {
    params.x.iter().map(Field::inv).collect()
}

/// `T(z)` at a rational point.
pub fn transfer_matrix<F: Field>(spec: &TransferSpec<F>, z: &F) -> Result<SparseMatrix<F>> {
    let basis = spec.basis()?;
    transfer_matrix_on(spec, &basis, z)
}

pub fn transfer_matrix_on<F: Field>(spec: &TransferSpec<F>, basis: &SectorBasis, z: &F) -> Result<SparseMatrix<F>> {
    let zx: Vec<F> = inv_x(&spec.params).into_iter().map(|v| v * z.clone()).collect();
    assemble(spec, basis, None, |ws| {
        ws.iter().zip(&zx).fold(F::one(), |acc, (w, p)| acc * w.eval(p))
    })
}

/// `T(z)` with polynomial entries of degree at most `L`.
pub fn transfer_poly<F: Field>(spec: &TransferSpec<F>) -> Result<SparseMatrix<Poly<F>>> {
    let basis = spec.basis()?;
    let ix = inv_x(&spec.params);
    assemble(spec, &basis, None, |ws| {
        ws.iter().zip(&ix).fold(Poly::one(), |acc, (w, inv)| {
            acc * Poly::linear(w.c0.clone(), w.c1.clone() * inv.clone())
        })
    })
}

/// `Σ_j (c1_j / x_j) Π_{r≠j} c0_r`, restricted to `only` when given.
fn linear_coefficient<F: Field>(ws: &[LinearWeight<F>], ix: &[F], only: Option<usize>) -> F {
    let zeros: Vec<usize> = (0..ws.len()).filter(|&r| ws[r].c0.is_zero()).collect();
    let term = |j: usize| {
        ws.iter()
            .enumerate()
            .filter(|&(r, _)| r != j)
            .fold(ws[j].c1.clone() * ix[j].clone(), |acc, (_, w)| acc * w.c0.clone())
    };
    match (zeros.as_slice(), only) {
        ([], None) => (0..ws.len()).fold(F::zero(), |acc, j| acc + term(j)),
        ([], Some(j)) => term(j),
        ([z], None) => term(*z),
        ([z], Some(j)) if *z == j => term(j),
        _ => F::zero(),
    }
}

/// `Ṫ(0)`, the linear coefficient of every entry.
pub fn transfer_dot_zero<F: Field>(spec: &TransferSpec<F>) -> Result<SparseMatrix<F>> {
    let basis = spec.basis()?;
    transfer_dot_zero_on(spec, &basis)
}

pub fn transfer_dot_zero_on<F: Field>(spec: &TransferSpec<F>, basis: &SectorBasis) -> Result<SparseMatrix<F>> {
    let ix = inv_x(&spec.params);
    assemble(spec, basis, Some(1), |ws| linear_coefficient(ws, &ix, None))
}

/// The site-`j` part of `⟨σ'|Ṫ^k(0)|σ⟩`: `Ṡ(0)` at site `j`, `S(0)` elsewhere,
/// summed over carriers, times `1/x_j`.
pub fn transfer_dot_site<F: Field>(
    k: usize,
    spec: &SectorSpec,
    params: &ModelParams<F>,
    j: usize,
    sigma: &Configuration,
    target: &Configuration,
) -> Result<F> {
    params.check_sector(spec)?;
    if !spec.contains(sigma) || !spec.contains(target) {
        return Err(Error::SectorMismatch);
    }
    let table = VertexTable::new(TransferKind::Antisymmetric, params.n, k, &params.t)?;
    Ok(dot_site_with(&table, params, j, sigma, target))
}

fn dot_site_with<F: Field>(table: &VertexTable<F>, params: &ModelParams<F>, j: usize, sigma: &Configuration, target: &Configuration) -> F {
    let ix = inv_x(params);
    let mut total = F::zero();
    walk_column(table, sigma.sites(), Some(1), &mut |t, ws| {
        if t == target.sites() {
            total = total.clone() + linear_coefficient(ws, &ix, Some(j));
        }
    });
    total
}

/// All site terms out of `sigma` at once: `(target, j) -> value`, for levels `k`.
pub fn dot_site_table<F: Field>(
    k: usize,
    params: &ModelParams<F>,
    sigma: &Configuration,
) -> Result<HashMap<(Configuration, usize), F>> {
    let table = VertexTable::new(TransferKind::Antisymmetric, params.n, k, &params.t)?;
    let ix = inv_x(params);
    let mut out: HashMap<(Configuration, usize), F> = HashMap::new();
    walk_column(&table, sigma.sites(), Some(1), &mut |t, ws| {
        for j in 0..ws.len() {
            let v = linear_coefficient(ws, &ix, Some(j));
            if !v.is_zero() {
                let e = out.entry((Configuration(t.to_vec()), j)).or_insert_with(F::zero);
                *e = e.clone() + v;
            }
        }
    });
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// `Σ_{a∈ℬ^k} Π_j t^{a_{σ_j+1}+…+a_n}(1 - t^{a_{σ_j}} z/x_j)`.
pub fn diagonal_formula<F: Field>(k: usize, params: &ModelParams<F>, sigma: &Configuration, z: &F) -> Result<F> {
    let mut total = F::zero();
    for a in enumerate_hardcore(params.n, k)? {
        let mut prod = F::one();
        for (j, &s) in sigma.sites().iter().enumerate() {
            let tail = a.range_sum(s + 1, params.n as isize);
            prod = prod * pow(&params.t, tail) * (F::one() - pow(&params.t, a.get(s)) * z.clone() / params.x[j].clone());
        }
        total = total + prod;
    }
    Ok(total)
}

/// `-Σ_j (1/x_j) e_k(u^{(σ_j)})`, the diagonal of `Ṫ^k(0)`.
pub fn dot_zero_diagonal<F: Field>(k: usize, params: &ModelParams<F>, spec: &SectorSpec, sigma: &Configuration) -> Result<F> {
    let (kv, _) = sector_constants(spec, &params.t)?;
    Ok(sigma.sites().iter().enumerate().fold(F::zero(), |acc, (j, &s)| {
        acc - elementary_symmetric(k, &u_values(s, &kv, &params.t)) / params.x[j].clone()
    }))
}

/// `𝓗 = D_m^{-1} Σ_k (-1)^{k-1} Ṫ^k(0) - (Σ_j 1/x_j) Id` on a sector.
#[allow(non_snake_case)]
pub fn baxter_H<F: Field>(params: &ModelParams<F>, spec: &SectorSpec) -> Result<SparseMatrix<F>> {
    params.check_sector(spec)?;
    let (_, d) = sector_constants(spec, &params.t)?;
    let sum = zeta_sum(params, spec, &F::one())?;
    let basis = sector_basis(spec)?;
    sum.scale(&d.inv()).sub(&SparseMatrix::scalar(basis.len(), params.inv_x_sum()))
}

/// `Σ_{k=0}^{n+1} (-ζ)^{k-1} Ṫ^k(0)`.
pub fn zeta_sum<F: Field>(params: &ModelParams<F>, spec: &SectorSpec, zeta: &F) -> Result<SparseMatrix<F>> {
    if zeta.is_zero() {
        return Err(Error::InvalidParams("zeta must be nonzero".into()));
    }
    let basis = sector_basis(spec)?;
    let mut acc = SparseMatrix::zeros(basis.len(), basis.len());
    let mz = -zeta.clone();
    let mut coeff = mz.inv();
    for k in 0..=params.n + 1 {
        let spec_k = TransferSpec::antisymmetric(k, params, spec)?;
        let dot = transfer_dot_zero_on(&spec_k, &basis)?;
        acc = acc.add(&dot.scale(&coeff))?;
        coeff = coeff * mz.clone();
    }
    Ok(acc)
}

/// `Λ^k(z) = e_{k-1}(t^{K_1..K_n}) Π_j(1 - tz/x_j) + e_k(t^{K_1..K_n}) Π_j(1 - z/x_j)`.
pub fn stationary_eigenvalue<F: Field>(k: usize, params: &ModelParams<F>, spec: &SectorSpec, z: &F) -> Result<F> {
    Ok(stationary_eigenvalue_poly(k, params, spec)?.eval(z))
}

pub fn stationary_eigenvalue_poly<F: Field>(k: usize, params: &ModelParams<F>, spec: &SectorSpec) -> Result<Poly<F>> {
    params.check_sector(spec)?;
    let t = &params.t;
    let w: Vec<F> = spec.k_values()[1..].iter().map(|&kk| pow(t, kk)).collect();
    let prod = |c: &F| {
        params
            .x
            .iter()
            .fold(Poly::one(), |acc, x| acc * Poly::linear(F::one(), -(c.clone() / x.clone())))
    };
    let first = prod(t).scale(&elementary_symmetric_signed(k as i64 - 1, &w));
    let second = prod(&F::one()).scale(&elementary_symmetric(k, &w));
    Ok(first + second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use crate::sparse::commutator;

    fn params(n: usize, x: &[(i64, i64)], t: Rational) -> ModelParams<Rational> {
        ModelParams::new(n, x.len(), t, x.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
    }

    fn cfg(s: &str) -> Configuration {
        Configuration::decode(s).unwrap()
    }

    #[test]
    fn extreme_levels_are_scalar() {
        let p = params(2, &[(1, 1), (2, 3), (5, 1), (7, 2)], rat(1, 3));
        let spec = SectorSpec::new(2, 4, vec![1, 2, 1]).unwrap();
        let z = rat(3, 5);
        let one = rat(1, 1);
        let t0 = transfer_matrix(&TransferSpec::antisymmetric(0, &p, &spec).unwrap(), &z).unwrap();
        let expect0 = p.x.iter().fold(one.clone(), |acc, x| acc * (&one - &z / x));
        assert_eq!(t0, SparseMatrix::scalar(12, expect0));
        let t3 = transfer_matrix(&TransferSpec::antisymmetric(3, &p, &spec).unwrap(), &z).unwrap();
        // K = (0, 1, 3)
        let expect3 = p.x.iter().fold(pow(&p.t, 4), |acc, x| acc * (&one - &p.t * &z / x));
        assert_eq!(t3, SparseMatrix::scalar(12, expect3));
    }

    #[test]
    fn example_coefficient_of_level_one() {
        for (t, z) in [(rat(1, 3), rat(2, 5)), (rat(2, 7), rat(-3, 4)), (rat(5, 9), rat(7, 3))] {
            let p = params(2, &[(1, 1), (2, 3), (5, 1), (7, 2)], t.clone());
            let spec = SectorSpec::new(2, 4, vec![1, 2, 1]).unwrap();
            let basis = sector_basis(&spec).unwrap();
            let m = transfer_matrix(&TransferSpec::antisymmetric(1, &p, &spec).unwrap(), &z).unwrap();
            let one = rat(1, 1);
            let got = m.get(basis.index_of(&cfg("1012")).unwrap(), basis.index_of(&cfg("0121")).unwrap());
            assert_eq!(got, pow(&(&one - &t), 4) * &z * &z / (&p.x[1] * &p.x[2]));
        }
    }

    #[test]
    fn poly_agrees_with_pointwise_and_degree_bound() {
        let p = params(2, &[(1, 1), (3, 2), (2, 5)], rat(2, 3));
        for k in 0..=3 {
            let spec = TransferSpec::new(TransferKind::Antisymmetric, k, p.clone(), None).unwrap();
            let poly = transfer_poly(&spec).unwrap();
            assert!(poly.entries().all(|(_, _, e)| e.degree().unwrap_or(0) <= 3));
            for z in [rat(1, 2), rat(-7, 3)] {
                assert_eq!(poly.eval(&z), transfer_matrix(&spec, &z).unwrap());
            }
            assert_eq!(poly.coefficient(1), transfer_dot_zero(&spec).unwrap());
        }
    }

    #[test]
    fn value_at_zero_is_elementary_symmetric() {
        let p = params(2, &[(1, 1), (2, 1), (3, 1), (5, 4)], rat(1, 2));
        for spec in SectorSpec::all(2, 4) {
            let kv: Vec<Rational> = spec.k_values().iter().map(|&k| pow(&p.t, k)).collect();
            for k in 0..=3 {
                let m = transfer_matrix(&TransferSpec::antisymmetric(k, &p, &spec).unwrap(), &rat(0, 1)).unwrap();
                let n = m.nrows();
                assert_eq!(m, SparseMatrix::scalar(n, elementary_symmetric(k, &kv)));
            }
        }
    }

    #[test]
    fn diagonal_matches_closed_sums() {
        let p = params(2, &[(1, 1), (2, 1), (3, 1), (5, 4)], rat(3, 5));
        let z = rat(2, 7);
        for spec in SectorSpec::all(2, 4) {
            let basis = sector_basis(&spec).unwrap();
            for k in 0..=3 {
                let ts = TransferSpec::antisymmetric(k, &p, &spec).unwrap();
                let m = transfer_matrix(&ts, &z).unwrap();
                let dot = transfer_dot_zero(&ts).unwrap();
                for (i, s) in basis.states().iter().enumerate() {
                    assert_eq!(m.get(i, i), diagonal_formula(k, &p, s, &z).unwrap());
                    assert_eq!(dot.get(i, i), dot_zero_diagonal(k, &p, &spec, s).unwrap());
                }
            }
        }
    }

    #[test]
    fn level_one_commutes_with_level_two() {
        let p = params(2, &[(1, 1), (2, 3), (5, 1), (7, 2)], rat(1, 3));
        let spec = SectorSpec::new(2, 4, vec![1, 2, 1]).unwrap();
        let a = transfer_matrix(&TransferSpec::antisymmetric(1, &p, &spec).unwrap(), &rat(2, 9)).unwrap();
        let b = transfer_matrix(&TransferSpec::antisymmetric(2, &p, &spec).unwrap(), &rat(-5, 3)).unwrap();
        assert!(commutator(&a, &b).unwrap().is_zero());
    }

    #[test]
    fn symmetric_low_levels_match_antisymmetric() {
        let p = params(2, &[(1, 1), (2, 3), (5, 1), (7, 2)], rat(1, 3));
        let spec = SectorSpec::new(2, 4, vec![1, 2, 1]).unwrap();
        let z = rat(4, 11);
        for k in 0..=1 {
            let a = transfer_matrix(&TransferSpec::antisymmetric(k, &p, &spec).unwrap(), &z).unwrap();
            let s = transfer_matrix(&TransferSpec::symmetric(k, &p, &spec).unwrap(), &z).unwrap();
            assert_eq!(a, s);
        }
    }

    #[test]
    fn site_terms_sum_to_dot_zero() {
        let p = params(2, &[(1, 1), (2, 3), (5, 1), (7, 2)], rat(2, 5));
        let spec = SectorSpec::new(2, 4, vec![1, 2, 1]).unwrap();
        let basis = sector_basis(&spec).unwrap();
        for k in 0..=3 {
            let dot = transfer_dot_zero(&TransferSpec::antisymmetric(k, &p, &spec).unwrap()).unwrap();
            for (c, s) in basis.states().iter().enumerate() {
                for (r, tg) in basis.states().iter().enumerate() {
                    let sum = (0..4).fold(rat(0, 1), |acc, j| acc + transfer_dot_site(k, &spec, &p, j, s, tg).unwrap());
                    assert_eq!(sum, dot.get(r, c));
                }
            }
        }
    }

    #[test]
    fn eigenvalue_special_levels() {
        let p = params(2, &[(1, 1), (2, 3), (5, 1), (7, 2)], rat(2, 5));
        let spec = SectorSpec::new(2, 4, vec![1, 2, 1]).unwrap();
        let z = rat(1, 7);
        let one = rat(1, 1);
        let l0 = stationary_eigenvalue(0, &p, &spec, &z).unwrap();
        assert_eq!(l0, p.x.iter().fold(one.clone(), |acc, x| acc * (&one - &z / x)));
        let l3 = stationary_eigenvalue(3, &p, &spec, &z).unwrap();
        assert_eq!(l3, p.x.iter().fold(pow(&p.t, 4), |acc, x| acc * (&one - &p.t * &z / x)));
        // Σ_k (-1)^{k-1} dΛ^k/dz at 0 = D_m Σ 1/x_j
        let (_, d) = sector_constants(&spec, &p.t).unwrap();
        let mut s = rat(0, 1);
        for k in 0..=3 {
            let c = stationary_eigenvalue_poly(k, &p, &spec).unwrap().coeff(1);
            s = if k % 2 == 1 { s + c } else { s - c };
        }
        assert_eq!(s, d * p.inv_x_sum());
    }
}
