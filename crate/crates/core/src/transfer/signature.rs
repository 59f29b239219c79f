//! The shape of an off-diagonal site term `x_j⟨σ'|Ṫ^k(0)|σ⟩_j`: which types
//! move, along which arrows, and the smallest carrier level that supports it.

use serde::Serialize;

use crate::combinatorics::{Configuration, MultiplicityArray};
use crate::error::{Error, Result};
use crate::processes::ell_count;
use crate::scalar::{pow, Field};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitionSignature {
    /// Changed sites in cyclic order starting at `j`.
    pub sites: Vec<usize>,
    /// `(r_i, s_i) = (σ, σ')` at each changed site.
    pub arrows: Vec<(usize, usize)>,
    /// `h_0 < h_1 < … < h_g`.
    pub moved: Vec<usize>,
    /// Carriers entering each changed site, starting from the minimal one.
    pub carriers: Vec<MultiplicityArray>,
    /// Lowest level with a nonzero term.
    pub depth: usize,
    /// `ℓ_h` for each moved type, aligned with `moved`.
    pub ell: Vec<u32>,
}

impl TransitionSignature {
    /// The smallest moved type is the empty type exactly when a site is
    /// vacated, i.e. when the term corresponds to a PushTASEP jump.
    pub fn is_wanted(&self) -> bool {
        self.moved[0] == 0
    }

    /// Types that do not move.
    pub fn unmoved(&self, n: usize) -> Vec<usize> {
        (0..=n).filter(|h| !self.moved.contains(h)).collect()
    }
}

/// Returns the signature when `(σ, σ', j)` satisfies the structural
/// conditions for a nonvanishing site term, `None` otherwise.
pub fn transition_signature(
    n: usize,
    sigma: &Configuration,
    target: &Configuration,
    j: usize,
) -> Result<Option<TransitionSignature>> {
    let l = sigma.len();
    if target.len() != l || sigma.counts(n) != target.counts(n) {
        return Err(Error::SectorMismatch);
    }
    if j >= l {
        return Err(Error::InvalidParams(format!("site {j} out of range for L = {l}")));
    }
    let (s, sp) = (sigma.sites(), target.sites());
    let sites: Vec<usize> = (0..l).map(|o| (j + o) % l).filter(|&i| s[i] != sp[i]).collect();
    if sites.first() != Some(&j) {
        return Ok(None);
    }
    let arrows: Vec<(usize, usize)> = sites.iter().map(|&i| (s[i], sp[i])).collect();
    let mut moved: Vec<usize> = arrows.iter().map(|a| a.0).collect();
    moved.sort_unstable();
    if moved.windows(2).any(|w| w[0] == w[1]) {
        return Ok(None);
    }
    let mut arrived: Vec<usize> = arrows.iter().map(|a| a.1).collect();
    arrived.sort_unstable();
    if arrived != moved {
        return Ok(None);
    }
    let g = moved.len() - 1;
    if arrows[0] != (moved[g], moved[0]) {
        return Ok(None);
    }
    let rank = |h: usize| moved.binary_search(&h).expect("moved type");
    if arrows[1..].iter().any(|&(r, s)| rank(s) != rank(r) + 1) {
        return Ok(None);
    }

    let mut start = vec![0u32; n + 1];
    start[arrows[0].1] = 1;
    for i in 1..=g {
        let si = arrows[i].1;
        if !arrows[..i].iter().any(|a| a.0 == si) {
            start[si] = 1;
        }
    }
    let mut carriers = vec![MultiplicityArray::hardcore(start).expect("0/1 entries")];
    for &(r, s) in &arrows[..g] {
        let next = carriers.last().unwrap().shifted(r, s).expect("carrier stays hardcore");
        carriers.push(next);
    }
    let depth = carriers[0].level() as usize;

    let ell = moved
        .iter()
        .map(|&h| {
            let p = sites[arrows.iter().position(|a| a.0 == h).unwrap()];
            let pp = sites[arrows.iter().position(|a| a.1 == h).unwrap()];
            ell_count(sigma, h, p, pp)
        })
        .collect();
    Ok(Some(TransitionSignature { sites, arrows, moved, carriers, depth, ell }))
}

/// `(-1)^{d-1} t^{ℓ_{h_0}} (1-t) Π_{i≥1} (1-t) t^{ℓ_{h_i}}`, the value of
/// `x_j⟨σ'|Ṫ^d(0)|σ⟩_j` at the minimal level. `ℓ_{h_0}` vanishes for wanted terms.
pub fn leading_coefficient<F: Field>(sig: &TransitionSignature, t: &F) -> F {
    let one_minus = F::one() - t.clone();
    let base = sig.ell[1..]
        .iter()
        .fold(one_minus.clone() * pow(t, sig.ell[0]), |acc, &e| acc * one_minus.clone() * pow(t, e));
    if sig.depth % 2 == 1 {
        base
    } else {
        -base
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(s: &str) -> Configuration {
        Configuration::decode(s).unwrap()
    }

    fn arrows_and_depth(n: usize, s: &str, sp: &str, j: usize) -> (Vec<(usize, usize)>, usize) {
        let sig = transition_signature(n, &cfg(s), &cfg(sp), j).unwrap().unwrap();
        (sig.arrows, sig.depth)
    }

    #[test]
    fn worked_depths() {
        // three reduced diagrams with depths 1, 2, 3
        let (a, d) = arrows_and_depth(4, "4210", "1420", 0);
        assert_eq!((a, d), (vec![(4, 1), (2, 4), (1, 2)], 1));
        let (a, d) = arrows_and_depth(4, "4203", "0324", 0);
        assert_eq!((a, d), (vec![(4, 0), (2, 3), (0, 2), (3, 4)], 2));
        let (a, d) = arrows_and_depth(4, "4023", "0234", 0);
        assert_eq!((a, d), (vec![(4, 0), (0, 2), (2, 3), (3, 4)], 3));
    }

    #[test]
    fn rejects_non_reduced_shapes() {
        // the emptied site must be j
        assert!(transition_signature(2, &cfg("0121"), &cfg("1021"), 0).unwrap().is_none());
        assert!(transition_signature(2, &cfg("0121"), &cfg("1021"), 2).unwrap().is_none());
        assert!(transition_signature(2, &cfg("0121"), &cfg("0121"), 0).unwrap().is_none());
        // two particles of one type cannot both move
        assert!(transition_signature(2, &cfg("0121"), &cfg("1012"), 1).unwrap().is_none());
        let sig = transition_signature(2, &cfg("0121"), &cfg("1021"), 1).unwrap().unwrap();
        assert!(sig.is_wanted());
        assert_eq!(sig.depth, 1);
        assert_eq!(sig.unmoved(2), vec![2]);
    }
}
