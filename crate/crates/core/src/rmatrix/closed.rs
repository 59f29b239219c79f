//! Closed-form elements of `S^{k,1}(z)` and of the symmetric `𝒮_{k,1}(z)`.

use super::{t_tail, LinearWeight, RIndex, RMatrixElementQuery};
use crate::combinatorics::MultiplicityArray;
use crate::error::Result;
use crate::scalar::{pow, sign, Field};
use crate::sparse::SparseMatrix;

/// `S^{a, e_b}_{i, e_j}` as `c0 + c1 z`, with `a, i` hardcore.
pub fn closed_weight<F: Field>(t: &F, a: &MultiplicityArray, b: usize, i: &MultiplicityArray, j: usize) -> LinearWeight<F> {
    if i.shifted(j, b).as_ref() != Some(a) {
        return LinearWeight::zero();
    }
    let eps: F = sign((a.range_sum(0, j as isize - 1) + i.range_sum(0, b as isize - 1)) as i64);
    let c = eps * t_tail(t, a, j + 1);
    let taj = pow(t, a.get(j));
    if j == b {
        LinearWeight {
            c0: c.clone(),
            c1: -(c * taj),
        }
    } else {
        let w = c * (F::one() - taj);
        if j > b {
            LinearWeight { c0: F::zero(), c1: w }
        } else {
            LinearWeight { c0: w, c1: F::zero() }
        }
    }
}

pub fn s_k1_closed<F: Field>(q: &RMatrixElementQuery<F>) -> Result<F> {
    q.validate()?;
    Ok(closed_weight(&q.t, &q.a, q.b, &q.i, q.j).eval(&q.z))
}

pub fn s_k1_closed_matrix<F: Field>(n: usize, k: usize, t: &F, z: &F) -> Result<SparseMatrix<F>> {
    let idx = RIndex::hardcore(n, k)?;
    Ok(assemble(&idx, |a, b, i, j| closed_weight(t, a, b, i, j).eval(z)))
}

/// `𝒮_{k,1}(z)^{a, e_b}_{i, e_j}` as `c0 + c1 z`, with `a, i` compositions.
pub fn sym_weight<F: Field>(t: &F, a: &MultiplicityArray, b: usize, i: &MultiplicityArray, j: usize) -> LinearWeight<F> {
    if i.shifted(j, b).as_ref() != Some(a) {
        return LinearWeight::zero();
    }
    let c = t_tail(t, i, b + 1);
    let tib = pow(t, i.get(b));
    if j == b {
        LinearWeight {
            c0: c.clone(),
            c1: -(c * tib),
        }
    } else {
        let w = c * (F::one() - tib);
        if j > b {
            LinearWeight { c0: F::zero(), c1: w }
        } else {
            LinearWeight { c0: w, c1: F::zero() }
        }
    }
}

pub fn sym_s_element<F: Field>(t: &F, z: &F, a: &MultiplicityArray, b: usize, i: &MultiplicityArray, j: usize) -> F {
    sym_weight(t, a, b, i, j).eval(z)
}

pub fn sym_s_matrix<F: Field>(n: usize, k: usize, t: &F, z: &F) -> SparseMatrix<F> {
    let idx = RIndex::symmetric(n, k);
    assemble(&idx, |a, b, i, j| sym_weight(t, a, b, i, j).eval(z))
}

pub(crate) fn assemble<F: Field>(
    idx: &RIndex,
    mut elem: impl FnMut(&MultiplicityArray, usize, &MultiplicityArray, usize) -> F,
) -> SparseMatrix<F> {
    let mut m = SparseMatrix::zeros(idx.dim(), idx.dim());
    for (row, col) in idx.conserving_pairs() {
        let (a, b) = idx.label(row);
        let (i, j) = idx.label(col);
        m.set(row, col, elem(a, b, i, j));
    }
    m
}
