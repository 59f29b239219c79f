//! Exact null spaces by fraction-free (Bareiss) elimination.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Field;
use crate::sparse::SparseMatrix;

/// Row echelon form produced by [`bareiss_echelon`].
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    pub rows: Vec<Vec<F>>,
    /// `(row, column)` of every pivot, in elimination order.
    pub pivots: Vec<(usize, usize)>,
    pub ncols: usize,
}

impl<F> Echelon<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Forward Bareiss elimination. Rows are first scaled to integral entries,
/// after which every intermediate entry is a minor of the scaled matrix and
/// every division is exact.
pub fn bareiss_echelon<F: Field>(a: &SparseMatrix<F>) -> Echelon<F> {
    let (nrows, ncols) = (a.nrows(), a.ncols());
    let mut rows: Vec<Vec<F>> = (0..nrows)
        .map(|r| {
            let mut row = vec![F::zero(); ncols];
            for (&c, v) in a.row(r) {
                row[c] = v.clone();
            }
            F::clear_denominators(&mut row);
            row
        })
        .collect();

    let mut pivots = Vec::new();
    let mut prev = F::one();
    let mut pr = 0;
    for pc in 0..ncols {
        if pr == nrows {
            break;
        }
        let Some(found) = (pr..nrows).find(|&r| !rows[r][pc].is_zero()) else {
            continue;
        };
        rows.swap(pr, found);
        let pivot = rows[pr][pc].clone();
        let (head, tail) = rows.split_at_mut(pr + 1);
        let prow = &head[pr];
        for row in tail.iter_mut() {
            let lead = row[pc].clone();
            for c in pc + 1..ncols {
                let v = pivot.clone() * row[c].clone() - lead.clone() * prow[c].clone();
                row[c] = v / prev.clone();
            }
            row[pc] = F::zero();
        }
        prev = pivot;
        pivots.push((pr, pc));
        pr += 1;
    }
    Echelon { rows, pivots, ncols }
}

pub fn rank<F: Field>(a: &SparseMatrix<F>) -> usize {
    bareiss_echelon(a).rank()
}

/// Basis of `{v : A v = 0}`, one vector per free column in increasing column
/// order, each scaled so its first nonzero coordinate is 1.
pub fn kernel_basis<F: Field>(a: &SparseMatrix<F>) -> Result<Vec<Vec<F>>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            left_rows: a.nrows(),
            left_cols: a.ncols(),
            right_rows: a.ncols(),
            right_cols: a.nrows(),
        });
    }
    Ok(null_space(&bareiss_echelon(a)))
}

fn null_space<F: Field>(ech: &Echelon<F>) -> Vec<Vec<F>> {
    let n = ech.ncols;
    let mut is_pivot = vec![false; n];
    for &(_, c) in &ech.pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![F::zero(); n];
        v[free] = F::one();
        for &(r, c) in ech.pivots.iter().rev() {
            let row = &ech.rows[r];
            let s = (c + 1..n)
                .filter(|&j| !row[j].is_zero() && !v[j].is_zero())
                .fold(F::zero(), |acc, j| acc + row[j].clone() * v[j].clone());
            v[c] = -s / row[c].clone();
        }
        normalize_leading(&mut v);
        basis.push(v);
    }
    basis
}

/// Scales `v` so that its first nonzero coordinate equals 1.
pub fn normalize_leading<F: Field>(v: &mut [F]) {
    if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
        for x in v.iter_mut() {
            *x = x.clone() / lead.clone();
        }
    }
}

/// `Some(c)` with `u = c v` when the vectors are proportional.
pub fn proportionality<F: Field>(u: &[F], v: &[F]) -> Option<F> {
    if u.len() != v.len() {
        return None;
    }
    let pos = v.iter().position(|x| !x.is_zero());
    let Some(pos) = pos else {
        return u.iter().all(Zero::is_zero).then(F::zero);
    };
    let c = u[pos].clone() / v[pos].clone();
    u.iter()
        .zip(v)
        .all(|(a, b)| *a == c.clone() * b.clone())
        .then_some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use num_rational::Ratio;
    use proptest::prelude::*;

    #[test]
    fn identity_has_trivial_kernel() {
        let id = SparseMatrix::<Rational>::identity(4);
        assert!(kernel_basis(&id).unwrap().is_empty());
    }

    #[test]
    fn zero_matrix_has_full_kernel() {
        let z = SparseMatrix::<Rational>::zeros(3, 3);
        let k = kernel_basis(&z).unwrap();
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(*x, rat((i == j) as i64, 1));
            }
        }
    }

    #[test]
    fn rank_one_example() {
        // rows (1,2,3), (2,4,6), (1/2,1,3/2): kernel spanned by (1,0,-1/3), (0,1,-2/3)
        let m = SparseMatrix::from_triplets(
            3,
            3,
            [
                (0, 0, rat(1, 1)),
                (0, 1, rat(2, 1)),
                (0, 2, rat(3, 1)),
                (1, 0, rat(2, 1)),
                (1, 1, rat(4, 1)),
                (1, 2, rat(6, 1)),
                (2, 0, rat(1, 2)),
                (2, 1, rat(1, 1)),
                (2, 2, rat(3, 2)),
            ],
        );
        assert_eq!(rank(&m), 1);
        let k = kernel_basis(&m).unwrap();
        assert_eq!(k, vec![vec![rat(1, 1), rat(-1, 2), rat(0, 1)], vec![rat(1, 1), rat(0, 1), rat(-1, 3)]]);
    }

    #[test]
    fn works_over_machine_rationals() {
        let m = SparseMatrix::from_triplets(
            2,
            2,
            [(0, 0, Ratio::new(1i64, 2)), (0, 1, Ratio::new(1, 3)), (1, 0, Ratio::new(3, 1)), (1, 1, Ratio::new(2, 1))],
        );
        let k = kernel_basis(&m).unwrap();
        assert_eq!(k, vec![vec![Ratio::new(1, 1), Ratio::new(-3, 2)]]);
    }

    #[test]
    fn non_square_is_rejected() {
        assert!(kernel_basis(&SparseMatrix::<Rational>::zeros(2, 3)).is_err());
    }

    #[test]
    fn proportionality_detects_scalars() {
        let v = vec![rat(1, 1), rat(0, 1), rat(2, 3)];
        let u: Vec<_> = v.iter().map(|x| x * rat(-5, 2)).collect();
        assert_eq!(proportionality(&u, &v), Some(rat(-5, 2)));
        let mut w = u.clone();
        w[1] = rat(1, 1);
        assert_eq!(proportionality(&w, &v), None);
    }

    fn small_square(n: usize) -> impl Strategy<Value = SparseMatrix<Rational>> {
        // low-rank-prone entries: many zeros and repeated small values
        prop::collection::vec(prop_oneof![Just(0i64), -2i64..3], n * n).prop_map(move |vals| {
            SparseMatrix::from_triplets(n, n, vals.into_iter().enumerate().map(move |(i, v)| (i / n, i % n, rat(v, 1))))
        })
    }

    proptest! {
        #[test]
        fn kernel_vectors_are_annihilated(m in small_square(4)) {
            let k = kernel_basis(&m).unwrap();
            prop_assert_eq!(k.len(), 4 - rank(&m));
            for v in &k {
                prop_assert!(m.apply(v).unwrap().iter().all(|x| x.is_zero()));
                let lead = v.iter().find(|x| !x.is_zero()).unwrap();
                prop_assert_eq!(lead.clone(), rat(1, 1));
            }
        }

        #[test]
        fn rank_is_transpose_invariant(m in small_square(4)) {
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }
    }
}
