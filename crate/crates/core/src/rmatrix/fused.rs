//! `S^{k,1}(z)` by antisymmetric fusion of `k` copies of `S^{1,1}` at the
//! staggered points `z, z/t, ..., z/t^{k-1}`.

use super::closed::assemble;
use super::{s11_element, RIndex, RMatrixElementQuery};
use crate::combinatorics::{tableau_of, MultiplicityArray};
use crate::error::{Error, Result};
use crate::scalar::{powi, Field};
use crate::sparse::SparseMatrix;

/// `d_k(z) = Π_{r=1}^{k-1} (1 - t^{-r} z)`. Level 0 uses `1/(1 - z)` so that
/// the fused weight there is `1 - z`, in line with the other constructions.
fn normalization<F: Field>(k: usize, t: &F, z: &F) -> Result<F> {
    if k == 0 {
        if (F::one() - z.clone()).is_zero() {
            return Err(Error::FusionPole { z: z.to_string() });
        }
        return Ok((F::one() - z.clone()).inv());
    }
    let d = (1..k as i64).fold(F::one(), |acc, r| acc * (F::one() - powi(t, -r) * z.clone()));
    if d.is_zero() {
        return Err(Error::FusionPole { z: z.to_string() });
    }
    Ok(d)
}

/// Permutations of `0..k` with their signs, via Heap's algorithm.
fn signed_permutations(k: usize) -> Vec<(Vec<usize>, bool)> {
    let mut perm: Vec<usize> = (0..k).collect();
    let mut out = vec![(perm.clone(), true)];
    let mut c = vec![0; k];
    let mut even = true;
    let mut i = 1;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            even = !even;
            out.push((perm.clone(), even));
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

fn fused_sum<F: Field>(
    t: &F,
    points: &[F],
    perms: &[(Vec<usize>, bool)],
    a: &[usize],
    b: usize,
    i: &[usize],
    j: usize,
) -> F {
    let k = a.len();
    let mut total = F::zero();
    for (perm, even) in perms {
        let mut prod = F::one();
        let mut vert = j;
        for r in 0..k {
            let inp = i[perm[r]];
            let out = a[r];
            let next = if out == inp {
                vert
            } else if out == vert {
                inp
            } else {
                prod = F::zero();
                break;
            };
            prod = prod * s11_element(t, &points[r], out, next, inp, vert);
            if prod.is_zero() {
                break;
            }
            vert = next;
        }
        if vert != b || prod.is_zero() {
            continue;
        }
        total = if *even { total + prod } else { total - prod };
    }
    total
}

fn points<F: Field>(k: usize, t: &F, z: &F) -> Vec<F> {
    // row r (bottom first) carries z t^{r-k}
    (1..=k as i64).map(|r| powi(t, r - k as i64) * z.clone()).collect()
}

pub fn s_k1_fused_element<F: Field>(q: &RMatrixElementQuery<F>) -> Result<F> {
    q.validate()?;
    let d = normalization(q.k, &q.t, &q.z)?;
    let perms = signed_permutations(q.k);
    let a = tableau_of(&q.a)?;
    let i = tableau_of(&q.i)?;
    let pts = points(q.k, &q.t, &q.z);
    Ok(fused_sum(&q.t, &pts, &perms, a.letters(), q.b, i.letters(), q.j) / d)
}

pub fn s_k1_fused<F: Field>(n: usize, k: usize, t: &F, z: &F) -> Result<SparseMatrix<F>> {
    let idx = RIndex::hardcore(n, k)?;
    let d = normalization(k, t, z)?;
    let perms = signed_permutations(k);
    let pts = points(k, t, z);
    let letters = |m: &MultiplicityArray| tableau_of(m).expect("hardcore index").letters().to_vec();
    Ok(assemble(&idx, |a, b, i, j| {
        fused_sum(t, &pts, &perms, &letters(a), b, &letters(i), j) / d.clone()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmatrix::closed::s_k1_closed_matrix;
    use crate::scalar::{rat, Rational};

    #[test]
    fn permutation_signs() {
        let perms = signed_permutations(3);
        assert_eq!(perms.len(), 6);
        for (p, even) in &perms {
            let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            assert_eq!(*even, inversions % 2 == 0, "{p:?}");
        }
        assert_eq!(signed_permutations(0).len(), 1);
    }

    #[test]
    fn level_one_is_s11() {
        let (t, z) = (rat(2, 3), rat(5, 4));
        let fused = s_k1_fused(2, 1, &t, &z).unwrap();
        assert_eq!(fused, s_k1_closed_matrix(2, 1, &t, &z).unwrap());
    }

    #[test]
    fn n1_level_two_by_hand() {
        // a = i = (1,1): two permutations, vertical letter j passes through both rows
        let (t, z) = (rat(1, 3), rat(1, 5));
        let m = s_k1_fused(1, 2, &t, &z).unwrap();
        let closed = s_k1_closed_matrix(1, 2, &t, &z).unwrap();
        assert_eq!(m, closed);
        // S^{(1,1),e_0}_{(1,1),e_0} = t (1 - t z)
        let one = rat(1, 1);
        assert_eq!(m.get(0, 0), &t * (&one - &t * &z));
        assert_eq!(m.get(1, 1), one - &t * &z);
    }

    #[test]
    fn agrees_with_closed_form_n2() {
        let pairs: [(i64, i64, i64, i64); 8] = [
            (1, 3, 1, 5),
            (1, 2, 2, 7),
            (2, 5, -3, 4),
            (3, 7, 5, 2),
            (4, 9, -1, 6),
            (5, 11, 7, 3),
            (6, 13, 1, 9),
            (-2, 3, 3, 11),
        ];
        for (tp, tq, zp, zq) in pairs {
            let (t, z): (Rational, Rational) = (rat(tp, tq), rat(zp, zq));
            for k in 0..=3 {
                assert_eq!(
                    s_k1_fused(2, k, &t, &z).unwrap(),
                    s_k1_closed_matrix(2, k, &t, &z).unwrap(),
                    "k={k} t={t} z={z}"
                );
            }
        }
    }

    #[test]
    fn poles_are_rejected() {
        let t = rat(1, 2);
        assert!(matches!(s_k1_fused(2, 3, &t, &t), Err(Error::FusionPole { .. })));
        assert!(matches!(s_k1_fused(2, 3, &t, &rat(1, 4)), Err(Error::FusionPole { .. })));
        assert!(s_k1_fused(2, 2, &t, &rat(1, 4)).is_ok());
    }
}
