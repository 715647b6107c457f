//! Exact sparse linear algebra over the rationals.
//!
//! Vectors are sparse maps from an ordered row key to a [`Scalar`]. The
//! [`EchelonBasis`] keeps inserted columns in echelon form (distinct leading
//! keys) together with the combination of original columns that produced each
//! row, which is enough to solve, find kernels and compute normal forms.

use std::collections::BTreeMap;
use std::ops::Bound::{Excluded, Unbounded};

use num_traits::{One, Zero};

use crate::poly::Scalar;

pub type SparseVec<K> = BTreeMap<K, Scalar>;

type Combination = BTreeMap<usize, Scalar>;

fn axpy<K: Ord + Clone>(v: &mut SparseVec<K>, c: &Scalar, b: &SparseVec<K>) {
    for (k, bv) in b {
        let delta = c * bv;
        match v.get_mut(k) {
            Some(x) => {
                *x -= delta;
                if x.is_zero() {
                    v.remove(k);
                }
            }
            None => {
                v.insert(k.clone(), -delta);
            }
        }
    }
}

/// `v += c * b`
fn comb_axpy(v: &mut Combination, c: &Scalar, b: &Combination) {
    for (k, bv) in b {
        let e = v.entry(*k).or_insert_with(Scalar::zero);
        *e += c * bv;
        if e.is_zero() {
            v.remove(k);
        }
    }
}

#[derive(Clone, Debug)]
pub struct EchelonBasis<K> {
    ncols: usize,
    rows: BTreeMap<K, (SparseVec<K>, Combination)>,
    kernel: Vec<Combination>,
}

impl<K: Ord + Clone> EchelonBasis<K> {
    pub fn new(ncols: usize) -> Self {
        EchelonBasis { ncols, rows: BTreeMap::new(), kernel: Vec::new() }
    }

    /// Inserts original column `idx`. Dependent columns contribute a kernel vector.
    pub fn insert_column(&mut self, idx: usize, col: SparseVec<K>) {
        let mut comb = Combination::new();
        comb.insert(idx, Scalar::one());
        let mut v = col;
        loop {
            let lead = match v.keys().next() {
                Some(k) => k.clone(),
                None => {
                    self.kernel.push(comb);
                    return;
                }
            };
            match self.rows.get(&lead) {
                Some((row, rcomb)) => {
                    let c = v[&lead].clone();
                    axpy(&mut v, &c, row);
                    comb_axpy(&mut comb, &-c, rcomb);
                }
                None => {
                    let inv = Scalar::one() / &v[&lead];
                    for x in v.values_mut() {
                        *x *= &inv;
                    }
                    for x in comb.values_mut() {
                        *x *= &inv;
                    }
                    self.rows.insert(lead, (v, comb));
                    return;
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Basis of the relations among the inserted columns.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        self.kernel.iter().map(|c| self.dense(c)).collect()
    }

    fn dense(&self, c: &Combination) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.ncols];
        for (k, v) in c {
            out[*k] = v.clone();
        }
        out
    }

    /// Finds `x` with `Σ xⱼ colⱼ = target`, or `None` if the target is outside the span.
    pub fn solve(&self, target: &SparseVec<K>) -> Option<Vec<Scalar>> {
        let mut v = target.clone();
        let mut sol = Combination::new();
        while let Some(lead) = v.keys().next().cloned() {
            let (row, rcomb) = self.rows.get(&lead)?;
            let c = v[&lead].clone();
            axpy(&mut v, &c, row);
            comb_axpy(&mut sol, &c, rcomb);
        }
        Some(self.dense(&sol))
    }

    /// Canonical representative of `target` modulo the span: every pivot key
    /// is eliminated, so two vectors with the same class reduce identically.
    pub fn normal_form(&self, target: &SparseVec<K>) -> SparseVec<K> {
        let mut v = target.clone();
        let mut last: Option<K> = None;
        loop {
            let next = match &last {
                None => v.keys().find(|k| self.rows.contains_key(*k)).cloned(),
                Some(l) => v
                    .range((Excluded(l.clone()), Unbounded))
                    .map(|(k, _)| k)
                    .find(|k| self.rows.contains_key(*k))
                    .cloned(),
            };
            let Some(k) = next else { return v };
            let (row, _) = &self.rows[&k];
            let c = v[&k].clone();
            axpy(&mut v, &c, row);
            last = Some(k);
        }
    }
}

/// Rank of a dense matrix given by rows.
pub fn rank(rows: &[Vec<Scalar>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    // columns of the transpose == rows; rank is symmetric
    let mut basis = EchelonBasis::<usize>::new(rows.len());
    for (i, r) in rows.iter().enumerate() {
        let v: SparseVec<usize> = r
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(j, x)| (j, x.clone()))
            .collect();
        debug_assert!(r.len() == ncols);
        basis.insert_column(i, v);
    }
    basis.rank()
}

/// Exact determinant by Gaussian elimination over the rationals.
pub fn determinant(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut det = Scalar::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Scalar::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &pivot;
            for c in col..n {
                let delta = &f * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    fn sv(entries: &[(usize, i64)]) -> SparseVec<usize> {
        entries.iter().map(|&(k, v)| (k, int(v))).collect()
    }

    #[test]
    fn solve_and_kernel() {
        let mut b = EchelonBasis::new(3);
        b.insert_column(0, sv(&[(0, 1), (1, 1)]));
        b.insert_column(1, sv(&[(1, 1), (2, 1)]));
        b.insert_column(2, sv(&[(0, 1), (1, 2), (2, 1)]));
        assert_eq!(b.rank(), 2);
        let k = b.kernel();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![int(-1), int(-1), int(1)]);
        let x = b.solve(&sv(&[(0, 2), (1, 5), (2, 3)])).unwrap();
        assert_eq!(x[0].clone() + x[2].clone(), int(2));
        assert!(b.solve(&sv(&[(0, 1)])).is_none());
    }

    #[test]
    fn normal_form_is_canonical() {
        let mut b = EchelonBasis::new(1);
        b.insert_column(0, sv(&[(0, 1), (1, 1)]));
        let a = b.normal_form(&sv(&[(0, 3), (2, 1)]));
        let c = b.normal_form(&sv(&[(1, -3), (2, 1)]));
        assert_eq!(a, c);
        assert!(!a.contains_key(&0));
    }

    #[test]
    fn dense_rank_and_det() {
        let m = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(rank(&m), 1);
        assert_eq!(determinant(&m), int(0));
        let m = vec![vec![int(0), rat(1, 2)], vec![int(2), int(3)]];
        assert_eq!(rank(&m), 2);
        assert_eq!(determinant(&m), int(-1));
    }
}
