//! Column-major sparse matrices over an exact field.

use alloc::vec::Vec;

use crate::field::Field;

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec<F> = Vec<(usize, F)>;

/// `v <- v - a * w`.
pub(crate) fn sub_scaled<F: Field>(v: &SparseVec<F>, a: &F, w: &SparseVec<F>) -> SparseVec<F> {
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < w.len() {
        if j == w.len() || (i < v.len() && v[i].0 < w[j].0) {
            out.push(v[i].clone());
            i += 1;
        } else if i == v.len() || w[j].0 < v[i].0 {
            out.push((w[j].0, -(a.clone() * w[j].1.clone())));
            j += 1;
        } else {
            let x = v[i].1.clone() - a.clone() * w[j].1.clone();
            if !x.is_zero() {
                out.push((v[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn scale<F: Field>(v: &mut SparseVec<F>, a: &F) {
    for (_, x) in v.iter_mut() {
        *x = x.clone() * a.clone();
    }
}

/// A sparse matrix stored as a list of sparse columns.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<F> {
    rows: usize,
    cols: Vec<SparseVec<F>>,
}

impl<F: Field> SparseMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols: (0..cols).map(|_| Vec::new()).collect() }
    }

    /// Build from `(row, col, value)` triplets; duplicates are summed and
    /// zeros dropped.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, F)>,
    {
        let mut buckets: Vec<Vec<(usize, F)>> = (0..cols).map(|_| Vec::new()).collect();
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r}, {c}) out of bounds");
            buckets[c].push((r, v));
        }
        let cols = buckets.into_iter().map(normalize).collect();
        SparseMatrix { rows, cols }
    }

    pub fn from_columns(rows: usize, cols: Vec<SparseVec<F>>) -> Self {
        debug_assert!(cols.iter().all(|c| c.iter().all(|(r, _)| *r < rows)));
        SparseMatrix { rows, cols }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec<F> {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec<F>] {
        &self.cols
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> F {
        match self.cols[c].binary_search_by_key(&r, |e| e.0) {
            Ok(p) => self.cols[c][p].1.clone(),
            Err(_) => F::zero(),
        }
    }

    /// Iterate over `(row, col, value)` for every stored entry.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &F)> + '_ {
        self.cols.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols()), (other.rows, other.cols()));
        let neg_one = -F::one();
        let cols = self.cols.iter().zip(&other.cols).map(|(a, b)| sub_scaled(a, &neg_one, b)).collect();
        SparseMatrix { rows: self.rows, cols }
    }

    pub fn scaled(&self, a: &F) -> Self {
        if a.is_zero() {
            return Self::zeros(self.rows, self.cols());
        }
        let mut out = self.clone();
        for c in out.cols.iter_mut() {
            scale(c, a);
        }
        out
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols(), other.rows, "dimension mismatch in product");
        let cols = other
            .cols
            .iter()
            .map(|bcol| {
                let mut acc: Vec<(usize, F)> = Vec::new();
                for (k, b) in bcol {
                    for (r, a) in &self.cols[*k] {
                        acc.push((*r, a.clone() * b.clone()));
                    }
                }
                normalize(acc)
            })
            .collect();
        SparseMatrix { rows: self.rows, cols }
    }

    pub fn transpose(&self) -> Self {
        let trip = self.entries().map(|(r, c, v)| (c, r, v.clone())).collect::<Vec<_>>();
        Self::from_triplets(self.cols(), self.rows, trip)
    }

    /// Rank by sparse Gaussian elimination. Columns are processed sparsest
    /// first to limit fill-in.
    pub fn rank(&self) -> usize {
        let mut order: Vec<usize> = (0..self.cols()).collect();
        order.sort_by_key(|&j| self.cols[j].len());
        let mut pivots: Vec<Option<SparseVec<F>>> = (0..self.rows).map(|_| None).collect();
        let mut rank = 0;
        for j in order {
            let mut v = self.cols[j].clone();
            while let Some((low, x)) = v.last().cloned() {
                match &pivots[low] {
                    Some(p) => v = sub_scaled(&v, &x, p),
                    None => {
                        let inv = x.inv();
                        scale(&mut v, &inv);
                        pivots[low] = Some(v);
                        rank += 1;
                        break;
                    }
                }
            }
        }
        rank
    }
}

fn normalize<F: Field>(mut v: Vec<(usize, F)>) -> SparseVec<F> {
    v.sort_by_key(|e| e.0);
    let mut out: SparseVec<F> = Vec::with_capacity(v.len());
    for (r, x) in v {
        match out.last_mut() {
            Some(last) if last.0 == r => last.1 = last.1.clone() + x,
            _ => out.push((r, x)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Gf2, Rational};

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn triplets_sum_and_drop_zeros() {
        let m = SparseMatrix::from_triplets(2, 2, [(0, 0, q(1)), (0, 0, q(-1)), (1, 1, q(3))]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 1), q(3));
        assert_eq!(m.get(0, 0), q(0));
    }

    #[test]
    fn rank_over_both_fields() {
        // [[1,1],[1,1]] has rank 1; [[1,1],[1,-1]] rank 2 over Q, 1 over GF(2)
        let a = SparseMatrix::from_triplets(2, 2, [(0, 0, q(1)), (0, 1, q(1)), (1, 0, q(1)), (1, 1, q(1))]);
        assert_eq!(a.rank(), 1);
        let b = SparseMatrix::from_triplets(2, 2, [(0, 0, q(1)), (0, 1, q(1)), (1, 0, q(1)), (1, 1, q(-1))]);
        assert_eq!(b.rank(), 2);
        let one = Gf2(true);
        let c = SparseMatrix::from_triplets(2, 2, [(0, 0, one), (0, 1, one), (1, 0, one), (1, 1, one)]);
        assert_eq!(c.rank(), 1);
    }

    #[test]
    fn product_and_transpose() {
        let a = SparseMatrix::from_triplets(2, 3, [(0, 0, q(1)), (1, 2, q(2))]);
        let b = SparseMatrix::from_triplets(3, 1, [(0, 0, q(5)), (2, 0, q(1))]);
        let ab = a.mul(&b);
        assert_eq!(ab.get(0, 0), q(5));
        assert_eq!(ab.get(1, 0), q(2));
        assert_eq!(a.transpose().transpose(), a);
        assert!(a.add(&a.scaled(&q(-1))).is_zero());
    }
}
