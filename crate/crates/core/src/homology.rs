//! Graded homology of the annular complex over an exact field.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::complex::{ChainComplex, ComplexError, KFilter, SignAssignment};
use crate::diagram::AnnularDiagram;
use crate::field::Field;
use crate::sparse::SparseMatrix;

/// Dimensions indexed by `(i, j, k)`. Zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedDims(pub BTreeMap<(i32, i32, i32), usize>);

impl GradedDims {
    pub fn new() -> Self {
        GradedDims(BTreeMap::new())
    }

    pub fn get(&self, i: i32, j: i32, k: i32) -> usize {
        self.0.get(&(i, j, k)).copied().unwrap_or(0)
    }

    pub fn add(&mut self, g: (i32, i32, i32), n: usize) {
        if n > 0 {
            *self.0.entry(g).or_insert(0) += n;
        }
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_k(&self) -> Option<i32> {
        self.0.keys().map(|g| g.2).max()
    }

    /// Regrade by `(l, k)` with `l = i - j`.
    pub fn by_lk(&self) -> BTreeMap<(i32, i32), usize> {
        let mut out = BTreeMap::new();
        for (&(i, j, k), &n) in &self.0 {
            *out.entry((i - j, k)).or_insert(0) += n;
        }
        out
    }

    /// Kunneth product: dimensions of the homology of a disjoint union.
    pub fn tensor(&self, other: &GradedDims) -> GradedDims {
        let mut out = GradedDims::new();
        for (&(i1, j1, k1), &a) in &self.0 {
            for (&(i2, j2, k2), &b) in &other.0 {
                out.add((i1 + i2, j1 + j2, k1 + k2), a * b);
            }
        }
        out
    }

    /// Homology of the empty diagram.
    pub fn unit() -> GradedDims {
        let mut g = GradedDims::new();
        g.add((0, 0, 0), 1);
        g
    }
}

/// Maximum `k` with a nonzero dimension.
pub fn max_nonzero_k(dims: &GradedDims) -> Option<i32> {
    dims.max_k()
}

/// Homology of `(C, d)` where `d` preserves `(j, k)` and raises `i` by one.
pub fn homology<F: Field>(cx: &ChainComplex, d: &SparseMatrix<F>) -> GradedDims {
    let gens = cx.generators();
    let mut groups: BTreeMap<(i32, i32, i32), Vec<usize>> = BTreeMap::new();
    let mut local = alloc::vec![0usize; gens.len()];
    for (x, g) in gens.iter().enumerate() {
        let v = groups.entry((g.i, g.j, g.k)).or_default();
        local[x] = v.len();
        v.push(x);
    }
    let mut rank_out: BTreeMap<(i32, i32, i32), usize> = BTreeMap::new();
    for (&(i, j, k), cols) in &groups {
        let Some(rows) = groups.get(&(i + 1, j, k)) else { continue };
        let columns = cols
            .iter()
            .map(|&c| {
                d.column(c)
                    .iter()
                    .map(|(r, v)| {
                        let t = &gens[*r];
                        assert_eq!((t.i, t.j, t.k), (i + 1, j, k), "differential leaves its grading block");
                        (local[*r], v.clone())
                    })
                    .collect::<Vec<_>>()
            })
            .map(|mut col| {
                col.sort_by_key(|e| e.0);
                col
            })
            .collect();
        let m = SparseMatrix::from_columns(rows.len(), columns);
        rank_out.insert((i, j, k), m.rank());
    }
    let mut out = GradedDims::new();
    for (&(i, j, k), cols) in &groups {
        let r_out = rank_out.get(&(i, j, k)).copied().unwrap_or(0);
        let r_in = rank_out.get(&(i - 1, j, k)).copied().unwrap_or(0);
        out.add((i, j, k), cols.len() - r_out - r_in);
    }
    out
}

/// Annular Khovanov homology of a diagram, optionally restricted to one
/// annular grading.
pub fn akh<F: Field>(
    d: &AnnularDiagram,
    cap: usize,
    filter: KFilter,
    signs: SignAssignment,
) -> Result<GradedDims, ComplexError> {
    let cx = ChainComplex::build(d, cap, filter)?;
    let (d0, _) = cx.khovanov_differential::<F>(signs);
    Ok(homology(&cx, &d0))
}

/// Largest annular grading with nonzero homology, found by computing only
/// the top grading blocks, from the seam bound downwards.
pub fn top_nonzero_k<F: Field>(d: &AnnularDiagram, cap: usize) -> Result<Option<i32>, ComplexError> {
    let w = d.wrap_upper_bound() as i32;
    let mut k = w;
    while k >= -w {
        let h = akh::<F>(d, cap, KFilter::Only(k), SignAssignment::Standard)?;
        if !h.is_zero() {
            return Ok(Some(k));
        }
        k -= 2;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::DEFAULT_STATE_CAP;
    use crate::diagram::tests::hopf;
    use crate::field::{Gf2, Rational};
    use crate::tangle::{tangle_j, BalancedTangle};
    use crate::DiagramInput;

    fn full<F: Field>(d: &AnnularDiagram) -> GradedDims {
        akh::<F>(d, DEFAULT_STATE_CAP, KFilter::All, SignAssignment::Standard).unwrap()
    }

    #[test]
    fn unknots() {
        let u = AnnularDiagram::new(DiagramInput { free_circles: alloc::vec![0], ..Default::default() }).unwrap();
        let h = full::<Gf2>(&u);
        assert_eq!(h.0.into_iter().collect::<Vec<_>>(), alloc::vec![((0, -1, 0), 1), ((0, 1, 0), 1)]);
        let e = BalancedTangle::identity(1).annular_closure();
        let h = full::<Rational>(&e);
        assert_eq!(h.0.into_iter().collect::<Vec<_>>(), alloc::vec![((0, -1, -1), 1), ((0, 1, 1), 1)]);
        assert_eq!(full::<Gf2>(&AnnularDiagram::empty()), GradedDims::unit());
    }

    #[test]
    fn hopf_in_a_disk_is_khovanov_homology() {
        // the positive Hopf link: q^0 + q^2 + t^2 q^4 + t^2 q^6
        let h = full::<Rational>(&hopf());
        let expect: BTreeMap<_, _> = [((0, 0, 0), 1), ((0, 2, 0), 1), ((2, 4, 0), 1), ((2, 6, 0), 1)].into();
        assert_eq!(h.0, expect);
    }

    #[test]
    fn top_grading_of_l1() {
        let l1 = tangle_j().annular_closure();
        let h = full::<Gf2>(&l1);
        assert_eq!(max_nonzero_k(&h), Some(2));
        assert_eq!(top_nonzero_k::<Gf2>(&l1, DEFAULT_STATE_CAP).unwrap(), Some(2));
    }

    #[test]
    fn kunneth_for_concentric_circles() {
        let e = BalancedTangle::identity(1).annular_closure();
        let two = BalancedTangle::identity(2).annular_closure();
        assert_eq!(full::<Gf2>(&e).tensor(&full::<Gf2>(&e)), full::<Gf2>(&two));
    }
}
