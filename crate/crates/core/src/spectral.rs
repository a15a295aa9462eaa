//! Pages of the link-splitting spectral sequence, by persistence.
//!
//! The perturbed complex is filtered by `g = (j - n) / 2`; the differential
//! `d0 + d0_bs` preserves `(l, k)`-blocks up to the shift `l -> l + 1`. One
//! filtered column reduction per block pairs generators; a pair whose
//! filtration levels differ by `r` survives to `E_r` and dies on `E_{r+1}`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::complex::{BsCoefficient, ChainComplex, ComplexError, KFilter, SignAssignment, WeightVector};
use crate::diagram::AnnularDiagram;
use crate::field::Field;
use crate::homology::{akh, GradedDims};
use crate::sparse::{sub_scaled, SparseMatrix, SparseVec};

/// Dimensions indexed by `(l, k, g2)`.
pub type LkgDims = BTreeMap<(i32, i32, i32), usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageReport {
    /// `pages[r - 1]` is `E_r`, for `r = 1 ..= stabilized_at`.
    pub pages: Vec<LkgDims>,
    pub infinity: LkgDims,
    /// First `r` with `E_r = E_infinity`.
    pub stabilized_at: usize,
    /// Filtration drop of every cancelling pair of positive length.
    pub lengths: Vec<usize>,
}

impl PageReport {
    pub fn page(&self, r: usize) -> &LkgDims {
        let r = r.clamp(1, self.pages.len());
        &self.pages[r - 1]
    }

    /// Page dimensions never grow.
    pub fn weakly_decreasing(&self) -> bool {
        self.pages.windows(2).all(|w| w[1].iter().all(|(g, &n)| n <= w[0].get(g).copied().unwrap_or(0)))
    }
}

/// Largest `r` with `E_r != E_infinity`, or 0 when `E_1` already is `E_infinity`.
pub fn b_value(p: &PageReport) -> usize {
    p.lengths.iter().copied().max().unwrap_or(0)
}

fn bump(m: &mut LkgDims, g: (i32, i32, i32), n: usize) {
    if n > 0 {
        *m.entry(g).or_insert(0) += n;
    }
}

/// Spectral sequence of the filtered complex `(C, d)`; `d` must not raise
/// the filtration and must raise `l` by one.
pub fn ss_pages<F: Field>(cx: &ChainComplex, d: &SparseMatrix<F>) -> PageReport {
    let gens = cx.generators();
    let lkg = |x: usize| (gens[x].l(), gens[x].k, cx.g2(&gens[x]));
    let mut blocks: BTreeMap<(i32, i32), Vec<usize>> = BTreeMap::new();
    for (x, g) in gens.iter().enumerate() {
        blocks.entry((g.l(), g.k)).or_default().push(x);
    }
    for v in blocks.values_mut() {
        v.sort_by_key(|&x| (cx.g2(&gens[x]), x));
    }
    let mut pos = alloc::vec![0usize; gens.len()];
    for v in blocks.values() {
        for (p, &x) in v.iter().enumerate() {
            pos[x] = p;
        }
    }
    let mut paired: BTreeSet<usize> = BTreeSet::new();
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    for (&(l, k), cols) in &blocks {
        let Some(rows) = blocks.get(&(l + 1, k)) else { continue };
        let mut pivots: BTreeMap<usize, SparseVec<F>> = BTreeMap::new();
        for &c in cols {
            let mut v: SparseVec<F> = d
                .column(c)
                .iter()
                .map(|(r, x)| {
                    debug_assert_eq!((gens[*r].l(), gens[*r].k), (l + 1, k));
                    (pos[*r], x.clone())
                })
                .collect();
            v.sort_by_key(|e| e.0);
            while let Some((low, x)) = v.last().cloned() {
                match pivots.get(&low) {
                    Some(p) => v = sub_scaled(&v, &x, p),
                    None => {
                        let inv = x.inv();
                        for e in v.iter_mut() {
                            e.1 = e.1.clone() * inv.clone();
                        }
                        pivots.insert(low, v);
                        let r = rows[low];
                        let (gc, gr) = (cx.g2(&gens[c]), cx.g2(&gens[r]));
                        assert!(gr <= gc && (gc - gr) % 2 == 0, "differential raises the filtration");
                        paired.insert(r);
                        paired.insert(c);
                        pairs.push((r, c, ((gc - gr) / 2) as usize));
                        break;
                    }
                }
            }
        }
    }
    let mut infinity = LkgDims::new();
    for x in 0..gens.len() {
        if !paired.contains(&x) {
            bump(&mut infinity, lkg(x), 1);
        }
    }
    let lengths: Vec<usize> = pairs.iter().map(|p| p.2).filter(|&n| n > 0).collect();
    let stabilized_at = lengths.iter().copied().max().unwrap_or(0) + 1;
    let pages = (1..=stabilized_at)
        .map(|r| {
            let mut e = infinity.clone();
            for &(a, b, len) in &pairs {
                if len >= r {
                    bump(&mut e, lkg(a), 1);
                    bump(&mut e, lkg(b), 1);
                }
            }
            e
        })
        .collect();
    PageReport { pages, infinity, stabilized_at, lengths }
}

/// Build the perturbed complex of a diagram and compute its pages.
pub fn bs_pages<F: Field>(
    d: &AnnularDiagram,
    cap: usize,
    w: &WeightVector,
) -> Result<(ChainComplex, PageReport), ComplexError> {
    let cx = ChainComplex::build(d, cap, KFilter::All)?;
    let b = cx.bundle::<F>(SignAssignment::Standard, w, BsCoefficient::Checkerboard)?;
    let p = ss_pages(&cx, &b.ac());
    Ok((cx, p))
}

/// Sum `(l, k, g2)` dimensions down to `(l, k)`.
pub fn to_lk(dims: &LkgDims) -> BTreeMap<(i32, i32), usize> {
    let mut out = BTreeMap::new();
    for (&(l, k, _), &n) in dims {
        *out.entry((l, k)).or_insert(0) += n;
    }
    out
}

/// Regrade `(i, j, k)` dimensions by `(l, k, g2)` for a link with `n` components.
pub fn to_lkg(dims: &GradedDims, components: usize) -> LkgDims {
    let mut out = LkgDims::new();
    for (&(i, j, k), &n) in &dims.0 {
        bump(&mut out, (i - j, k, j - components as i32), n);
    }
    out
}

/// The `s` with `a(l, k) = b(l + s, k)` for every `(l, k)`, if any.
pub fn l_shift(a: &BTreeMap<(i32, i32), usize>, b: &BTreeMap<(i32, i32), usize>) -> Option<i32> {
    let a: BTreeMap<_, _> = a.iter().filter(|e| *e.1 > 0).collect();
    let b: BTreeMap<_, _> = b.iter().filter(|e| *e.1 > 0).collect();
    if a.len() != b.len() {
        return None;
    }
    let (Some(x), Some(y)) = (a.keys().next(), b.keys().next()) else { return Some(0) };
    let s = y.0 - x.0;
    a.iter().all(|(&&(l, k), n)| b.get(&(l + s, k)) == Some(n)).then_some(s)
}

/// `t = sum over unordered pairs c < d of 2 lk(L_c, L_d)`.
pub fn linking_shift(d: &AnnularDiagram) -> i32 {
    let n = d.component_count();
    let mut t = 0;
    for c in 0..n {
        for e in (c + 1)..n {
            t += 2 * d.linking_number(c, e).expect("distinct components");
        }
    }
    t
}

/// Homology of the split union of the components, by the Kunneth formula.
pub fn split_homology<F: Field>(d: &AnnularDiagram, cap: usize) -> Result<GradedDims, ComplexError> {
    let mut out = GradedDims::unit();
    for c in 0..d.component_count() {
        let s = d.sublink(&[c]).expect("component exists");
        out = out.tensor(&akh::<F>(&s, cap, KFilter::All, SignAssignment::Standard)?);
    }
    Ok(out)
}

/// Outcome of comparing `AKh(L)` with the split union, shifted by `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub t: i32,
    /// `rank^{l,k} AKh(L) - rank^{l+t,k}` of the split product.
    pub margins: BTreeMap<(i32, i32), i64>,
    pub holds: bool,
    /// Pairs summed in `t`.
    pub convention: &'static str,
}

pub fn rank_inequality_check<F: Field>(d: &AnnularDiagram, cap: usize) -> Result<RankReport, ComplexError> {
    let link = akh::<F>(d, cap, KFilter::All, SignAssignment::Standard)?.by_lk();
    let split = split_homology::<F>(d, cap)?.by_lk();
    let t = linking_shift(d);
    let mut keys: BTreeSet<(i32, i32)> = link.keys().copied().collect();
    keys.extend(split.keys().map(|&(l, k)| (l - t, k)));
    let margins: BTreeMap<_, _> = keys
        .into_iter()
        .map(|(l, k)| {
            let a = link.get(&(l, k)).copied().unwrap_or(0) as i64;
            let b = split.get(&(l + t, k)).copied().unwrap_or(0) as i64;
            ((l, k), a - b)
        })
        .collect();
    let holds = margins.values().all(|&m| m >= 0);
    Ok(RankReport { t, margins, holds, convention: "c<d" })
}
