//! The triply graded annular Khovanov complex and its Batson-Seed
//! perturbation.
//!
//! A generator is a resolution state together with a label per circle; bit
//! `t` of `labels` is set when circle `t` carries `+`. Circles of a state are
//! numbered by their smallest dense edge index.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cube::{check_cap, CubeError, Resolution, Smoother};
use crate::diagram::AnnularDiagram;
use crate::field::{Field, Rational};
use crate::sparse::SparseMatrix;

/// One enhanced state with its gradings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub state: u64,
    pub labels: u64,
    pub i: i32,
    pub j: i32,
    pub k: i32,
}

impl Generator {
    /// `l = i - j`.
    pub fn l(&self) -> i32 {
        self.i - self.j
    }
}

/// Which annular gradings to generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KFilter {
    All,
    Only(i32),
}

impl KFilter {
    fn admits(self, k: i32) -> bool {
        match self {
            KFilter::All => true,
            KFilter::Only(x) => x == k,
        }
    }
}

/// Signs on the edges of the cube. Every variant has product `-1` around
/// each square face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SignAssignment {
    /// `(-1)^(number of 1-bits below the flipped crossing)`.
    #[default]
    Standard,
    /// `(-1)^(number of 1-bits above the flipped crossing)`.
    Reversed,
    /// The standard signs times the coboundary of `v -> (-1)^|v & mask|`.
    Twisted(u64),
}

impl SignAssignment {
    /// True when the edge from `v` flipping crossing `c` carries `-1`.
    pub fn negative(self, v: u64, c: usize) -> bool {
        let below = v & ((1u64 << c) - 1);
        match self {
            SignAssignment::Standard => below.count_ones() % 2 == 1,
            SignAssignment::Reversed => (v >> c >> 1).count_ones() % 2 == 1,
            SignAssignment::Twisted(mask) => {
                // f(v) f(v + c) = (-1)^[c in mask]
                (below.count_ones() + ((mask >> c) & 1) as u32) % 2 == 1
            }
        }
    }
}

/// How a crossing's weight difference enters the perturbation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BsCoefficient {
    /// `chi(c) (w_over - w_under)`, where `chi(c) = +1` when the region
    /// between slots 0 and 1 of `c` is shaded in the checkerboard coloring.
    #[default]
    Checkerboard,
    /// `w_over - w_under` with no color factor.
    OverMinusUnder,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexError {
    Cube(CubeError),
    /// The weight vector does not cover every component.
    WeightCount { expected: usize, found: usize },
    /// A weight cannot be represented in the chosen field.
    Weight { component: usize },
}

impl fmt::Display for ComplexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexError::Cube(e) => write!(f, "{e}"),
            ComplexError::WeightCount { expected, found } => {
                write!(f, "expected {expected} weights, found {found}")
            }
            ComplexError::Weight { component } => {
                write!(f, "weight of component {component} is not representable in the field")
            }
        }
    }
}

impl From<CubeError> for ComplexError {
    fn from(e: CubeError) -> Self {
        ComplexError::Cube(e)
    }
}

/// Weights per component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector(pub Vec<Rational>);

impl WeightVector {
    pub fn equal(components: usize) -> Self {
        WeightVector(vec![Rational::new(0, 1); components])
    }

    /// Component `c` gets weight `c`.
    pub fn distinct(components: usize) -> Self {
        WeightVector((0..components).map(|c| Rational::new(c as i64, 1)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The four pieces of the differential, as square matrices on the generator
/// list (rows are targets).
#[derive(Clone, Debug, PartialEq)]
pub struct DifferentialBundle<F> {
    pub d0: SparseMatrix<F>,
    pub d_minus: SparseMatrix<F>,
    pub d0_bs: SparseMatrix<F>,
    pub d_minus_bs: SparseMatrix<F>,
}

impl<F: Field> DifferentialBundle<F> {
    /// `d0 + d_minus`.
    pub fn khovanov(&self) -> SparseMatrix<F> {
        self.d0.add(&self.d_minus)
    }

    /// `d0_bs + d_minus_bs`.
    pub fn perturbation(&self) -> SparseMatrix<F> {
        self.d0_bs.add(&self.d_minus_bs)
    }

    /// Differential of the filtered complex: `d0 + d0_bs`.
    pub fn ac(&self) -> SparseMatrix<F> {
        self.d0.add(&self.d0_bs)
    }
}

/// Chain-level summary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplexStats {
    pub crossings: usize,
    pub states: usize,
    pub generators: usize,
}

/// Generators of the complex of a diagram, with enough resolution data to
/// assemble differentials.
pub struct ChainComplex {
    slots: Vec<[u32; 4]>,
    n_plus: usize,
    n_minus: usize,
    components: usize,
    /// Components of (under, over) strand per crossing.
    strands: Vec<(usize, usize)>,
    shaded: Vec<bool>,
    gens: Vec<Generator>,
    index: BTreeMap<(u64, u64), usize>,
    res: BTreeMap<u64, Resolution>,
}

fn k_of(r: &Resolution, labels: u64) -> i32 {
    r.essential
        .iter()
        .enumerate()
        .filter(|(_, &e)| e)
        .map(|(t, _)| if (labels >> t) & 1 == 1 { 1 } else { -1 })
        .sum()
}

/// All subsets of `items` of size `p`, as bitmasks over circle indices.
fn subsets(items: &[usize], p: usize, out: &mut Vec<u64>) {
    fn go(items: &[usize], p: usize, acc: u64, out: &mut Vec<u64>) {
        if p == 0 {
            out.push(acc);
            return;
        }
        if items.len() < p {
            return;
        }
        go(&items[1..], p - 1, acc | (1u64 << items[0]), out);
        go(&items[1..], p, acc, out);
    }
    go(items, p, 0, out);
}

/// Checkerboard color of the region between slots 0 and 1 at each crossing.
/// Regions are traced combinatorially, then two-colored separately on each
/// connected piece of the projection.
pub fn checkerboard(d: &AnnularDiagram) -> Vec<bool> {
    let n = d.crossing_count();
    let mut parent: Vec<usize> = (0..4 * n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for c in 0..n {
        let s = d.slot_edges(c);
        for p in 0..4 {
            let q = (p + 1) % 4;
            let e = &d.edges()[s[q]];
            let (tail, head) = (e.tail.expect("crossing edge"), e.head.expect("crossing edge"));
            let other = if tail == (c, q) { head } else { tail };
            let (a, b) = (find(&mut parent, 4 * c + p), find(&mut parent, 4 * other.0 + other.1));
            parent[a] = b;
        }
    }
    let face: Vec<usize> = (0..4 * n).map(|x| find(&mut parent, x)).collect();
    // faces at corners p and p+1 of a crossing have opposite colors
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in 0..n {
        for p in 0..4 {
            let (a, b) = (face[4 * c + p], face[4 * c + (p + 1) % 4]);
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
    }
    let mut color: BTreeMap<usize, bool> = BTreeMap::new();
    for c in 0..n {
        let start = face[4 * c];
        if color.contains_key(&start) {
            continue;
        }
        color.insert(start, true);
        let mut stack = vec![start];
        while let Some(f) = stack.pop() {
            let cf = color[&f];
            for &g in &adj[&f] {
                match color.get(&g) {
                    Some(&cg) => assert!(cg != cf, "projection regions are not two-colorable"),
                    None => {
                        color.insert(g, !cf);
                        stack.push(g);
                    }
                }
            }
        }
    }
    (0..n).map(|c| color[&face[4 * c]]).collect()
}

impl ChainComplex {
    pub fn build(d: &AnnularDiagram, cap: usize, filter: KFilter) -> Result<Self, CubeError> {
        check_cap(d, cap)?;
        let n = d.crossing_count();
        let mut sm = Smoother::new(d);
        let mut gens = Vec::new();
        let mut index = BTreeMap::new();
        let mut res = BTreeMap::new();
        let (np, nm) = (d.n_plus() as i32, d.n_minus() as i32);
        let mut masks = Vec::new();
        for t in 0..(1u64 << n) {
            let v = t ^ (t >> 1);
            let r = sm.resolve(v);
            let circles = r.essential.len();
            let ess: Vec<usize> = (0..circles).filter(|&x| r.essential[x]).collect();
            let triv: Vec<usize> = (0..circles).filter(|&x| !r.essential[x]).collect();
            masks.clear();
            match filter {
                KFilter::All => masks.extend(0..(1u64 << circles)),
                KFilter::Only(k) => {
                    let e = ess.len() as i32;
                    if (e + k) % 2 != 0 || k.abs() > e {
                        continue;
                    }
                    let mut plus = Vec::new();
                    subsets(&ess, ((e + k) / 2) as usize, &mut plus);
                    let mut tmasks = Vec::new();
                    for sz in 0..=triv.len() {
                        subsets(&triv, sz, &mut tmasks);
                    }
                    for a in &plus {
                        for b in &tmasks {
                            masks.push(a | b);
                        }
                    }
                    masks.sort_unstable();
                }
            }
            if masks.is_empty() {
                continue;
            }
            let w = v.count_ones() as i32;
            for &m in &masks {
                let plus = m.count_ones() as i32;
                let k = k_of(&r, m);
                debug_assert!(filter.admits(k));
                let g = Generator { state: v, labels: m, i: w - nm, j: 2 * plus - circles as i32 + w + np - 2 * nm, k };
                index.insert((v, m), gens.len());
                gens.push(g);
            }
            res.insert(v, r);
        }
        let strands = (0..n).map(|c| d.crossing_components(c)).collect();
        let slots = (0..n).map(|c| d.slot_edges(c).map(|e| e as u32)).collect();
        Ok(ChainComplex {
            slots,
            n_plus: d.n_plus(),
            n_minus: d.n_minus(),
            components: d.component_count(),
            strands,
            shaded: checkerboard(d),
            gens,
            index,
            res,
        })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    pub fn n_plus(&self) -> usize {
        self.n_plus
    }

    pub fn n_minus(&self) -> usize {
        self.n_minus
    }

    /// Twice the filtration level: `j - n`.
    pub fn g2(&self, g: &Generator) -> i32 {
        g.j - self.components as i32
    }

    pub fn index_of(&self, state: u64, labels: u64) -> Option<usize> {
        self.index.get(&(state, labels)).copied()
    }

    pub fn stats(&self) -> ComplexStats {
        ComplexStats { crossings: self.slots.len(), states: self.res.len(), generators: self.gens.len() }
    }

    /// Checkerboard factor of crossing `c`.
    pub fn chi(&self, c: usize) -> i64 {
        if self.shaded[c] {
            1
        } else {
            -1
        }
    }

    /// Merge or split along the band at `c`, from resolution `a` to `b`.
    fn band_map(&self, a: &Resolution, b: &Resolution, c: usize, labels: u64, out: &mut Vec<u64>) {
        out.clear();
        let s = self.slots[c];
        let (x, y) = (a.circle_of_edge[s[0] as usize] as usize, a.circle_of_edge[s[2] as usize] as usize);
        let mut base = 0u64;
        for t in 0..a.essential.len() {
            if t != x && t != y && (labels >> t) & 1 == 1 {
                base |= 1u64 << b.circle_of_edge[a.rep[t] as usize];
            }
        }
        let lx = (labels >> x) & 1 == 1;
        if x != y {
            let z = b.circle_of_edge[s[0] as usize];
            let ly = (labels >> y) & 1 == 1;
            match (lx, ly) {
                (true, true) => out.push(base | (1u64 << z)),
                (false, false) => {}
                _ => out.push(base),
            }
        } else {
            let (z1, z2) = (b.circle_of_edge[s[0] as usize], b.circle_of_edge[s[2] as usize]);
            debug_assert_ne!(z1, z2);
            if lx {
                out.push(base | (1u64 << z1));
                out.push(base | (1u64 << z2));
            } else {
                out.push(base);
            }
        }
    }

    /// Sum of `coeff(c) * sign * band map` over cube edges, split by the
    /// change in `k`. `forward` walks edges `0 -> 1`, otherwise `1 -> 0`.
    fn assemble<F: Field>(
        &self,
        forward: bool,
        signs: SignAssignment,
        coeff: &[F],
    ) -> (SparseMatrix<F>, SparseMatrix<F>) {
        let n = self.gens.len();
        let (mut keep, mut drop) = (Vec::new(), Vec::new());
        let mut out = Vec::new();
        for (col, g) in self.gens.iter().enumerate() {
            let ra = &self.res[&g.state];
            for (c, w) in coeff.iter().enumerate() {
                let bit = (g.state >> c) & 1 == 1;
                if bit == forward || w.is_zero() {
                    continue;
                }
                let target = g.state ^ (1u64 << c);
                let Some(rb) = self.res.get(&target) else { continue };
                let v = if forward { g.state } else { target };
                let val = if signs.negative(v, c) { -w.clone() } else { w.clone() };
                self.band_map(ra, rb, c, g.labels, &mut out);
                for &o in &out {
                    let Some(&row) = self.index.get(&(target, o)) else { continue };
                    let dk = self.gens[row].k - g.k;
                    match dk {
                        0 => keep.push((row, col, val.clone())),
                        -2 => drop.push((row, col, val.clone())),
                        _ => panic!("band map changed k by {dk}"),
                    }
                }
            }
        }
        (SparseMatrix::from_triplets(n, n, keep), SparseMatrix::from_triplets(n, n, drop))
    }

    /// The Khovanov differential split as `(d0, d_minus)`.
    pub fn khovanov_differential<F: Field>(&self, signs: SignAssignment) -> (SparseMatrix<F>, SparseMatrix<F>) {
        let ones = vec![F::one(); self.slots.len()];
        self.assemble(true, signs, &ones)
    }

    /// Per-crossing perturbation coefficients.
    pub fn bs_coefficients<F: Field>(&self, w: &WeightVector, rule: BsCoefficient) -> Result<Vec<F>, ComplexError> {
        if w.len() != self.components {
            return Err(ComplexError::WeightCount { expected: self.components, found: w.len() });
        }
        let lifted = w
            .0
            .iter()
            .enumerate()
            .map(|(c, q)| F::from_rational(q).ok_or(ComplexError::Weight { component: c }))
            .collect::<Result<Vec<F>, _>>()?;
        Ok(self
            .strands
            .iter()
            .enumerate()
            .map(|(c, &(under, over))| {
                let diff = lifted[over].clone() - lifted[under].clone();
                match rule {
                    BsCoefficient::Checkerboard if !self.shaded[c] => -diff,
                    _ => diff,
                }
            })
            .collect())
    }

    /// The perturbation split as `(d0_bs, d_minus_bs)`.
    pub fn bs_perturbation<F: Field>(
        &self,
        signs: SignAssignment,
        w: &WeightVector,
        rule: BsCoefficient,
    ) -> Result<(SparseMatrix<F>, SparseMatrix<F>), ComplexError> {
        let coeff = self.bs_coefficients::<F>(w, rule)?;
        Ok(self.assemble(false, signs, &coeff))
    }

    pub fn bundle<F: Field>(
        &self,
        signs: SignAssignment,
        w: &WeightVector,
        rule: BsCoefficient,
    ) -> Result<DifferentialBundle<F>, ComplexError> {
        let (d0, d_minus) = self.khovanov_differential(signs);
        let (d0_bs, d_minus_bs) = self.bs_perturbation(signs, w, rule)?;
        Ok(DifferentialBundle { d0, d_minus, d0_bs, d_minus_bs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::DEFAULT_STATE_CAP;
    use crate::diagram::tests::hopf;
    use crate::field::Gf2;
    use crate::tangle::BalancedTangle;

    fn cx(d: &AnnularDiagram) -> ChainComplex {
        ChainComplex::build(d, DEFAULT_STATE_CAP, KFilter::All).unwrap()
    }

    #[test]
    fn unknot_generators() {
        let d = AnnularDiagram::new(crate::DiagramInput { free_circles: vec![0], ..Default::default() }).unwrap();
        let g: Vec<_> = cx(&d).generators().iter().map(|g| (g.i, g.j, g.k)).collect();
        assert_eq!(g, vec![(0, -1, 0), (0, 1, 0)]);
        let e = BalancedTangle::identity(1).annular_closure();
        let g: Vec<_> = cx(&e).generators().iter().map(|g| (g.i, g.j, g.k)).collect();
        assert_eq!(g, vec![(0, -1, -1), (0, 1, 1)]);
    }

    #[test]
    fn hopf_generators() {
        let c = cx(&hopf());
        assert_eq!(c.len(), 12);
        let mut is: Vec<i32> = c.generators().iter().map(|g| g.i).collect();
        is.dedup();
        is.sort();
        is.dedup();
        assert_eq!(is, vec![0, 1, 2]);
    }

    #[test]
    fn squares_vanish_on_hopf() {
        let d = hopf();
        let c = cx(&d);
        for rule in [BsCoefficient::Checkerboard, BsCoefficient::OverMinusUnder] {
            let b = c.bundle::<Rational>(SignAssignment::Standard, &WeightVector::distinct(2), rule).unwrap();
            let (dd, p) = (b.khovanov(), b.perturbation());
            assert!(dd.mul(&dd).is_zero());
            assert!(p.mul(&p).is_zero());
            assert!(!p.is_zero());
            assert!(dd.mul(&p).add(&p.mul(&dd)).is_zero());
        }
    }

    #[test]
    fn restricted_block_matches_full() {
        let d = BalancedTangle::identity(2).annular_closure();
        let top = ChainComplex::build(&d, DEFAULT_STATE_CAP, KFilter::Only(2)).unwrap();
        assert_eq!(top.len(), 1);
        let full = cx(&d);
        assert_eq!(full.generators().iter().filter(|g| g.k == 2).count(), 1);
        let (d0, _) = full.khovanov_differential::<Gf2>(SignAssignment::Standard);
        assert!(d0.is_zero());
    }

    #[test]
    fn sign_assignments_are_valid() {
        for s in [SignAssignment::Standard, SignAssignment::Reversed, SignAssignment::Twisted(0b1011)] {
            for v in 0u64..16 {
                for c in 0..4 {
                    for e in (c + 1)..4 {
                        if (v >> c) & 1 == 1 || (v >> e) & 1 == 1 {
                            continue;
                        }
                        let p = s.negative(v, c) as u32
                            + s.negative(v | 1 << c, e) as u32
                            + s.negative(v, e) as u32
                            + s.negative(v | 1 << e, c) as u32;
                        assert_eq!(p % 2, 1);
                    }
                }
            }
        }
    }
}
