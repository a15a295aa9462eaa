//! Balanced tangles presented as a top-to-bottom sequence of elementary
//! slices, and their annular closures.
//!
//! Strand positions are numbered left to right. Reading downwards, a slice
//! is a crossing of two neighbouring strands, a birth (a local maximum
//! creating two strands) or a death (a local minimum joining two). The
//! annular closure joins bottom position `p` to top position `p` across the
//! seam.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::diagram::{AnnularDiagram, EdgeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slice {
    /// Strands at `pos` and `pos + 1` cross. `left_over` means the strand
    /// moving from `pos` to `pos + 1` passes over.
    Cross { pos: usize, left_over: bool },
    /// Two new strands appear at `pos`, `pos + 1`.
    Birth { pos: usize },
    /// Strands at `pos`, `pos + 1` are joined and disappear.
    Death { pos: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TangleError {
    /// A slice refers to a position outside the current width.
    Position { slice: usize, pos: usize, width: usize },
    /// Top and bottom widths differ.
    Unbalanced { top: usize, bottom: usize },
    /// Stacked tangles have different widths.
    WidthMismatch { left: usize, right: usize },
    /// Braid generator index outside `1..strands`.
    BraidIndex { index: i32, strands: usize },
    /// Component index out of range.
    Component { component: usize },
    /// An insert does not match the cabling multiplicity.
    InsertWidth { expected: usize, found: usize },
}

impl fmt::Display for TangleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TangleError::Position { slice, pos, width } => {
                write!(f, "slice {slice} at position {pos} exceeds width {width}")
            }
            TangleError::Unbalanced { top, bottom } => write!(f, "tangle is not balanced ({top} top, {bottom} bottom)"),
            TangleError::WidthMismatch { left, right } => write!(f, "cannot stack widths {left} and {right}"),
            TangleError::BraidIndex { index, strands } => {
                write!(f, "braid generator {index} out of range for {strands} strands")
            }
            TangleError::Component { component } => write!(f, "component {component} not found"),
            TangleError::InsertWidth { expected, found } => {
                write!(f, "insert has {found} strands, expected {expected}")
            }
        }
    }
}

/// A balanced tangle in `D^2 x I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BalancedTangle {
    width: usize,
    slices: Vec<Slice>,
}

impl BalancedTangle {
    pub fn new(width: usize, slices: Vec<Slice>) -> Result<Self, TangleError> {
        let widths = widths(width, &slices)?;
        let bottom = *widths.last().unwrap();
        if bottom != width {
            return Err(TangleError::Unbalanced { top: width, bottom });
        }
        Ok(BalancedTangle { width, slices })
    }

    /// `m` vertical strands.
    pub fn identity(m: usize) -> Self {
        BalancedTangle { width: m, slices: Vec::new() }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    pub fn crossing_count(&self) -> usize {
        self.slices.iter().filter(|s| matches!(s, Slice::Cross { .. })).count()
    }

    /// `self` on top of `other`.
    pub fn stack(&self, other: &BalancedTangle) -> Result<Self, TangleError> {
        if self.width != other.width {
            return Err(TangleError::WidthMismatch { left: self.width, right: other.width });
        }
        let mut slices = self.slices.clone();
        slices.extend_from_slice(&other.slices);
        Ok(BalancedTangle { width: self.width, slices })
    }

    /// `n` copies stacked vertically.
    pub fn power(&self, n: usize) -> Self {
        let mut slices = Vec::with_capacity(self.slices.len() * n);
        for _ in 0..n {
            slices.extend_from_slice(&self.slices);
        }
        BalancedTangle { width: self.width, slices }
    }

    /// Swap over and under at every crossing.
    pub fn mirror(&self) -> Self {
        let slices = self
            .slices
            .iter()
            .map(|s| match *s {
                Slice::Cross { pos, left_over } => Slice::Cross { pos, left_over: !left_over },
                other => other,
            })
            .collect();
        BalancedTangle { width: self.width, slices }
    }

    /// Place `other` to the right of `self` (no interaction).
    pub fn beside(&self, other: &BalancedTangle) -> Self {
        let mut slices = self.slices.clone();
        let mut w = self.width;
        for s in &self.slices {
            w = apply_width(w, s);
        }
        debug_assert_eq!(w, self.width);
        slices.extend(other.slices.iter().map(|s| shift(s, self.width)));
        BalancedTangle { width: self.width + other.width, slices }
    }

    /// Blackboard-framed cable. Component `c` of the closure is replaced by
    /// `mult[c]` parallel strands; when `inserts[c]` is present (of width
    /// `mult[c]`) it is spliced into those parallels at the first level where
    /// the component appears, just right of any seam crossing.
    pub fn cable_components(
        &self,
        mult: &[usize],
        inserts: &[Option<BalancedTangle>],
    ) -> Result<BalancedTangle, TangleError> {
        let (levels, ncomp) = self.closure_components();
        if mult.len() != ncomp {
            return Err(TangleError::Component { component: mult.len() });
        }
        if let Some(c) = mult.iter().position(|&m| m == 0) {
            return Err(TangleError::Component { component: c });
        }
        for (c, ins) in inserts.iter().enumerate() {
            if let Some(t) = ins {
                if c >= ncomp {
                    return Err(TangleError::Component { component: c });
                }
                if t.width != mult[c] {
                    return Err(TangleError::InsertWidth { expected: mult[c], found: t.width });
                }
            }
        }
        let offset = |lv: usize, p: usize| -> usize { levels[lv][..p].iter().map(|&c| mult[c]).sum() };
        // where each insert goes: level -> list of (offset, tangle)
        let mut splice: BTreeMap<usize, Vec<(usize, &BalancedTangle)>> = BTreeMap::new();
        for (c, ins) in inserts.iter().enumerate() {
            let Some(t) = ins else { continue };
            let (lv, p) = levels
                .iter()
                .enumerate()
                .find_map(|(lv, row)| row.iter().position(|&x| x == c).map(|p| (lv, p)))
                .ok_or(TangleError::Component { component: c })?;
            splice.entry(lv).or_default().push((offset(lv, p), t));
        }
        let mut out = Vec::new();
        for (i, sl) in self.slices.iter().enumerate() {
            if let Some(list) = splice.get(&i) {
                for (off, t) in list {
                    out.extend(t.slices.iter().map(|s| shift(s, *off)));
                }
            }
            let row = &levels[i];
            match *sl {
                Slice::Cross { pos, left_over } => {
                    let (ma, mb) = (mult[row[pos]], mult[row[pos + 1]]);
                    let s = offset(i, pos);
                    for a in (0..ma).rev() {
                        for b in 0..mb {
                            out.push(Slice::Cross { pos: s + a + b, left_over });
                        }
                    }
                }
                Slice::Birth { pos } => {
                    let m = mult[levels[i + 1][pos]];
                    let s = offset(i, pos);
                    out.extend((0..m).map(|k| Slice::Birth { pos: s + k }));
                }
                Slice::Death { pos } => {
                    let m = mult[row[pos]];
                    let s = offset(i, pos);
                    out.extend((0..m).map(|k| Slice::Death { pos: s + m - 1 - k }));
                }
            }
        }
        let last = self.slices.len();
        if let Some(list) = splice.get(&last) {
            for (off, t) in list {
                out.extend(t.slices.iter().map(|s| shift(s, *off)));
            }
        }
        BalancedTangle::new(offset(0, self.width), out)
    }

    /// Cable a single component `comp` with `m` parallels and an insert.
    pub fn cable(&self, comp: usize, m: usize, insert: &BalancedTangle) -> Result<BalancedTangle, TangleError> {
        let (_, ncomp) = self.closure_components();
        if comp >= ncomp {
            return Err(TangleError::Component { component: comp });
        }
        let mut mult = vec![1; ncomp];
        mult[comp] = m;
        let mut inserts = vec![None; ncomp];
        inserts[comp] = Some(insert.clone());
        self.cable_components(&mult, &inserts)
    }

    /// Whitehead double of one component: its 2-parallel with a clasp spliced
    /// in, fusing the parallels into a single component.
    pub fn whitehead_double(&self, comp: usize, clasp_sign: i8) -> Result<BalancedTangle, TangleError> {
        self.cable(comp, 2, &clasp(clasp_sign))
    }

    /// Component labels of every strand position at every level, together
    /// with the number of components of the annular closure. Level `0` is
    /// the top; level `i + 1` is just below slice `i`.
    pub fn closure_components(&self) -> (Vec<Vec<usize>>, usize) {
        let g = Graph::build(self);
        let comp = g.link_components();
        let levels = g
            .level_links
            .iter()
            .map(|lv| lv.iter().map(|&l| comp.0[l]).collect())
            .collect();
        (levels, comp.1)
    }

    /// Annular closure: bottom position `p` joined to top position `p`,
    /// each closing strand meeting the seam once.
    pub fn annular_closure(&self) -> AnnularDiagram {
        Graph::build(self).into_diagram()
    }
}

fn apply_width(w: usize, s: &Slice) -> usize {
    match s {
        Slice::Cross { .. } => w,
        Slice::Birth { .. } => w + 2,
        Slice::Death { .. } => w - 2,
    }
}

fn shift(s: &Slice, by: usize) -> Slice {
    match *s {
        Slice::Cross { pos, left_over } => Slice::Cross { pos: pos + by, left_over },
        Slice::Birth { pos } => Slice::Birth { pos: pos + by },
        Slice::Death { pos } => Slice::Death { pos: pos + by },
    }
}

fn widths(top: usize, slices: &[Slice]) -> Result<Vec<usize>, TangleError> {
    let mut w = top;
    let mut out = vec![w];
    for (i, s) in slices.iter().enumerate() {
        let ok = match *s {
            Slice::Cross { pos, .. } | Slice::Death { pos } => pos + 1 < w,
            Slice::Birth { pos } => pos <= w,
        };
        if !ok {
            let pos = match *s {
                Slice::Cross { pos, .. } | Slice::Birth { pos } | Slice::Death { pos } => pos,
            };
            return Err(TangleError::Position { slice: i, pos, width: w });
        }
        w = apply_width(w, s);
        out.push(w);
    }
    Ok(out)
}

/// Sign `+1` or `-1` braid generators, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, TangleError> {
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(TangleError::BraidIndex { index: l, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// One crossing per letter. `sigma_i` is the crossing whose closure
    /// (with all strands oriented the same way) is positive.
    pub fn to_tangle(&self) -> BalancedTangle {
        let slices = self
            .letters
            .iter()
            .map(|&l| Slice::Cross { pos: l.unsigned_abs() as usize - 1, left_over: l < 0 })
            .collect();
        BalancedTangle { width: self.strands, slices }
    }
}

/// Node of the strand graph: either a crossing slot (degree one) or a
/// junction point (degree two).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Node {
    Slot { crossing: usize, slot: usize },
    Junction,
}

#[derive(Clone, Copy, Debug)]
struct Link {
    ends: [(usize, usize); 2],
    /// Seam crossings measured from end 0 to end 1.
    seam: i32,
}

struct Graph {
    nodes: Vec<Node>,
    adj: Vec<Vec<usize>>,
    links: Vec<Link>,
    /// Crossing slot nodes, counterclockwise with the under-strand on 0 and 2.
    crossings: Vec<[usize; 4]>,
    /// Closing link for each top position.
    closure: Vec<usize>,
    /// Link occupying each position at each level.
    level_links: Vec<Vec<usize>>,
}

impl Graph {
    fn node(&mut self, n: Node) -> usize {
        self.nodes.push(n);
        self.adj.push(Vec::new());
        self.nodes.len() - 1
    }

    fn link(&mut self, u: usize, v: usize, seam: i32) -> usize {
        let l = self.links.len();
        let ku = self.adj[u].len();
        self.adj[u].push(l);
        let kv = self.adj[v].len();
        self.adj[v].push(l);
        self.links.push(Link { ends: [(u, ku), (v, kv)], seam });
        l
    }

    fn build(t: &BalancedTangle) -> Graph {
        let mut g = Graph {
            nodes: Vec::new(),
            adj: Vec::new(),
            links: Vec::new(),
            crossings: Vec::new(),
            closure: Vec::new(),
            level_links: Vec::new(),
        };
        // open strand ends, one per position
        let top: Vec<usize> = (0..t.width).map(|_| g.node(Node::Junction)).collect();
        let mut pos: Vec<usize> = top.clone();
        let mut level_nodes: Vec<Vec<usize>> = vec![pos.clone()];
        let mut down: BTreeMap<(usize, usize), usize> = BTreeMap::new(); // (level, pos) -> link
        // each position carries the list of levels it spans until closed
        let mut spans: Vec<Vec<(usize, usize)>> = (0..t.width).map(|p| vec![(0, p)]).collect();
        let mut level = 0;
        for s in &t.slices {
            level += 1;
            match *s {
                Slice::Cross { pos: i, left_over } => {
                    let c = g.crossings.len();
                    let slot: [usize; 4] = core::array::from_fn(|k| g.node(Node::Slot { crossing: c, slot: k }));
                    // counterclockwise corners: TL, BL, BR, TR
                    let (tl, bl, br, tr) = if left_over {
                        (slot[3], slot[0], slot[1], slot[2])
                    } else {
                        (slot[0], slot[1], slot[2], slot[3])
                    };
                    g.crossings.push(slot);
                    let a = g.link(pos[i], tl, 0);
                    let b = g.link(pos[i + 1], tr, 0);
                    for &(lv, p) in &spans[i] {
                        down.insert((lv, p), a);
                    }
                    for &(lv, p) in &spans[i + 1] {
                        down.insert((lv, p), b);
                    }
                    pos[i] = bl;
                    pos[i + 1] = br;
                    spans[i] = Vec::new();
                    spans[i + 1] = Vec::new();
                }
                Slice::Birth { pos: i } => {
                    let x = g.node(Node::Junction);
                    pos.insert(i, x);
                    pos.insert(i, x);
                    spans.insert(i, Vec::new());
                    spans.insert(i, Vec::new());
                }
                Slice::Death { pos: i } => {
                    let l = g.link(pos[i], pos[i + 1], 0);
                    for &(lv, p) in spans[i].iter().chain(spans[i + 1].iter()) {
                        down.insert((lv, p), l);
                    }
                    pos.drain(i..i + 2);
                    spans.drain(i..i + 2);
                }
            }
            for (p, sp) in spans.iter_mut().enumerate() {
                sp.push((level, p));
            }
            level_nodes.push(pos.clone());
        }
        for p in 0..t.width {
            let l = g.link(pos[p], top[p], 1);
            g.closure.push(l);
            for &(lv, q) in &spans[p] {
                down.insert((lv, q), l);
            }
        }
        g.level_links = level_nodes
            .iter()
            .enumerate()
            .map(|(lv, nodes)| (0..nodes.len()).map(|p| down[&(lv, p)]).collect())
            .collect();
        g
    }

    fn other_end(&self, l: usize, from_end: usize) -> (usize, usize) {
        self.links[l].ends[1 - from_end]
    }

    /// Walk from `(link, entered at end e)` until a crossing slot is reached.
    /// Returns the slot node, the accumulated seam, and visited links with
    /// their traversal direction (+1 when walked end 0 -> end 1).
    fn walk(&self, mut l: usize, mut e: usize, stop_at: Option<usize>) -> (usize, i32, Vec<(usize, i32)>) {
        let mut seam = 0;
        let mut visited = Vec::new();
        loop {
            let dir = if e == 0 { 1 } else { -1 };
            seam += dir * self.links[l].seam;
            visited.push((l, dir));
            let (v, kv) = self.other_end(l, e);
            if matches!(self.nodes[v], Node::Slot { .. }) {
                return (v, seam, visited);
            }
            let next = self.adj[v][1 - kv];
            let ne = if self.links[next].ends[0] == (v, 1 - kv) { 0 } else { 1 };
            if Some(next) == stop_at && ne == 0 {
                return (v, seam, visited);
            }
            l = next;
            e = ne;
        }
    }

    /// Component label of every link and the component count. Components
    /// are numbered in order of first appearance along the links.
    fn link_components(&self) -> (Vec<usize>, usize) {
        let n = self.links.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let union = |p: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(p, a), find(p, b));
            if ra != rb {
                p[ra.max(rb)] = ra.min(rb);
            }
        };
        for (v, node) in self.nodes.iter().enumerate() {
            if let Node::Junction = node {
                union(&mut parent, self.adj[v][0], self.adj[v][1]);
            }
        }
        for slot in &self.crossings {
            for k in 0..2 {
                union(&mut parent, self.adj[slot[k]][0], self.adj[slot[k + 2]][0]);
            }
        }
        let mut label = BTreeMap::new();
        let mut out = vec![0; n];
        for (l, o) in out.iter_mut().enumerate() {
            let r = find(&mut parent, l);
            let next = label.len();
            *o = *label.entry(r).or_insert(next);
        }
        (out, label.len())
    }

    fn into_diagram(self) -> AnnularDiagram {
        // split the strand graph into planar-diagram edges
        let nslots = self.crossings.len() * 4;
        let mut edge_of_slot: BTreeMap<usize, usize> = BTreeMap::new();
        // per edge: (start slot node, end slot node, seam start->end)
        let mut pd_edges: Vec<(usize, usize, i32)> = Vec::new();
        // closure link -> (edge or loop, direction relative to the edge)
        let mut link_owner: BTreeMap<usize, (Owner, i32)> = BTreeMap::new();
        let mut visited = vec![false; self.links.len()];
        for c in 0..self.crossings.len() {
            for k in 0..4 {
                let s = self.crossings[c][k];
                if edge_of_slot.contains_key(&s) {
                    continue;
                }
                let l = self.adj[s][0];
                let e = if self.links[l].ends[0].0 == s { 0 } else { 1 };
                let (end, seam, links) = self.walk(l, e, None);
                let id = pd_edges.len();
                pd_edges.push((s, end, seam));
                edge_of_slot.insert(s, id);
                edge_of_slot.insert(end, id);
                for (l, dir) in links {
                    visited[l] = true;
                    link_owner.insert(l, (Owner::Edge(id), dir));
                }
            }
        }
        // closed loops made only of junctions
        let mut loops: Vec<i32> = Vec::new();
        for l in 0..self.links.len() {
            if visited[l] {
                continue;
            }
            let id = loops.len();
            let mut seam = 0;
            let (mut cur, mut e) = (l, 0);
            loop {
                let dir = if e == 0 { 1 } else { -1 };
                visited[cur] = true;
                seam += dir * self.links[cur].seam;
                link_owner.insert(cur, (Owner::Loop(id), dir));
                let (v, kv) = self.other_end(cur, e);
                let next = self.adj[v][1 - kv];
                let ne = if self.links[next].ends[0] == (v, 1 - kv) { 0 } else { 1 };
                if next == l && ne == 0 {
                    break;
                }
                cur = next;
                e = ne;
            }
            loops.push(seam);
        }
        debug_assert_eq!(edge_of_slot.len(), nslots);

        // orient: each component flows downward at its leftmost closing strand
        let ne = pd_edges.len();
        let mut forward: Vec<Option<bool>> = vec![None; ne];
        let mut loop_forward: Vec<Option<bool>> = vec![None; loops.len()];
        let slot_pos = |node: usize| match self.nodes[node] {
            Node::Slot { crossing, slot } => (crossing, slot),
            Node::Junction => unreachable!(),
        };
        let orient_from = |start: usize, fwd: bool, forward: &mut Vec<Option<bool>>| {
            let (mut e, mut f) = (start, fwd);
            while forward[e].is_none() {
                forward[e] = Some(f);
                let head = if f { pd_edges[e].1 } else { pd_edges[e].0 };
                let (c, k) = slot_pos(head);
                let next_slot = self.crossings[c][(k + 2) % 4];
                let ne = edge_of_slot[&next_slot];
                f = pd_edges[ne].0 == next_slot;
                e = ne;
            }
        };
        for &l in &self.closure {
            match link_owner[&l] {
                (Owner::Edge(e), dir) => {
                    if forward[e].is_none() {
                        orient_from(e, dir > 0, &mut forward);
                    }
                }
                (Owner::Loop(i), dir) => {
                    if loop_forward[i].is_none() {
                        loop_forward[i] = Some(dir > 0);
                    }
                }
            }
        }
        for e in 0..ne {
            if forward[e].is_none() {
                orient_from(e, true, &mut forward);
            }
        }

        // assemble the planar-diagram code
        let mut crossings = Vec::with_capacity(self.crossings.len());
        for slot in &self.crossings {
            let ids: [EdgeId; 4] = slot.map(|s| edge_of_slot[&s] as EdgeId + 1);
            // is the under-strand incoming at slot 0?
            let e0 = edge_of_slot[&slot[0]];
            let incoming0 = if forward[e0].unwrap() { pd_edges[e0].1 == slot[0] } else { pd_edges[e0].0 == slot[0] };
            let e1 = edge_of_slot[&slot[1]];
            let incoming1 = if forward[e1].unwrap() { pd_edges[e1].1 == slot[1] } else { pd_edges[e1].0 == slot[1] };
            let (slots, over_in_at_3) = if incoming0 {
                (ids, !incoming1)
            } else {
                ([ids[2], ids[3], ids[0], ids[1]], incoming1)
            };
            crossings.push((slots, if over_in_at_3 { 1 } else { -1 }));
        }
        let seam = pd_edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.2 != 0)
            .map(|(i, e)| (i as EdgeId + 1, if forward[i].unwrap() { e.2 } else { -e.2 }))
            .collect();
        let free = loops
            .iter()
            .zip(&loop_forward)
            .map(|(&s, f)| if f.unwrap_or(true) { s } else { -s })
            .collect();
        AnnularDiagram::from_signed(crossings, free, seam).expect("closure of a balanced tangle is a valid diagram")
    }
}

#[derive(Clone, Copy, Debug)]
enum Owner {
    Edge(usize),
    Loop(usize),
}

/// The two-strand tangle whose closure is `L^1`: a cap hanging down from the
/// top endpoints clasped with a cup rising from the bottom endpoints. The
/// clasp is alternating, so its two crossings have the same sign.
pub fn tangle_j() -> BalancedTangle {
    BalancedTangle::new(
        2,
        vec![
            Slice::Birth { pos: 1 },
            Slice::Cross { pos: 0, left_over: true },
            Slice::Cross { pos: 2, left_over: true },
            Slice::Death { pos: 1 },
        ],
    )
    .expect("tangle J is balanced")
}

/// The clasp used for Whitehead doubling; `sign = +1` is tangle J itself,
/// `-1` its mirror.
pub fn clasp(sign: i8) -> BalancedTangle {
    if sign >= 0 {
        tangle_j()
    } else {
        tangle_j().mirror()
    }
}
