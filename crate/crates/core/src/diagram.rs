//! Link diagrams in the annulus.
//!
//! A diagram is a planar-diagram code: each crossing lists four edge labels
//! counterclockwise starting from the incoming under-strand. The annular
//! position is recorded by a seam, a fixed arc from the puncture to infinity,
//! through signed per-edge intersection counts. Crossingless components are
//! stored separately as free circles.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Edge label. Free circles share the same label space.
pub type EdgeId = u32;

/// One crossing. `slots` run counterclockwise from the incoming under-strand,
/// so the under-strand runs `slots[0] -> slots[2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Crossing {
    pub slots: [EdgeId; 4],
    /// +1 when the over-strand runs `slots[3] -> slots[1]`, -1 otherwise.
    pub sign: i8,
}

impl Crossing {
    /// Slot index at which the over-strand enters.
    pub fn over_in_slot(&self) -> usize {
        if self.sign > 0 {
            3
        } else {
            1
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeCircle {
    pub id: EdgeId,
    pub seam: i32,
}

/// Position of an edge end: `(crossing index, slot)`.
pub type SlotRef = (usize, usize);

/// Derived per-edge data, indexed densely (crossing edges sorted by id,
/// then free circles).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeInfo {
    pub id: EdgeId,
    /// Outgoing end. `None` for free circles.
    pub tail: Option<SlotRef>,
    /// Incoming end. `None` for free circles.
    pub head: Option<SlotRef>,
    /// Signed seam intersections, measured along the orientation.
    pub seam: i32,
    pub component: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagramError {
    /// Edge label 0 is reserved.
    ZeroEdge,
    /// An edge label did not occur exactly twice among crossing slots.
    Multiplicity { edge: EdgeId, count: usize },
    /// Slot roles cannot be oriented consistently.
    Orientation { edge: EdgeId },
    /// A seam entry names an edge that does not exist.
    UnknownSeamEdge { edge: EdgeId },
    /// An orientation pin does not describe a strand passing through a crossing.
    BadPin { from: EdgeId, to: EdgeId },
    /// Components were requested that do not exist or are not distinct.
    BadComponent { component: usize },
}

impl fmt::Display for DiagramError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagramError::ZeroEdge => write!(f, "edge label 0 is not allowed"),
            DiagramError::Multiplicity { edge, count } => {
                write!(f, "edge {edge} occurs {count} times among crossing slots (expected 2)")
            }
            DiagramError::Orientation { edge } => write!(f, "inconsistent orientation at edge {edge}"),
            DiagramError::UnknownSeamEdge { edge } => write!(f, "seam references unknown edge {edge}"),
            DiagramError::BadPin { from, to } => {
                write!(f, "orientation pin {from} -> {to} does not pass through a crossing")
            }
            DiagramError::BadComponent { component } => write!(f, "invalid component {component}"),
        }
    }
}

/// Raw description of a diagram before validation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiagramInput {
    pub crossings: Vec<[EdgeId; 4]>,
    /// `(a, b)`: the over-strand enters a crossing on edge `a` and leaves on
    /// edge `b`. It is applied at the first crossing, in sorted order, with
    /// `a` and `b` in opposite odd slots, trying slot 3 before slot 1.
    pub pins: Vec<(EdgeId, EdgeId)>,
    pub free_circles: Vec<i32>,
    pub seam: Vec<(EdgeId, i32)>,
}

/// A validated annular link diagram. Crossings are kept in sorted order and
/// free circles sorted by seam count, so structurally equal inputs compare
/// equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnularDiagram {
    crossings: Vec<Crossing>,
    free_circles: Vec<FreeCircle>,
    edges: Vec<EdgeInfo>,
    index: BTreeMap<EdgeId, usize>,
    components: Vec<Vec<usize>>,
    n_plus: usize,
    n_minus: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Role {
    Unknown,
    In,
    Out,
}

impl AnnularDiagram {
    /// The empty diagram.
    pub fn empty() -> Self {
        AnnularDiagram::new(DiagramInput::default()).expect("empty diagram is valid")
    }

    pub fn new(input: DiagramInput) -> Result<Self, DiagramError> {
        let DiagramInput { mut crossings, pins, free_circles, seam } = input;
        crossings.sort();

        // each edge exactly twice
        let mut occ: BTreeMap<EdgeId, Vec<SlotRef>> = BTreeMap::new();
        for (c, x) in crossings.iter().enumerate() {
            for (p, &e) in x.iter().enumerate() {
                if e == 0 {
                    return Err(DiagramError::ZeroEdge);
                }
                occ.entry(e).or_default().push((c, p));
            }
        }
        for (&e, v) in &occ {
            if v.len() != 2 {
                return Err(DiagramError::Multiplicity { edge: e, count: v.len() });
            }
        }

        // orientation roles
        let n = crossings.len();
        let mut role = vec![[Role::Unknown; 4]; n];
        let mut queue: Vec<SlotRef> = Vec::new();
        let set = |role: &mut Vec<[Role; 4]>, queue: &mut Vec<SlotRef>, s: SlotRef, r: Role| -> Result<(), EdgeId> {
            let cur = role[s.0][s.1];
            if cur == Role::Unknown {
                role[s.0][s.1] = r;
                queue.push(s);
                Ok(())
            } else if cur == r {
                Ok(())
            } else {
                Err(crossings[s.0][s.1])
            }
        };
        let flip = |r: Role| if r == Role::In { Role::Out } else { Role::In };
        let propagate = |role: &mut Vec<[Role; 4]>, queue: &mut Vec<SlotRef>| -> Result<(), EdgeId> {
            while let Some((c, p)) = queue.pop() {
                let r = role[c][p];
                // through the crossing
                set(role, queue, (c, (p + 2) % 4), flip(r))?;
                // along the edge
                let e = crossings[c][p];
                let ends = &occ[&e];
                let other = if ends[0] == (c, p) { ends[1] } else { ends[0] };
                set(role, queue, other, flip(r))?;
            }
            Ok(())
        };
        for c in 0..n {
            set(&mut role, &mut queue, (c, 0), Role::In).map_err(|edge| DiagramError::Orientation { edge })?;
            set(&mut role, &mut queue, (c, 2), Role::Out).map_err(|edge| DiagramError::Orientation { edge })?;
        }
        propagate(&mut role, &mut queue).map_err(|edge| DiagramError::Orientation { edge })?;
        for &(a, b) in &pins {
            // first crossing in sorted order; slot 3 before slot 1
            let found = (0..n).find_map(|c| {
                [3, 1].into_iter().find_map(|p| {
                    (crossings[c][p] == a && crossings[c][(p + 2) % 4] == b).then_some((c, p))
                })
            });
            let Some((c, p)) = found else {
                return Err(DiagramError::BadPin { from: a, to: b });
            };
            set(&mut role, &mut queue, (c, p), Role::In).map_err(|_| DiagramError::BadPin { from: a, to: b })?;
            propagate(&mut role, &mut queue).map_err(|edge| DiagramError::Orientation { edge })?;
        }
        // strands that are over at every crossing: default to entering at slot 1
        for c in 0..n {
            if role[c][1] == Role::Unknown {
                set(&mut role, &mut queue, (c, 1), Role::In).map_err(|edge| DiagramError::Orientation { edge })?;
                propagate(&mut role, &mut queue).map_err(|edge| DiagramError::Orientation { edge })?;
            }
        }

        let crossings: Vec<Crossing> = crossings
            .iter()
            .zip(&role)
            .map(|(s, r)| Crossing { slots: *s, sign: if r[3] == Role::In { 1 } else { -1 } })
            .collect();

        // dense edge table
        let mut seam_map: BTreeMap<EdgeId, i32> = BTreeMap::new();
        for &(e, s) in &seam {
            if !occ.contains_key(&e) {
                return Err(DiagramError::UnknownSeamEdge { edge: e });
            }
            *seam_map.entry(e).or_insert(0) += s;
        }
        let mut edges: Vec<EdgeInfo> = Vec::new();
        let mut index: BTreeMap<EdgeId, usize> = BTreeMap::new();
        for (&e, ends) in &occ {
            let (mut tail, mut head) = (None, None);
            for &(c, p) in ends {
                if role[c][p] == Role::In {
                    head = Some((c, p));
                } else {
                    tail = Some((c, p));
                }
            }
            if tail.is_none() || head.is_none() {
                return Err(DiagramError::Orientation { edge: e });
            }
            index.insert(e, edges.len());
            edges.push(EdgeInfo { id: e, tail, head, seam: seam_map.get(&e).copied().unwrap_or(0), component: 0 });
        }
        let mut fc: Vec<i32> = free_circles;
        fc.sort();
        let base = occ.keys().next_back().copied().unwrap_or(0);
        let free_circles: Vec<FreeCircle> =
            fc.iter().enumerate().map(|(i, &s)| FreeCircle { id: base + 1 + i as EdgeId, seam: s }).collect();
        for f in &free_circles {
            index.insert(f.id, edges.len());
            edges.push(EdgeInfo { id: f.id, tail: None, head: None, seam: f.seam, component: 0 });
        }

        // components by tracing strands, ordered by smallest dense edge index
        let mut comp = vec![usize::MAX; edges.len()];
        let mut components: Vec<Vec<usize>> = Vec::new();
        for start in 0..edges.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            let k = components.len();
            let mut members = Vec::new();
            let mut e = start;
            loop {
                comp[e] = k;
                members.push(e);
                let Some((c, p)) = edges[e].head else { break };
                let next = crossings[c].slots[(p + 2) % 4];
                e = index[&next];
                if e == start {
                    break;
                }
            }
            members.sort();
            components.push(members);
        }
        for (e, k) in comp.iter().enumerate() {
            edges[e].component = *k;
        }
        let n_plus = crossings.iter().filter(|x| x.sign > 0).count();
        let n_minus = crossings.len() - n_plus;
        Ok(AnnularDiagram { crossings, free_circles, edges, index, components, n_plus, n_minus })
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_circles(&self) -> &[FreeCircle] {
        &self.free_circles
    }

    /// Dense edge table: crossing edges by id, then free circles.
    pub fn edges(&self) -> &[EdgeInfo] {
        &self.edges
    }

    pub fn edge_index(&self, id: EdgeId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    /// Dense indices of the four slot edges of crossing `c`.
    pub fn slot_edges(&self, c: usize) -> [usize; 4] {
        self.crossings[c].slots.map(|e| self.index[&e])
    }

    pub fn n_plus(&self) -> usize {
        self.n_plus
    }

    pub fn n_minus(&self) -> usize {
        self.n_minus
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Partition of edge labels into components.
    pub fn components(&self) -> Vec<Vec<EdgeId>> {
        self.components.iter().map(|c| c.iter().map(|&e| self.edges[e].id).collect()).collect()
    }

    /// Dense edge indices of component `c`.
    pub fn component_edges(&self, c: usize) -> &[usize] {
        &self.components[c]
    }

    /// Component of the under-strand and of the over-strand at crossing `c`.
    pub fn crossing_components(&self, c: usize) -> (usize, usize) {
        let s = self.slot_edges(c);
        (self.edges[s[0]].component, self.edges[s[1]].component)
    }

    /// Seam intersection count of an edge measured along its orientation.
    pub fn seam(&self, id: EdgeId) -> Option<i32> {
        self.edge_index(id).map(|e| self.edges[e].seam)
    }

    /// Half the signed count of crossings between two distinct components.
    pub fn linking_number(&self, c1: usize, c2: usize) -> Result<i32, DiagramError> {
        let k = self.component_count();
        if c1 >= k {
            return Err(DiagramError::BadComponent { component: c1 });
        }
        if c2 >= k || c1 == c2 {
            return Err(DiagramError::BadComponent { component: c2 });
        }
        let mut total = 0i32;
        for i in 0..self.crossings.len() {
            let (u, o) = self.crossing_components(i);
            if (u == c1 && o == c2) || (u == c2 && o == c1) {
                total += self.crossings[i].sign as i32;
            }
        }
        debug_assert!(total % 2 == 0);
        Ok(total / 2)
    }

    /// Signed winding of a component around the annulus.
    pub fn winding(&self, c: usize) -> Result<i32, DiagramError> {
        if c >= self.component_count() {
            return Err(DiagramError::BadComponent { component: c });
        }
        Ok(self.components[c].iter().map(|&e| self.edges[e].seam).sum())
    }

    /// Number of points in which the diagram meets the meridional disk swept
    /// over the seam; an upper bound for the wrapping number.
    pub fn wrap_upper_bound(&self) -> u32 {
        self.edges.iter().map(|e| e.seam.unsigned_abs()).sum()
    }

    /// The raw input that reproduces this diagram exactly.
    pub fn to_input(&self) -> DiagramInput {
        let seam = self
            .edges
            .iter()
            .filter(|e| e.tail.is_some() && e.seam != 0)
            .map(|e| (e.id, e.seam))
            .collect();
        let free_circles = self.free_circles.iter().map(|f| f.seam).collect();
        let signed = self.crossings.iter().map(|x| (x.slots, x.sign)).collect();
        Self::pinned_input(signed, free_circles, seam).0
    }

    /// Build a diagram whose crossings carry prescribed signs, adding the
    /// orientation pins the default rule needs.
    pub fn from_signed(
        crossings: Vec<([EdgeId; 4], i8)>,
        free_circles: Vec<i32>,
        seam: Vec<(EdgeId, i32)>,
    ) -> Result<Self, DiagramError> {
        let (_, d) = Self::pinned_input(crossings, free_circles, seam);
        d
    }

    fn pinned_input(
        crossings: Vec<([EdgeId; 4], i8)>,
        free_circles: Vec<i32>,
        seam: Vec<(EdgeId, i32)>,
    ) -> (DiagramInput, Result<Self, DiagramError>) {
        let target: BTreeMap<[EdgeId; 4], i8> = crossings.iter().copied().collect();
        let mut input = DiagramInput {
            crossings: crossings.iter().map(|x| x.0).collect(),
            pins: Vec::new(),
            free_circles,
            seam,
        };
        loop {
            let d = match AnnularDiagram::new(input.clone()) {
                Ok(d) => d,
                Err(e) => return (input, Err(e)),
            };
            let bad = d.crossings.iter().find(|x| target.get(&x.slots) != Some(&x.sign));
            let Some(x) = bad else { return (input, Ok(d)) };
            let want = Crossing { slots: x.slots, sign: -x.sign };
            let p = want.over_in_slot();
            let (a, b) = (x.slots[p], x.slots[(p + 2) % 4]);
            // a pin names edges only, so it may resolve at another crossing
            // of the same strand; one of the two spellings lands correctly
            let fixed = [(a, b), (b, a)].into_iter().filter(|pin| !input.pins.contains(pin)).find(|&pin| {
                let mut trial = input.clone();
                trial.pins.push(pin);
                AnnularDiagram::new(trial)
                    .map(|t| t.crossings.iter().any(|y| y.slots == want.slots && y.sign == want.sign))
                    .unwrap_or(false)
            });
            match fixed {
                Some(pin) => input.pins.push(pin),
                None => return (input.clone(), Err(DiagramError::BadPin { from: a, to: b })),
            }
        }
    }

    /// Orientation pins that a serializer must emit to reproduce this diagram.
    pub fn required_pins(&self) -> Vec<(EdgeId, EdgeId)> {
        self.to_input().pins
    }

    /// Swap over- and under-strands at every crossing. Seam data is unchanged.
    pub fn mirror(&self) -> Self {
        let input = self.to_input();
        let crossings = self
            .crossings
            .iter()
            .map(|x| {
                let [a, b, c, d] = x.slots;
                // the old over-strand becomes the under-strand
                let slots = if x.sign > 0 { [d, a, b, c] } else { [b, c, d, a] };
                (slots, -x.sign)
            })
            .collect();
        Self::from_signed(crossings, input.free_circles, input.seam).expect("mirror of a valid diagram is valid")
    }

    /// The sub-diagram consisting of the given components. Crossings with a
    /// removed strand disappear and the kept strand runs straight through.
    pub fn sublink(&self, keep: &[usize]) -> Result<Self, DiagramError> {
        for &c in keep {
            if c >= self.component_count() {
                return Err(DiagramError::BadComponent { component: c });
            }
        }
        let keep: BTreeSet<usize> = keep.iter().copied().collect();
        let ne = self.edges.len();
        // union consecutive edges across dropped crossings
        let mut parent: Vec<usize> = (0..ne).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let n = p[y];
                p[y] = r;
                y = n;
            }
            r
        }
        let mut kept_crossings = Vec::new();
        for i in 0..self.crossings.len() {
            let (u, o) = self.crossing_components(i);
            let s = self.slot_edges(i);
            match (keep.contains(&u), keep.contains(&o)) {
                (true, true) => kept_crossings.push(i),
                (true, false) => {
                    let (a, b) = (find(&mut parent, s[0]), find(&mut parent, s[2]));
                    parent[a] = b;
                }
                (false, true) => {
                    let (a, b) = (find(&mut parent, s[1]), find(&mut parent, s[3]));
                    parent[a] = b;
                }
                (false, false) => {}
            }
        }
        let mut class_id: BTreeMap<usize, EdgeId> = BTreeMap::new();
        let mut class_seam: BTreeMap<usize, i32> = BTreeMap::new();
        for e in 0..ne {
            if !keep.contains(&self.edges[e].component) {
                continue;
            }
            let r = find(&mut parent, e);
            let id = class_id.entry(r).or_insert(self.edges[e].id);
            *id = (*id).min(self.edges[e].id);
            *class_seam.entry(r).or_insert(0) += self.edges[e].seam;
        }
        let mut input = DiagramInput::default();
        let mut signed = Vec::new();
        let mut used: BTreeSet<usize> = BTreeSet::new();
        for &i in &kept_crossings {
            let s = self.slot_edges(i);
            let slots = s.map(|e| {
                let r = find(&mut parent, e);
                used.insert(r);
                class_id[&r]
            });
            signed.push((slots, self.crossings[i].sign));
        }
        for (&r, &id) in &class_id {
            if used.contains(&r) {
                if class_seam[&r] != 0 {
                    input.seam.push((id, class_seam[&r]));
                }
            } else {
                // whole component lost its crossings (or was a free circle)
                input.free_circles.push(class_seam[&r]);
            }
        }
        Self::from_signed(signed, input.free_circles, input.seam)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Hopf link in a disk with both crossings negative.
    pub(crate) fn negative_hopf() -> AnnularDiagram {
        AnnularDiagram::new(DiagramInput {
            crossings: vec![[4, 1, 3, 2], [2, 3, 1, 4]],
            pins: vec![],
            free_circles: vec![],
            seam: vec![],
        })
        .unwrap()
    }

    /// Hopf link in a disk with both crossings positive.
    pub(crate) fn hopf() -> AnnularDiagram {
        negative_hopf().mirror()
    }

    #[test]
    fn hopf_signs_and_linking() {
        let d = hopf();
        assert_eq!(d.component_count(), 2);
        assert!(d.crossings().iter().all(|x| x.sign == 1));
        let lk = d.linking_number(0, 1).unwrap();
        assert_eq!(lk, 1);
        assert_eq!(negative_hopf().linking_number(0, 1).unwrap(), -1);
        assert_eq!(d.mirror().linking_number(0, 1).unwrap(), -lk);
        assert_eq!(d.linking_number(1, 0).unwrap(), lk);
        assert!(d.linking_number(0, 0).is_err());
    }

    #[test]
    fn free_circles() {
        let d = AnnularDiagram::new(DiagramInput { free_circles: vec![1], ..Default::default() }).unwrap();
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.winding(0).unwrap(), 1);
        assert_eq!(d.wrap_upper_bound(), 1);
        let d = AnnularDiagram::new(DiagramInput { free_circles: vec![0], ..Default::default() }).unwrap();
        assert_eq!(d.winding(0).unwrap(), 0);
        assert_eq!(d.wrap_upper_bound(), 0);
    }

    #[test]
    fn multiplicity_error() {
        let e = AnnularDiagram::new(DiagramInput { crossings: vec![[1, 1, 2, 2], [3, 3, 4, 1]], ..Default::default() });
        assert!(matches!(e, Err(DiagramError::Multiplicity { edge: 1, count: 3 })));
    }

    #[test]
    fn orientation_error() {
        // edge 1 is incoming under at both ends
        let e = AnnularDiagram::new(DiagramInput { crossings: vec![[1, 2, 3, 4], [1, 3, 2, 4]], ..Default::default() });
        assert!(matches!(e, Err(DiagramError::Orientation { .. })));
    }

    #[test]
    fn unknown_seam_edge() {
        let e = AnnularDiagram::new(DiagramInput { free_circles: vec![0], seam: vec![(7, 1)], ..Default::default() });
        assert_eq!(e, Err(DiagramError::UnknownSeamEdge { edge: 7 }));
    }

    #[test]
    fn input_round_trip_and_reordering() {
        let d = hopf();
        assert_eq!(AnnularDiagram::new(d.to_input()).unwrap(), d);
        let mut inp = d.to_input();
        inp.crossings.reverse();
        assert_eq!(AnnularDiagram::new(inp).unwrap(), d);
    }

    #[test]
    fn sublink_of_hopf_is_unknot() {
        let d = hopf();
        let s = d.sublink(&[0]).unwrap();
        assert_eq!(s.crossing_count(), 0);
        assert_eq!(s.free_circles().len(), 1);
    }
}
