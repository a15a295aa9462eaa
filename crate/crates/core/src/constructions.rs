//! Diagram-level builders: disjoint union, connected sum, and the named link
//! families (stacked necklaces, their cables, Whitehead doubles).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::diagram::{AnnularDiagram, DiagramError, EdgeId};
use crate::tangle::{tangle_j, BalancedTangle, BraidWord, TangleError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstructionError {
    /// A summand that should sit in a disk meets the seam.
    SeamInDisk,
    /// The named arc is not an edge of its diagram.
    UnknownArc { edge: EdgeId },
    /// Connected sum needs a nonempty diagram on both sides.
    EmptySummand,
    /// Family parameters out of range.
    Parameter(&'static str),
    Tangle(TangleError),
    Diagram(DiagramError),
}

impl fmt::Display for ConstructionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionError::SeamInDisk => write!(f, "summand placed in a disk has nonzero seam counts"),
            ConstructionError::UnknownArc { edge } => write!(f, "arc {edge} is not an edge of the diagram"),
            ConstructionError::EmptySummand => write!(f, "connected sum with an empty diagram"),
            ConstructionError::Parameter(what) => write!(f, "bad family parameter: {what}"),
            ConstructionError::Tangle(e) => write!(f, "{e}"),
            ConstructionError::Diagram(e) => write!(f, "{e}"),
        }
    }
}

impl From<TangleError> for ConstructionError {
    fn from(e: TangleError) -> Self {
        ConstructionError::Tangle(e)
    }
}

impl From<DiagramError> for ConstructionError {
    fn from(e: DiagramError) -> Self {
        ConstructionError::Diagram(e)
    }
}

/// Signed crossings, per-edge seam counts and free circles of a diagram,
/// with edge labels shifted by `offset`.
struct Parts {
    crossings: Vec<([EdgeId; 4], i8)>,
    seam: Vec<(EdgeId, i32)>,
    free: Vec<i32>,
}

fn parts(d: &AnnularDiagram, offset: EdgeId, keep_seam: bool) -> Parts {
    let crossings = d.crossings().iter().map(|x| (x.slots.map(|e| e + offset), x.sign)).collect();
    let seam = if keep_seam {
        d.edges()
            .iter()
            .filter(|e| e.tail.is_some() && e.seam != 0)
            .map(|e| (e.id + offset, e.seam))
            .collect()
    } else {
        Vec::new()
    };
    let free = d.free_circles().iter().map(|f| if keep_seam { f.seam } else { 0 }).collect();
    Parts { crossings, seam, free }
}

fn max_crossing_edge(d: &AnnularDiagram) -> EdgeId {
    d.crossings().iter().flat_map(|x| x.slots).max().unwrap_or(0)
}

/// True when no edge or free circle meets the seam.
pub fn is_local(d: &AnnularDiagram) -> bool {
    d.edges().iter().all(|e| e.seam == 0)
}

/// The same diagram moved into a disk away from the seam.
pub fn localize(d: &AnnularDiagram) -> AnnularDiagram {
    let p = parts(d, 0, false);
    AnnularDiagram::from_signed(p.crossings, p.free, p.seam).expect("dropping seam data keeps a diagram valid")
}

/// Disjoint union. With `annular` the second diagram keeps its seam counts
/// (the two pieces sit in concentric annuli); otherwise it is placed inside a
/// disk and all its seam counts are zero.
pub fn disjoint_union(d1: &AnnularDiagram, d2: &AnnularDiagram, annular: bool) -> AnnularDiagram {
    let mut a = parts(d1, 0, true);
    let b = parts(d2, max_crossing_edge(d1), annular);
    a.crossings.extend(b.crossings);
    a.seam.extend(b.seam);
    a.free.extend(b.free);
    AnnularDiagram::from_signed(a.crossings, a.free, a.seam).expect("disjoint union of valid diagrams is valid")
}

fn default_arc(d: &AnnularDiagram) -> Option<EdgeId> {
    d.edges().first().map(|e| e.id)
}

/// Connected sum of `d1` with a diagram `d2` lying in a disk, banding edge
/// `arcs.0` of `d1` to edge `arcs.1` of `d2` (the first edge of each by
/// default). Orientations are respected.
pub fn connected_sum(
    d1: &AnnularDiagram,
    d2: &AnnularDiagram,
    arcs: Option<(EdgeId, EdgeId)>,
) -> Result<AnnularDiagram, ConstructionError> {
    if !is_local(d2) {
        return Err(ConstructionError::SeamInDisk);
    }
    let (e1, e2) = match arcs {
        Some(a) => a,
        None => (
            default_arc(d1).ok_or(ConstructionError::EmptySummand)?,
            default_arc(d2).ok_or(ConstructionError::EmptySummand)?,
        ),
    };
    let i1 = d1.edge_index(e1).ok_or(ConstructionError::UnknownArc { edge: e1 })?;
    let i2 = d2.edge_index(e2).ok_or(ConstructionError::UnknownArc { edge: e2 })?;
    let (info1, info2) = (&d1.edges()[i1], &d2.edges()[i2]);
    let offset = max_crossing_edge(d1);
    let mut a = parts(d1, 0, true);
    let mut b = parts(d2, offset, false);
    let free_pos = |d: &AnnularDiagram, i: usize| i - (d.edges().len() - d.free_circles().len());

    match (info1.head, info2.head) {
        (_, None) => {
            // summing with an unknot changes nothing
            b.free.remove(free_pos(d2, i2));
        }
        (None, Some(_)) => {
            let s = a.free.remove(free_pos(d1, i1));
            if s != 0 {
                b.seam.push((e2 + offset, s));
            }
        }
        (Some(h1), Some(h2)) => {
            // e1 now ends where e2 ended and vice versa
            let e2s = e2 + offset;
            a.crossings[h1.0].0[h1.1] = e2s;
            b.crossings[h2.0].0[h2.1] = e1;
        }
    }
    a.crossings.extend(b.crossings);
    a.seam.extend(b.seam);
    a.free.extend(b.free);
    Ok(AnnularDiagram::from_signed(a.crossings, a.free, a.seam)?)
}

/// Named link families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Closure of `n` stacked copies of J, each component cabled `m` times.
    Necklace,
    /// Same as the necklace; kept as a separate tag for cabled instances.
    Cable,
    /// `n`-fold iterated Whitehead double of the closure of J, then cabled.
    Whitehead,
    /// Cabled necklace together with a local right-handed trefoil.
    Disjoint,
    /// Cabled necklace connect-summed with a local right-handed trefoil.
    Consum,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Necklace, Family::Cable, Family::Whitehead, Family::Disjoint, Family::Consum];

    pub fn name(self) -> &'static str {
        match self {
            Family::Necklace => "necklace",
            Family::Cable => "cable",
            Family::Whitehead => "whitehead",
            Family::Disjoint => "disjoint",
            Family::Consum => "consum",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters of a family member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    /// Braids inserted into the cables: none (trivial braids), one shared by
    /// every component, or one per component.
    pub braids: Vec<BraidWord>,
    pub clasp: i8,
}

impl FamilySpec {
    pub fn new(family: Family, n: usize, m: usize) -> Self {
        FamilySpec { family, n, m, braids: Vec::new(), clasp: 1 }
    }

    pub fn with_braids(mut self, braids: Vec<BraidWord>) -> Self {
        self.braids = braids;
        self
    }

    pub fn with_clasp(mut self, sign: i8) -> Self {
        self.clasp = sign;
        self
    }
}

fn cable_all(t: &BalancedTangle, m: usize, braids: &[BraidWord]) -> Result<BalancedTangle, ConstructionError> {
    let (_, nc) = t.closure_components();
    let inserts: Vec<Option<BalancedTangle>> = match braids.len() {
        0 => vec![None; nc],
        1 => vec![Some(braids[0].to_tangle()); nc],
        k if k == nc => braids.iter().map(|b| Some(b.to_tangle())).collect(),
        _ => return Err(ConstructionError::Parameter("braid count must be 0, 1 or the component count")),
    };
    if braids.iter().any(|b| b.strands() != m) {
        return Err(ConstructionError::Parameter("braid strand count must equal m"));
    }
    Ok(t.cable_components(&vec![m; nc], &inserts)?)
}

/// The right-handed trefoil drawn inside a disk.
pub fn local_trefoil() -> AnnularDiagram {
    let b = BraidWord::new(2, vec![1, 1, 1]).expect("valid braid");
    localize(&b.to_tangle().annular_closure())
}

/// The balanced tangle whose closure is the family member, for the families
/// that are closures.
pub fn family_tangle(spec: &FamilySpec) -> Result<BalancedTangle, ConstructionError> {
    if spec.n == 0 || spec.m == 0 {
        return Err(ConstructionError::Parameter("n and m must be positive"));
    }
    let base = match spec.family {
        Family::Whitehead => {
            let mut t = tangle_j();
            for _ in 0..spec.n {
                t = t.whitehead_double(0, spec.clasp)?;
            }
            t
        }
        _ => tangle_j().power(spec.n),
    };
    cable_all(&base, spec.m, &spec.braids)
}

/// Build a family member.
pub fn build_family(spec: &FamilySpec) -> Result<AnnularDiagram, ConstructionError> {
    let d = family_tangle(spec)?.annular_closure();
    Ok(match spec.family {
        Family::Disjoint => disjoint_union(&d, &local_trefoil(), false),
        Family::Consum => connected_sum(&d, &local_trefoil(), None)?,
        _ => d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::all_ones_report;
    use crate::tangle::BraidWord;

    fn essential_unknot() -> AnnularDiagram {
        BalancedTangle::identity(1).annular_closure()
    }

    #[test]
    fn union_counts_and_seams() {
        let l1 = tangle_j().annular_closure();
        let u = disjoint_union(&l1, &l1, true);
        assert_eq!(u.component_count(), 2);
        assert_eq!(u.wrap_upper_bound(), 4);
        let v = disjoint_union(&l1, &l1, false);
        assert_eq!(v.wrap_upper_bound(), 2);
        assert_eq!(disjoint_union(&l1, &AnnularDiagram::empty(), true), l1);
        let w = disjoint_union(&essential_unknot(), &essential_unknot(), true);
        assert_eq!(w.free_circles().len(), 2);
    }

    #[test]
    fn connected_sum_components() {
        let l2 = tangle_j().power(2).annular_closure();
        let t = local_trefoil();
        assert!(is_local(&t));
        let s = connected_sum(&l2, &t, None).unwrap();
        assert_eq!(s.component_count(), 2);
        assert_eq!(s.crossing_count(), 7);
        assert_eq!(s.wrap_upper_bound(), 2);
        assert_eq!(connected_sum(&l2, &l2, None), Err(ConstructionError::SeamInDisk));
        // unknot summands
        let u = localize(&essential_unknot());
        assert_eq!(connected_sum(&l2, &u, None).unwrap(), l2);
        let e = connected_sum(&essential_unknot(), &t, None).unwrap();
        assert_eq!(e.component_count(), 1);
        assert_eq!(e.wrap_upper_bound(), 1);
        assert_eq!(e.crossing_count(), 3);
    }

    #[test]
    fn families() {
        let d = build_family(&FamilySpec::new(Family::Necklace, 2, 1)).unwrap();
        assert_eq!(d.component_count(), 2);
        let s1 = BraidWord::new(2, vec![1]).unwrap();
        let d = build_family(&FamilySpec::new(Family::Cable, 1, 2).with_braids(vec![s1])).unwrap();
        assert_eq!(d.crossing_count(), 9);
        assert_eq!(d.component_count(), 1);
        let k = build_family(&FamilySpec::new(Family::Whitehead, 1, 1)).unwrap();
        let r = all_ones_report(&k);
        assert!(r.adequate && r.wrapped);
        assert_eq!(k.crossing_count(), 10);
        let bad = FamilySpec::new(Family::Cable, 1, 2).with_braids(vec![BraidWord::new(3, vec![]).unwrap()]);
        assert!(build_family(&bad).is_err());
        assert_eq!(Family::from_name("consum"), Some(Family::Consum));
    }
}
