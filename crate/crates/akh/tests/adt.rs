use akh::adt::{parse_adt, serialize_adt, AdtError};
use akh_core::constructions::{build_family, disjoint_union, localize, Family, FamilySpec};
use akh_core::tangle::{BalancedTangle, Slice};
use akh_core::{AnnularDiagram, DiagramError};
use proptest::prelude::*;

/// Interpret a byte string as a small balanced tangle.
fn tangle_from(width: usize, ops: &[u8]) -> BalancedTangle {
    let mut cur = width;
    let mut slices = Vec::new();
    let mut crossings = 0;
    for &op in ops {
        let pos = (op >> 3) as usize;
        match op & 7 {
            0..=3 if cur >= 2 && crossings < 7 => {
                slices.push(Slice::Cross { pos: pos % (cur - 1), left_over: op & 1 == 1 });
                crossings += 1;
            }
            4 if cur < width + 4 => {
                slices.push(Slice::Birth { pos: pos % (cur + 1) });
                cur += 2;
            }
            5 | 6 if cur > width => {
                slices.push(Slice::Death { pos: pos % (cur - 1) });
                cur -= 2;
            }
            _ => {}
        }
    }
    while cur > width {
        slices.push(Slice::Death { pos: 0 });
        cur -= 2;
    }
    BalancedTangle::new(width, slices).unwrap()
}

fn diagram_from(width: usize, ops: &[u8], local: &[u8], mirror: bool, circles: &[i8]) -> AnnularDiagram {
    let mut d = tangle_from(width, ops).annular_closure();
    if !local.is_empty() {
        d = disjoint_union(&d, &localize(&tangle_from(1, local).annular_closure()), false);
    }
    if mirror {
        d = d.mirror();
    }
    if !circles.is_empty() {
        let input = akh_core::DiagramInput { free_circles: circles.iter().map(|&s| s as i32).collect(), ..Default::default() };
        d = disjoint_union(&d, &AnnularDiagram::new(input).unwrap(), true);
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn parse_inverts_serialize(
        width in 1usize..=3,
        ops in prop::collection::vec(any::<u8>(), 0..24),
        local in prop::collection::vec(any::<u8>(), 0..8),
        mirror in any::<bool>(),
        circles in prop::collection::vec(-2i8..=2, 0..3),
    ) {
        let d = diagram_from(width, &ops, &local, mirror, &circles);
        let text = serialize_adt(&d);
        let back = parse_adt(&text).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(serialize_adt(&back), text);
    }

    #[test]
    fn line_order_does_not_matter(
        width in 1usize..=3,
        ops in prop::collection::vec(any::<u8>(), 0..24),
        seed in any::<u64>(),
    ) {
        let d = diagram_from(width, &ops, &[], false, &[]);
        let text = serialize_adt(&d);
        let mut lines: Vec<&str> = text.lines().collect();
        // a deterministic shuffle
        let mut s = seed | 1;
        for i in (1..lines.len()).rev() {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            lines.swap(i, (s % (i as u64 + 1)) as usize);
        }
        let shuffled = lines.join("\n");
        prop_assert_eq!(serialize_adt(&parse_adt(&shuffled).unwrap()), text);
    }
}

#[test]
fn crossingless_unknots() {
    assert_eq!(serialize_adt(&parse_adt("circle: 0").unwrap()).trim(), "circle: 0");
    let e = parse_adt("circle: 1").unwrap();
    assert_eq!(e.free_circles()[0].seam, 1);
    assert_eq!(e.wrap_upper_bound(), 1);
}

#[test]
fn inconsistent_duplicate_slots() {
    match parse_adt("X: 1 1 2 2\nX: 3 3 4 4\nX: 1 5 5 6").unwrap_err() {
        AdtError::Invalid { error: DiagramError::Multiplicity { edge, .. }, at } => {
            assert_eq!(edge, 1);
            assert_eq!(at, Some((1, 4)));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn comments_blank_lines_and_spacing() {
    let a = parse_adt("# hopf\n\nX:4 1 3 2\n  X: 2 3 1 4   # second\n").unwrap();
    let b = parse_adt("X: 2 3 1 4\nX: 4 1 3 2").unwrap();
    assert_eq!(a, b);
    assert_eq!(a.component_count(), 2);
}

#[test]
fn family_output_is_stable() {
    for family in Family::ALL {
        let spec = FamilySpec::new(family, 1, 2);
        let a = serialize_adt(&build_family(&spec).unwrap());
        let b = serialize_adt(&build_family(&spec).unwrap());
        assert_eq!(a, b);
        assert_eq!(serialize_adt(&parse_adt(&a).unwrap()), a);
    }
}
