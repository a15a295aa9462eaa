#![allow(dead_code)]

use akh_core::constructions::{disjoint_union, localize};
use akh_core::tangle::{BalancedTangle, Slice};
use akh_core::AnnularDiagram;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random balanced tangle with at most `max_cross` crossings.
pub fn random_tangle<R: Rng>(r: &mut R, max_width: usize, max_cross: usize) -> BalancedTangle {
    let w0 = r.gen_range(1..=max_width);
    let mut cur = w0;
    let mut slices = Vec::new();
    let mut crossings = 0;
    let steps = r.gen_range(0..=2 * max_cross + 2);
    for _ in 0..steps {
        match r.gen_range(0..6) {
            0..=2 if cur >= 2 && crossings < max_cross => {
                slices.push(Slice::Cross { pos: r.gen_range(0..cur - 1), left_over: r.gen() });
                crossings += 1;
            }
            3 if cur < max_width + 2 => {
                slices.push(Slice::Birth { pos: r.gen_range(0..=cur) });
                cur += 2;
            }
            4 | 5 if cur >= 2 && cur > w0 => {
                slices.push(Slice::Death { pos: r.gen_range(0..cur - 1) });
                cur -= 2;
            }
            _ => {}
        }
    }
    while cur > w0 {
        slices.push(Slice::Death { pos: r.gen_range(0..cur - 1) });
        cur -= 2;
    }
    BalancedTangle::new(w0, slices).expect("generator keeps tangles balanced")
}

/// Random annular diagram with at most `max_cross` crossings: a tangle
/// closure, sometimes next to a local piece or a free circle.
pub fn random_diagram<R: Rng>(r: &mut R, max_cross: usize) -> AnnularDiagram {
    let a = r.gen_range(0..=max_cross);
    let mut d = random_tangle(r, 3, a).annular_closure();
    if r.gen_bool(0.3) {
        let rest = max_cross - d.crossing_count();
        let local = localize(&random_tangle(r, 2, rest).annular_closure());
        d = disjoint_union(&d, &local, false);
    }
    if r.gen_bool(0.2) {
        d = d.mirror();
    }
    d
}
