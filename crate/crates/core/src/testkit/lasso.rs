//! Exhaustive lasso enumeration for cross-checking the emptiness searches.

use std::collections::BTreeSet;

use crate::graphs::{ColoredBuchiGraph, Lasso, Vertex};

/// Caps for [`enumerate_lassos`]. `max_count` bounds the size of the result
/// so dense graphs stay tractable; enumeration is exhaustive whenever the
/// cap is not hit.
#[derive(Clone, Copy, Debug)]
pub struct LassoCaps {
    pub max_stem: usize,
    pub max_cycle: usize,
    pub max_count: usize,
}

/// Enumerates lassos of `g` within the caps: every walk from the initial
/// vertex of length at most `max_stem` extended by every closed walk of
/// length at most `max_cycle`. Lassos describing the same infinite path are
/// deduplicated by normalizing to the shortest stem and the primitive cycle.
pub fn enumerate_lassos(g: &ColoredBuchiGraph, caps: LassoCaps) -> Vec<Lasso> {
    let mut seen: BTreeSet<(Vec<Vertex>, Vec<Vertex>)> = BTreeSet::new();
    let mut out = Vec::new();
    let mut stem = vec![g.initial()];
    enumerate_stems(g, caps, &mut stem, &mut seen, &mut out);
    out
}

fn enumerate_stems(
    g: &ColoredBuchiGraph,
    caps: LassoCaps,
    stem: &mut Vec<Vertex>,
    seen: &mut BTreeSet<(Vec<Vertex>, Vec<Vertex>)>,
    out: &mut Vec<Lasso>,
) {
    if out.len() >= caps.max_count {
        return;
    }
    // The current stem's last vertex anchors the cycle search; the stored
    // stem excludes the anchor, matching the lasso representation.
    let anchor = *stem.last().unwrap();
    let mut cycle = vec![anchor];
    enumerate_cycles(g, caps, &stem[..stem.len() - 1], &mut cycle, seen, out);
    if stem.len() <= caps.max_stem {
        for &next in g.successors(anchor) {
            stem.push(next);
            enumerate_stems(g, caps, stem, seen, out);
            stem.pop();
        }
    }
}

fn enumerate_cycles(
    g: &ColoredBuchiGraph,
    caps: LassoCaps,
    stem: &[Vertex],
    cycle: &mut Vec<Vertex>,
    seen: &mut BTreeSet<(Vec<Vertex>, Vec<Vertex>)>,
    out: &mut Vec<Lasso>,
) {
    if out.len() >= caps.max_count {
        return;
    }
    let last = *cycle.last().unwrap();
    for &next in g.successors(last) {
        if next == cycle[0] {
            let (stem, cycle) = normalize(stem, cycle);
            if seen.insert((stem.clone(), cycle.clone())) {
                out.push(Lasso { stem, cycle });
                if out.len() >= caps.max_count {
                    return;
                }
            }
        }
        if cycle.len() < caps.max_cycle {
            cycle.push(next);
            enumerate_cycles(g, caps, stem, cycle, seen, out);
            cycle.pop();
        }
    }
}

/// Shrinks a repeated cycle to its primitive root and absorbs stem steps
/// that merely rotate the cycle, so equal infinite paths get equal keys.
fn normalize(stem: &[Vertex], cycle: &[Vertex]) -> (Vec<Vertex>, Vec<Vertex>) {
    let mut cycle = cycle.to_vec();
    for root_len in 1..cycle.len() {
        if cycle.len() % root_len == 0 && cycle.chunks(root_len).all(|c| c == &cycle[..root_len]) {
            cycle.truncate(root_len);
            break;
        }
    }
    let mut stem = stem.to_vec();
    while let Some(&tail) = stem.last() {
        if tail == cycle[cycle.len() - 1] {
            stem.pop();
            cycle.rotate_right(1);
        } else {
            break;
        }
    }
    (stem, cycle)
}
