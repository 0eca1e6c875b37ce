//! Independent emptiness oracles built on reachability closure instead of
//! component decomposition, with their own product construction, so they
//! share neither algorithm nor code with the checks they audit.

use std::collections::{BTreeMap, VecDeque};

use crate::graphs::{BuchiGraph, ColoredBuchiGraph, Colors, Vertex};

/// Plain index-two emptiness by closure: the graph is nonempty exactly when
/// some reachable pair of acceptance vertices lies on a common cycle.
pub fn buchi_nonempty_oracle(g: &BuchiGraph) -> bool {
    let n = g.vertex_count();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.successors(v).to_vec()).collect();
    let reach = strict_reachability(&adj);
    let from_init: Vec<bool> =
        (0..n).map(|v| v == g.initial() || reach[g.initial()][v]).collect();
    g.acc1().iter().any(|&a| {
        from_init[a] && g.acc2().iter().any(|&b| reach_cycle(&reach, a, b))
    })
}

/// Pumpable emptiness by closure over an independently built product with
/// the block-certification automaton.
pub fn pumpable_nonempty_oracle(g: &ColoredBuchiGraph) -> bool {
    // A product state tracks what has been established about the current
    // r'-block, mirroring the certification rules from first principles.
    #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
    enum Phase {
        Fresh,
        Hold(Vertex, Colors),
        Wait(Vertex, Colors),
        Sealed(bool),
    }

    let step = |phase: Phase, vertex: Vertex, colors: Colors| -> Vec<Phase> {
        match phase {
            Phase::Fresh => vec![Phase::Hold(vertex, colors)],
            Phase::Hold(anchor, kept) => {
                if kept.r_prime != colors.r_prime {
                    return Vec::new();
                }
                let mut next = vec![Phase::Hold(anchor, kept), Phase::Hold(vertex, colors)];
                if kept.r != colors.r {
                    next.push(Phase::Wait(anchor, colors));
                }
                next
            }
            Phase::Wait(anchor, carried) => {
                if carried.r_prime != colors.r_prime {
                    Vec::new()
                } else if vertex == anchor {
                    vec![Phase::Sealed(carried.r_prime)]
                } else {
                    vec![Phase::Wait(anchor, carried)]
                }
            }
            Phase::Sealed(block) => {
                if colors.r_prime == block {
                    vec![Phase::Sealed(block)]
                } else {
                    vec![Phase::Hold(vertex, colors)]
                }
            }
        }
    };

    // Reachable product states, indexed in discovery order.
    let mut ids: BTreeMap<(Vertex, Phase), usize> = BTreeMap::new();
    let mut order: Vec<(Vertex, Phase)> = Vec::new();
    let mut adj: Vec<Vec<usize>> = Vec::new();
    let start = (g.initial(), Phase::Fresh);
    ids.insert(start, 0);
    order.push(start);
    adj.push(Vec::new());
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        let (vertex, phase) = order[id];
        let mut succ = Vec::new();
        for &v2 in g.successors(vertex) {
            for p2 in step(phase, vertex, g.label(vertex)) {
                let key = (v2, p2);
                let next = *ids.entry(key).or_insert_with(|| {
                    order.push(key);
                    adj.push(Vec::new());
                    queue.push_back(order.len() - 1);
                    order.len() - 1
                });
                succ.push(next);
            }
        }
        succ.sort();
        succ.dedup();
        adj[id] = succ;
    }

    let reach = strict_reachability(&adj);
    let in_acc1: Vec<bool> = order.iter().map(|&(v, _)| g.acc1().contains(&v)).collect();
    let in_acc2: Vec<bool> = order.iter().map(|&(v, _)| g.acc2().contains(&v)).collect();
    (0..order.len()).any(|a| {
        in_acc1[a]
            && (a == 0 || reach[0][a])
            && (0..order.len()).any(|b| in_acc2[b] && reach_cycle(&reach, a, b))
    })
}

/// `reach[u][v]` holds when `v` is reachable from `u` in at least one step.
fn strict_reachability(adj: &[Vec<usize>]) -> Vec<Vec<bool>> {
    let n = adj.len();
    let mut reach = vec![vec![false; n]; n];
    for start in 0..n {
        let mut queue: VecDeque<usize> = adj[start].iter().copied().collect();
        for &w in &adj[start] {
            reach[start][w] = true;
        }
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !reach[start][w] {
                    reach[start][w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    reach
}

/// Whether `a` and `b` lie on a common cycle: each reaches the other in at
/// least one step, or they coincide on a self-reaching vertex.
fn reach_cycle(reach: &[Vec<bool>], a: usize, b: usize) -> bool {
    if a == b {
        reach[a][a]
    } else {
        reach[a][b] && reach[b][a]
    }
}
