//! Emptiness checks: plain generalized Büchi emptiness of index two, the
//! reduction from pumpable emptiness to it, and the definitional pumpability
//! check used to audit witnesses.

use std::collections::BTreeSet;
use std::collections::VecDeque;

use crate::automata::{PumpAutomaton, PumpState};
use crate::graphs::cbg::{ColoredBuchiGraph, Colors, GraphError, Lasso, Vertex};
use crate::graphs::scc::{nontrivial, tarjan_scc};

/// A graph with an initial vertex and two acceptance sets, both of which an
/// accepting path must visit infinitely often.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuchiGraph {
    edges: Vec<Vec<Vertex>>,
    initial: Vertex,
    acc1: BTreeSet<Vertex>,
    acc2: BTreeSet<Vertex>,
}

impl BuchiGraph {
    pub fn new(
        vertex_count: usize,
        edge_list: &[(Vertex, Vertex)],
        initial: Vertex,
        acc1: BTreeSet<Vertex>,
        acc2: BTreeSet<Vertex>,
    ) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::Empty);
        }
        if initial >= vertex_count {
            return Err(GraphError::UnknownVertex(initial));
        }
        for &v in acc1.iter().chain(acc2.iter()) {
            if v >= vertex_count {
                return Err(GraphError::UnknownVertex(v));
            }
        }
        let mut edges = vec![BTreeSet::new(); vertex_count];
        for &(src, dst) in edge_list {
            if src >= vertex_count {
                return Err(GraphError::UnknownVertex(src));
            }
            if dst >= vertex_count {
                return Err(GraphError::UnknownVertex(dst));
            }
            edges[src].insert(dst);
        }
        let edges = edges.into_iter().map(|s| s.into_iter().collect()).collect();
        Ok(BuchiGraph { edges, initial, acc1, acc2 })
    }

    pub fn vertex_count(&self) -> usize {
        self.edges.len()
    }

    pub fn successors(&self, v: Vertex) -> &[Vertex] {
        &self.edges[v]
    }

    pub fn initial(&self) -> Vertex {
        self.initial
    }

    pub fn acc1(&self) -> &BTreeSet<Vertex> {
        &self.acc1
    }

    pub fn acc2(&self) -> &BTreeSet<Vertex> {
        &self.acc2
    }

    /// Checks that the lasso is a real path of this graph.
    pub fn contains_lasso(&self, lasso: &Lasso) -> bool {
        if lasso.cycle.is_empty() {
            return false;
        }
        let first = *lasso.stem.first().unwrap_or(&lasso.cycle[0]);
        if first != self.initial {
            return false;
        }
        let len = lasso.stem.len() + lasso.cycle.len();
        (0..len).all(|n| {
            let next = if n + 1 < len { lasso.vertex_at(n + 1) } else { lasso.cycle[0] };
            let v = lasso.vertex_at(n);
            v < self.edges.len() && self.edges[v].contains(&next)
        })
    }
}

/// Searches for a path that visits both acceptance sets infinitely often.
/// Returns a witness lasso whose cycle meets both sets, or `None` when the
/// graph is empty in this sense.
pub fn buchi_nonempty(g: &BuchiGraph) -> Option<Lasso> {
    let n = g.vertex_count();
    let reachable = reachable_from(&g.edges, g.initial);
    let (comp, comp_count) = tarjan_scc(&g.edges);
    let mut members = vec![Vec::new(); comp_count];
    for v in 0..n {
        members[comp[v]].push(v);
    }
    // Component ids are in reverse topological order; scanning upward visits
    // components closest to the sinks first, which keeps witnesses short.
    for c in 0..comp_count {
        let mem = &members[c];
        if !reachable[mem[0]] || !nontrivial(&g.edges, &comp, mem, c) {
            continue;
        }
        let a = match mem.iter().find(|v| g.acc1.contains(v)) {
            Some(&a) => a,
            None => continue,
        };
        let b = match mem.iter().find(|v| g.acc2.contains(v)) {
            Some(&b) => b,
            None => continue,
        };
        let stem_path = bfs_path(&g.edges, g.initial, a, None).expect("vertex reachable from the initial vertex");
        let inside = |v: Vertex| comp[v] == c;
        let to_b = bfs_path(&g.edges, a, b, Some(&inside)).expect("vertices share a component");
        let back = bfs_cycle_path(&g.edges, b, a, &inside).expect("component is nontrivial");
        let mut cycle = to_b;
        cycle.extend_from_slice(&back[1..back.len() - 1]);
        let stem = stem_path[..stem_path.len() - 1].to_vec();
        return Some(Lasso { stem, cycle });
    }
    None
}

fn reachable_from(adj: &[Vec<Vertex>], start: Vertex) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Shortest path from `from` to `to` (inclusive), optionally restricted to
/// vertices satisfying `within`. A trivial path `[from]` is returned when
/// `from == to`.
fn bfs_path(
    adj: &[Vec<Vertex>],
    from: Vertex,
    to: Vertex,
    within: Option<&dyn Fn(Vertex) -> bool>,
) -> Option<Vec<Vertex>> {
    if from == to {
        return Some(vec![from]);
    }
    let allowed = |v: Vertex| within.map_or(true, |f| f(v));
    let mut prev = vec![usize::MAX; adj.len()];
    prev[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if prev[w] == usize::MAX && allowed(w) {
                prev[w] = v;
                if w == to {
                    let mut path = vec![to];
                    let mut cur = to;
                    while cur != from {
                        cur = prev[cur];
                        path.push(cur);
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(w);
            }
        }
    }
    None
}

/// Shortest path from `from` back to `to` taking at least one step, staying
/// inside `within`. Used to close cycles, so `from == to` yields a genuine
/// loop rather than the trivial path.
fn bfs_cycle_path(
    adj: &[Vec<Vertex>],
    from: Vertex,
    to: Vertex,
    within: &dyn Fn(Vertex) -> bool,
) -> Option<Vec<Vertex>> {
    for &w in &adj[from] {
        if !within(w) {
            continue;
        }
        if let Some(rest) = bfs_path(adj, w, to, Some(within)) {
            let mut path = vec![from];
            path.extend(rest);
            return Some(path);
        }
    }
    None
}

/// The product of a colored Büchi graph with its pump automaton. Product
/// vertex `v * s + q` pairs graph vertex `v` with pump state `q`; the full
/// Cartesian product is materialized, so the product has exactly
/// `|V| * (8|V| + 3)` vertices.
#[derive(Clone, Debug)]
pub struct PumpReduction {
    pub graph: BuchiGraph,
    pump: PumpAutomaton<Vertex>,
}

impl PumpReduction {
    pub fn pump(&self) -> &PumpAutomaton<Vertex> {
        &self.pump
    }

    /// The source-graph vertex a product vertex projects to.
    pub fn source_vertex(&self, product: Vertex) -> Vertex {
        product / self.pump.state_count()
    }

    /// The pump state paired into a product vertex.
    pub fn pump_state(&self, product: Vertex) -> &PumpState<Vertex> {
        self.pump.state(product % self.pump.state_count())
    }
}

/// Builds the explicit product of `g` with the pump automaton over `g`'s
/// vertices. An edge `(v, s) -> (v', s')` exists when `(v, v')` is an edge of
/// `g` and `s'` is a pump successor of `s` on the letter `(v, label(v))`.
/// Acceptance sets are lifted from `g` componentwise.
pub fn reduce_to_buchi(g: &ColoredBuchiGraph) -> PumpReduction {
    let n = g.vertex_count();
    let universe: Vec<Vertex> = (0..n).collect();
    let pump = PumpAutomaton::new(&universe);
    let s = pump.state_count();
    let mut edge_list = Vec::new();
    for v in 0..n {
        for state in 0..s {
            let succ_states = pump.successor_ids(state, &v, g.label(v));
            for &v2 in g.successors(v) {
                for &s2 in &succ_states {
                    edge_list.push((v * s + state, v2 * s + s2));
                }
            }
        }
    }
    let lift = |set: &BTreeSet<Vertex>| set.iter().flat_map(|&v| (0..s).map(move |q| v * s + q)).collect();
    let graph = BuchiGraph::new(
        n * s,
        &edge_list,
        g.initial() * s + pump.initial(),
        lift(g.acc1()),
        lift(g.acc2()),
    )
    .expect("product construction yields a well-formed graph");
    PumpReduction { graph, pump }
}

/// Decides whether `g` has a pumpable path visiting both acceptance sets
/// infinitely often, returning such a path as a witness. The witness is the
/// projection of an accepting lasso of the pump product back to `g`.
pub fn pumpable_nonempty(g: &ColoredBuchiGraph) -> Option<Lasso> {
    let reduction = reduce_to_buchi(g);
    let product_lasso = buchi_nonempty(&reduction.graph)?;
    let project = |vs: &[Vertex]| vs.iter().map(|&p| reduction.source_vertex(p)).collect();
    Some(Lasso { stem: project(&product_lasso.stem), cycle: project(&product_lasso.cycle) })
}

/// The definitional pumpability check on a colored vertex sequence
/// `stem · cycle^ω`: between every pair of adjacent `r'`-change points there
/// must be positions `j < j' < j''` with the same vertex at `j` and `j''` and
/// an `r` flip at `j'`. A trailing block with no further `r'` change is
/// unconstrained.
pub fn is_pumpable_sequence<V: Eq>(stem: &[(V, Colors)], cycle: &[(V, Colors)]) -> bool {
    assert!(!cycle.is_empty(), "the cycle must be nonempty");
    let sl = stem.len();
    let cl = cycle.len();
    let at = |n: usize| -> &(V, Colors) {
        if n < sl {
            &stem[n]
        } else {
            &cycle[(n - sl) % cl]
        }
    };
    let changes_r_prime = |n: usize| n == 0 || at(n).1.r_prime != at(n - 1).1.r_prime;
    // Change-point pairs starting beyond the first cycle repetition are
    // shifts of earlier ones, and a final point with no partner inside the
    // horizon starts either a vacuous trailing block or a shifted pair, so
    // adjacent pairs up to this horizon cover every distinct block.
    let horizon = sl + 3 * cl + 2;
    let points: Vec<usize> = (0..horizon).filter(|&n| changes_r_prime(n)).collect();
    for pair in points.windows(2) {
        let (start, end) = (pair[0], pair[1]);
        if start > sl + cl {
            break;
        }
        let flips = (start + 1..end).filter(|&p| at(p).1.r != at(p - 1).1.r);
        let pumpable = flips.into_iter().any(|p| {
            (start..p).any(|j| (p + 1..end).any(|j2| at(j).0 == at(j2).0))
        });
        if !pumpable {
            return false;
        }
    }
    true
}

/// Checks the definitional pumpability of a lasso through `g`, reading each
/// vertex's colors from its label. Errors when the lasso is not a path of
/// `g`.
pub fn is_pumpable_lasso(g: &ColoredBuchiGraph, lasso: &Lasso) -> Result<bool, GraphError> {
    if !lasso.is_path_of(g) {
        return Err(GraphError::NotAPath);
    }
    let decorate = |vs: &[Vertex]| vs.iter().map(|&v| (v, g.label(v))).collect::<Vec<_>>();
    Ok(is_pumpable_sequence(&decorate(&lasso.stem), &decorate(&lasso.cycle)))
}
