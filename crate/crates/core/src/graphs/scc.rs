//! Iterative Tarjan decomposition, shared by the emptiness checks.

/// Strongly connected components of the graph given as adjacency lists.
/// Returns one component id per vertex plus the component count. Components
/// are numbered in reverse topological order: edges between components always
/// lead from a higher id to a lower one.
pub(crate) fn tarjan_scc(adj: &[Vec<usize>]) -> (Vec<usize>, usize) {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut comp_count = 0;
    let mut next_index = 0;
    let mut calls: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        calls.push((root, 0));
        while let Some(&mut (v, ref mut child)) = calls.last_mut() {
            if *child == 0 {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if *child < adj[v].len() {
                let w = adj[v][*child];
                *child += 1;
                if index[w] == usize::MAX {
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                calls.pop();
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = comp_count;
                        if w == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
                if let Some(&mut (p, _)) = calls.last_mut() {
                    low[p] = low[p].min(low[v]);
                }
            }
        }
    }
    (comp, comp_count)
}

/// Whether component `c` is nontrivial: it contains an edge that stays inside
/// the component, so an infinite walk can remain in it.
pub(crate) fn nontrivial(adj: &[Vec<usize>], comp: &[usize], members: &[usize], c: usize) -> bool {
    members.iter().any(|&v| adj[v].iter().any(|&w| comp[w] == c))
}
