//! Small directed-graph helpers shared by classification, equilibrium and
//! dynamics code. Graphs here are adjacency lists over dense node ids.

use std::collections::BinaryHeap;

/// Topological order with the smallest node id first among ready nodes.
/// Returns `None` when the graph has a cycle.
pub fn topological_order(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut indeg = vec![0usize; n];
    for targets in adj {
        for &v in targets {
            indeg[v] += 1;
        }
    }
    // min-heap via Reverse ordering
    let mut ready: BinaryHeap<std::cmp::Reverse<usize>> = indeg
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == 0)
        .map(|(v, _)| std::cmp::Reverse(v))
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse(v)) = ready.pop() {
        order.push(v);
        for &w in &adj[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.push(std::cmp::Reverse(w));
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Strongly connected components, Kosaraju's two-pass scheme.
/// Components are returned with their node lists sorted ascending and the
/// component list itself sorted by smallest member, so output is canonical.
pub fn strongly_connected_components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut rev = vec![Vec::new(); n];
    for (u, targets) in adj.iter().enumerate() {
        for &v in targets {
            rev[v].push(u);
        }
    }

    // first pass: record finish order with an explicit stack
    let mut finished = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        seen[start] = true;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < adj[v].len() {
                let w = adj[v][*next];
                *next += 1;
                if !seen[w] {
                    seen[w] = true;
                    stack.push((w, 0));
                }
            } else {
                finished.push(v);
                stack.pop();
            }
        }
    }

    // second pass over the reverse graph in reverse finish order
    let mut comp_of = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for &start in finished.iter().rev() {
        if comp_of[start] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut comp = vec![start];
        comp_of[start] = id;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &rev[v] {
                if comp_of[w] == usize::MAX {
                    comp_of[w] = id;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps.sort_by_key(|c| c[0]);
    comps
}

/// Nodes reachable from any seed, following edges forward. Seeds included.
pub fn reachable_from(adj: &[Vec<usize>], seeds: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack: Vec<usize> = Vec::new();
    for &s in seeds {
        if !seen[s] {
            seen[s] = true;
            stack.push(s);
        }
    }
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn topo_rejects_cycles() {
        let chain = vec![vec![1], vec![2], vec![]];
        assert_eq!(topological_order(&chain), Some(vec![0, 1, 2]));
        let cycle = vec![vec![1], vec![2], vec![0]];
        assert_eq!(topological_order(&cycle), None);
    }

    #[test]
    fn scc_finds_cycles_and_singletons() {
        // 0 -> 1 <-> 2, 3 isolated
        let adj = vec![vec![1], vec![2], vec![1], vec![]];
        let comps = strongly_connected_components(&adj);
        assert_eq!(comps, vec![vec![0], vec![1, 2], vec![3]]);
    }

    #[test]
    fn reachability_basic() {
        let adj = vec![vec![1], vec![2], vec![], vec![0]];
        let from3 = reachable_from(&adj, &[3]);
        assert!(from3[2] && from3[0]);
        let from2 = reachable_from(&adj, &[2]);
        assert!(!from2[0] && from2[2]);
    }
}
