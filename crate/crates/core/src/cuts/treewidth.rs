use std::collections::BTreeSet;

use crate::graphs::{Graph, VertexId};

fn fill_in(adj: &[BTreeSet<VertexId>], v: VertexId) -> usize {
    let nbrs: Vec<VertexId> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

/// Greedy elimination order: least fill-in first, ties by degree, then id.
pub fn min_fill_order(g: &Graph) -> Vec<VertexId> {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<VertexId>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (fill_in(&adj, v), adj[v].len(), v))
            .expect("a vertex remains");
        let nbrs: Vec<VertexId> = adj[v].iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj[v].clear();
        alive[v] = false;
        order.push(v);
    }
    order
}

/// Width of the tree decomposition induced by an elimination order: the
/// largest number of later neighbours a vertex has when it is eliminated.
pub fn elimination_width(g: &Graph, order: &[VertexId]) -> usize {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<VertexId>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut width = 0;
    for &v in order {
        let nbrs: Vec<VertexId> = adj[v].iter().copied().collect();
        width = width.max(nbrs.len());
        for (i, &a) in nbrs.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj[v].clear();
    }
    width
}

/// Upper bound on treewidth from the min-fill elimination order.
///
/// ```
/// use sepprofile::cuts::treewidth_upper;
/// use sepprofile::graphs::{cycle_graph, path_graph};
///
/// assert_eq!(treewidth_upper(&path_graph(6)), 1);
/// assert_eq!(treewidth_upper(&cycle_graph(6)), 2);
/// ```
pub fn treewidth_upper(g: &Graph) -> usize {
    elimination_width(g, &min_fill_order(g))
}
