use std::collections::VecDeque;

use super::{Graph, VertexId, VertexSet};
use crate::error::{Error, Result};

/// Distance marker for vertices not reachable from any source.
pub const UNREACHABLE: u32 = u32::MAX;

/// Unweighted multi-source shortest-path distances.
pub fn bfs_distances(g: &Graph, sources: &VertexSet) -> Result<Vec<u32>> {
    if sources.is_empty() {
        return Err(Error::Argument("bfs_distances needs at least one source".into()));
    }
    sources.check_within(g.vertex_count())?;
    Ok(bfs_from(g, sources.as_slice(), u32::MAX))
}

/// BFS truncated at `limit` (vertices further away stay `UNREACHABLE`).
pub(crate) fn bfs_from(g: &Graph, sources: &[VertexId], limit: u32) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; g.vertex_count()];
    let mut queue = VecDeque::with_capacity(g.vertex_count());
    for &s in sources {
        if dist[s] != 0 {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let du = dist[u];
        if du >= limit {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w] == UNREACHABLE {
                dist[w] = du + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Open (`d < r`) or closed (`d <= r`) `r`-neighbourhood of `set`.
pub fn neighborhood(g: &Graph, set: &VertexSet, r: u32, closed: bool) -> Result<VertexSet> {
    if set.is_empty() {
        return Ok(VertexSet::default());
    }
    if !closed && r == 0 {
        return Ok(VertexSet::default());
    }
    let limit = if closed { r } else { r - 1 };
    set.check_within(g.vertex_count())?;
    let dist = bfs_from(g, set.as_slice(), limit);
    Ok(dist
        .iter()
        .enumerate()
        .filter_map(|(v, &d)| (d <= limit).then_some(v))
        .collect())
}

/// Closed annulus: the closed `outer`-neighbourhood minus the open
/// `inner`-neighbourhood, i.e. `inner <= d(v, set) <= outer`.
pub fn annulus(g: &Graph, set: &VertexSet, inner: u32, outer: u32) -> Result<VertexSet> {
    if inner > outer {
        return Err(Error::Argument(format!(
            "annulus inner radius {inner} exceeds outer radius {outer}"
        )));
    }
    if set.is_empty() {
        return Ok(VertexSet::default());
    }
    set.check_within(g.vertex_count())?;
    let dist = bfs_from(g, set.as_slice(), outer);
    Ok(dist
        .iter()
        .enumerate()
        .filter_map(|(v, &d)| (d >= inner && d <= outer).then_some(v))
        .collect())
}

/// Induced subgraph on `set`. Returns the subgraph and the remap table
/// (`remap[i]` is the host id of subgraph vertex `i`). Labels are carried over.
pub fn induced_subgraph(g: &Graph, set: &VertexSet) -> Result<(Graph, Vec<VertexId>)> {
    set.check_within(g.vertex_count())?;
    let mut local = vec![usize::MAX; g.vertex_count()];
    for (i, v) in set.iter().enumerate() {
        local[v] = i;
    }
    let adjacency = set
        .iter()
        .map(|v| {
            g.neighbors(v)
                .iter()
                .filter_map(|&w| (local[w] != usize::MAX).then_some(local[w]))
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>();
    let labels = g
        .labels
        .as_ref()
        .map(|l| set.iter().map(|v| l[v].clone()).collect());
    // Host adjacency is sorted and the map is monotone, so lists stay sorted.
    Ok((Graph { adjacency, labels }, set.as_slice().to_vec()))
}

/// Component labelling of `g - removed`.
#[derive(Clone, Debug)]
pub struct ComponentLabels {
    /// Component index per vertex, `usize::MAX` for removed vertices.
    pub label: Vec<usize>,
    /// Size of each component, indexed by label.
    pub sizes: Vec<usize>,
}

impl ComponentLabels {
    pub fn largest(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0)
    }
}

/// Labels the components of `g` with the vertices flagged in `removed` deleted.
/// Components are numbered in order of their smallest vertex.
pub fn component_labels(g: &Graph, removed: &[bool]) -> ComponentLabels {
    let n = g.vertex_count();
    let mut label = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if removed[s] || label[s] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        label[s] = id;
        stack.push(s);
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for &w in g.neighbors(u) {
                if !removed[w] && label[w] == usize::MAX {
                    label[w] = id;
                    stack.push(w);
                }
            }
        }
        sizes.push(size);
    }
    ComponentLabels { label, sizes }
}

/// Components of `g - removed`, largest first, ties broken by smallest id.
pub fn connected_components(g: &Graph, removed: &VertexSet) -> Vec<VertexSet> {
    let mask = removed.mask(g.vertex_count());
    let labels = component_labels(g, &mask);
    let mut parts = vec![Vec::new(); labels.sizes.len()];
    for (v, &c) in labels.label.iter().enumerate() {
        if c != usize::MAX {
            parts[c].push(v);
        }
    }
    let mut parts: Vec<VertexSet> = parts.into_iter().map(VertexSet).collect();
    parts.sort_by(|a, b| b.len().cmp(&a.len()).then(a.as_slice()[0].cmp(&b.as_slice()[0])));
    parts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{cycle_graph, grid_graph, path_graph, star_graph};

    #[test]
    fn path_distances() {
        let g = path_graph(3);
        assert_eq!(bfs_distances(&g, &VertexSet::singleton(0)).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn disconnected_pair_is_unreachable() {
        let g = Graph::empty(2);
        let d = bfs_distances(&g, &VertexSet::singleton(0)).unwrap();
        assert_eq!(d[1], UNREACHABLE);
    }

    #[test]
    fn grid_corner_distance() {
        let g = grid_graph(3, 3);
        let d = bfs_distances(&g, &VertexSet::singleton(0)).unwrap();
        assert_eq!(d[8], 4);
    }

    #[test]
    fn empty_sources_rejected() {
        assert!(bfs_distances(&path_graph(2), &VertexSet::default()).is_err());
    }

    #[test]
    fn neighborhood_edge_cases() {
        let g = cycle_graph(6);
        let v = VertexSet::singleton(0);
        assert_eq!(neighborhood(&g, &v, 0, true).unwrap(), v);
        assert!(neighborhood(&g, &v, 0, false).unwrap().is_empty());
        assert_eq!(neighborhood(&g, &v, 1, false).unwrap(), v);
        assert_eq!(neighborhood(&g, &v, 2, true).unwrap().len(), 5);
    }

    #[test]
    fn annulus_cases() {
        let g = path_graph(5);
        let mid = VertexSet::singleton(2);
        assert_eq!(annulus(&g, &mid, 1, 2).unwrap().as_slice(), &[0, 1, 3, 4]);
        assert_eq!(
            annulus(&g, &mid, 0, 1).unwrap(),
            neighborhood(&g, &mid, 1, true).unwrap()
        );
        assert_eq!(annulus(&g, &mid, 2, 2).unwrap().as_slice(), &[0, 4]);
        assert!(annulus(&g, &mid, 3, 2).is_err());
    }

    #[test]
    fn induced_subgraph_cases() {
        let g = grid_graph(3, 3);
        let (single, map) = induced_subgraph(&g, &VertexSet::singleton(4)).unwrap();
        assert_eq!((single.vertex_count(), single.edge_count()), (1, 0));
        assert_eq!(map, vec![4]);
        let (full, _) = induced_subgraph(&g, &VertexSet::all(9)).unwrap();
        assert_eq!(full, g);
        // 3x3 grid minus its middle column splits into two 3-vertex paths
        let keep: VertexSet = (0..9).filter(|v| v % 3 != 1).collect();
        let (sub, _) = induced_subgraph(&g, &keep).unwrap();
        let comps = connected_components(&sub, &VertexSet::default());
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.len() == 3));
    }

    #[test]
    fn components_after_removal() {
        let c6 = cycle_graph(6);
        let comps = connected_components(&c6, &VertexSet::new(vec![0, 3]));
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].as_slice(), &[1, 2]);
        assert_eq!(comps[1].as_slice(), &[4, 5]);
        assert_eq!(connected_components(&c6, &VertexSet::default()).len(), 1);

        let star = star_graph(5);
        let comps = connected_components(&star, &VertexSet::singleton(0));
        assert_eq!(comps.len(), 5);
        assert!(comps.iter().all(|c| c.len() <= 3));
    }
}
