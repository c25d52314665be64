//! Upper bounds: sphere and BFS-prefix sweeps, separators from minimum vertex
//! cuts between far-apart regions, and greedy local refinement.

use std::collections::VecDeque;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::flow::IncrementalCut;
use super::{half, is_cut_mask, BoundKind, CutCertificate};
use crate::graphs::{component_labels, Graph, VertexId, VertexSet};

const PREFIX_CHECKS: usize = 12;
const SWAP_ATTEMPTS: usize = 60;

fn bfs_order(g: &Graph, start: VertexId) -> Vec<VertexId> {
    let mut seen = vec![false; g.vertex_count()];
    let mut order = vec![start];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    order
}

fn better(a: &VertexSet, b: &VertexSet) -> bool {
    (a.len(), a) < (b.len(), b)
}

struct Pool<'g> {
    g: &'g Graph,
    best: VertexSet,
    shortlist: Vec<VertexSet>,
}

impl<'g> Pool<'g> {
    fn offer(&mut self, s: VertexSet) {
        if !is_cut_mask(self.g, &s.mask(self.g.vertex_count())) {
            return;
        }
        if better(&s, &self.best) {
            self.best = s.clone();
        }
        if !self.shortlist.contains(&s) {
            self.shortlist.push(s);
            self.shortlist.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
            self.shortlist.truncate(4);
        }
    }
}

/// Inner and outer boundaries of every BFS prefix; offers the smallest few.
fn prefix_sweep(pool: &mut Pool<'_>, order: &[VertexId]) {
    let g = pool.g;
    let n = g.vertex_count();
    let mut in_prefix = vec![false; n];
    let mut outside_nbrs = vec![0usize; n];
    let mut inside_nbrs = vec![0usize; n];
    let (mut inner, mut outer) = (0usize, 0usize);
    let mut sizes = Vec::with_capacity(n);
    for (p, &v) in order.iter().enumerate() {
        in_prefix[v] = true;
        if inside_nbrs[v] > 0 {
            outer -= 1;
        }
        for &w in g.neighbors(v) {
            if in_prefix[w] {
                outside_nbrs[w] -= 1;
                if outside_nbrs[w] == 0 {
                    inner -= 1;
                }
            } else {
                outside_nbrs[v] += 1;
                inside_nbrs[w] += 1;
                if inside_nbrs[w] == 1 {
                    outer += 1;
                }
            }
        }
        if outside_nbrs[v] > 0 {
            inner += 1;
        }
        sizes.push((inner, p + 1, false));
        sizes.push((outer, p + 1, true));
    }
    sizes.sort();
    for &(_, p, outer_side) in sizes.iter().take(PREFIX_CHECKS) {
        let prefix = VertexSet::new(order[..p].to_vec()).mask(n);
        let s: Vec<VertexId> = if outer_side {
            (0..n)
                .filter(|&w| !prefix[w] && g.neighbors(w).iter().any(|&x| prefix[x]))
                .collect()
        } else {
            order[..p]
                .iter()
                .copied()
                .filter(|&v| g.neighbors(v).iter().any(|&x| !prefix[x]))
                .collect()
        };
        pool.offer(VertexSet::new(s));
    }
}

fn bfs_dist(g: &Graph, start: VertexId) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.vertex_count()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if dist[w] == u32::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Balanced separators between `a` and `b` by repeated piercing: after each
/// maximum flow the smaller side absorbs one cut vertex, preferring one that
/// does not open an augmenting path and then the one nearest its own terminal.
/// Every intermediate minimum cut with `value <= cap` is returned.
fn piercing_candidates(g: &Graph, a: VertexId, b: VertexId, cap: usize) -> Vec<VertexSet> {
    let n = g.vertex_count();
    let (da, db) = (bfs_dist(g, a), bfs_dist(g, b));
    let mut cutter = IncrementalCut::new(g);
    let mut out = Vec::new();
    if !cutter.can_join(a, true) || g.neighbors(a).contains(&b) {
        return out;
    }
    cutter.add(a, true);
    cutter.add(b, false);
    for _ in 0..n {
        if !cutter.augment(cap) {
            break;
        }
        let sides = cutter.sides();
        if sides.source_side <= half(n) {
            out.push(VertexSet::new(sides.source_cut.clone()));
        }
        if sides.sink_side <= half(n) {
            out.push(VertexSet::new(sides.sink_cut.clone()));
        }
        let grow_source = sides.source_side <= sides.sink_side;
        let (cut, reaching, own, other) = if grow_source {
            (&sides.source_cut, &sides.source_reaching, &da, &db)
        } else {
            (&sides.sink_cut, &sides.sink_reaching, &db, &da)
        };
        let pick = cut
            .iter()
            .copied()
            .filter(|&v| cutter.can_join(v, grow_source))
            .min_by_key(|&v| (reaching[v], own[v] as i64 - other[v] as i64, v));
        let Some(x) = pick else { break };
        let region = if grow_source {
            cutter.source_region()
        } else {
            cutter.sink_region()
        };
        for v in region {
            cutter.add(v, grow_source);
        }
        cutter.add(x, grow_source);
    }
    out
}

/// Ends of a double BFS sweep from `start`.
fn peripheral_pair(g: &Graph, start: VertexId) -> (VertexId, VertexId) {
    let a = *bfs_order(g, start).last().expect("start is reached");
    let b = *bfs_order(g, a).last().expect("a is reached");
    (a, b)
}

/// Shrinks a valid separator: drops vertices whose return would not create an
/// oversized component, and tries random swaps with outside neighbours to
/// unlock further drops. The result is valid and no larger than the input.
pub fn refine_separator<R: Rng>(g: &Graph, s: &VertexSet, rng: &mut R) -> VertexSet {
    let n = g.vertex_count();
    let m = half(n);
    let mut removed = s.mask(n);
    if !is_cut_mask(g, &removed) {
        return s.clone();
    }
    let drop_pass = |removed: &mut Vec<bool>| {
        let mut dropped = false;
        let mut labels = component_labels(g, removed);
        for v in 0..n {
            if !removed[v] {
                continue;
            }
            let mut seen: Vec<usize> = Vec::new();
            let mut merged = 1;
            for &w in g.neighbors(v) {
                let c = labels.label[w];
                if c != usize::MAX && !seen.contains(&c) {
                    seen.push(c);
                    merged += labels.sizes[c];
                }
            }
            if merged <= m {
                removed[v] = false;
                dropped = true;
                labels = component_labels(g, removed);
            }
        }
        dropped
    };
    drop_pass(&mut removed);
    let mut stale = 0;
    while stale < SWAP_ATTEMPTS {
        stale += 1;
        let members: Vec<VertexId> = (0..n).filter(|&v| removed[v]).collect();
        let Some(&v) = members.choose(rng) else { break };
        let outside: Vec<VertexId> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| !removed[w])
            .collect();
        let Some(&u) = outside.choose(rng) else {
            continue;
        };
        removed[v] = false;
        removed[u] = true;
        if !is_cut_mask(g, &removed) {
            removed[v] = true;
            removed[u] = false;
            continue;
        }
        if drop_pass(&mut removed) {
            stale = 0;
        }
    }
    VertexSet::from_mask(&removed)
}

pub(crate) fn heuristic_with_layers(g: &Graph, layers: Option<&[u32]>, seed: u64) -> CutCertificate {
    let start = Instant::now();
    let n = g.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fallback = VertexSet::new((0..n - half(n)).collect());
    let mut pool = Pool {
        g,
        best: fallback.clone(),
        shortlist: vec![fallback],
    };
    pool.offer(VertexSet::default());
    if !pool.best.is_empty() && n > 2 {
        if let Some(dist) = layers {
            let radius = dist.iter().copied().max().unwrap_or(0);
            for t in 0..=radius {
                pool.offer(VertexSet::new(
                    (0..n).filter(|&v| dist[v] == t).collect(),
                ));
            }
        }
        let starts: Vec<VertexId> = (0..4).map(|_| rng.gen_range(0..n)).collect();
        let mut pairs: Vec<(VertexId, VertexId)> =
            starts.iter().map(|&s| peripheral_pair(g, s)).collect();
        pairs.extend((0..4).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))));
        pairs.retain(|(a, b)| a != b);
        for &s in starts.iter().chain(pairs.iter().map(|(a, _)| a)) {
            prefix_sweep(&mut pool, &bfs_order(g, s));
        }
        let cap = pool.best.len();
        let found: Vec<Vec<VertexSet>> = pairs
            .par_iter()
            .map(|&(a, b)| piercing_candidates(g, a, b, cap))
            .collect();
        for s in found.into_iter().flatten() {
            pool.offer(s);
        }
        for s in pool.shortlist.clone() {
            let refined = refine_separator(g, &s, &mut rng);
            pool.offer(refined);
        }
    }
    let mut cert = CutCertificate::with_separator(g, pool.best, BoundKind::Upper);
    cert.stats.elapsed_ms = start.elapsed().as_millis() as u64;
    cert
}

/// Upper bound on `cut(g)` with a verified separator. Deterministic in `seed`.
pub fn cut_heuristic(g: &Graph, seed: u64) -> CutCertificate {
    heuristic_with_layers(g, None, seed)
}

/// As [`cut_heuristic`], additionally trying every sphere
/// `{v : dist[v] = t}` of a ball as a separator.
pub fn cut_heuristic_layered(g: &Graph, dist: &[u32], seed: u64) -> CutCertificate {
    heuristic_with_layers(g, Some(dist), seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuts::is_cut_set;
    use crate::graphs::{complete_graph, cycle_graph, grid_graph, path_graph, star_graph};

    #[test]
    fn families() {
        assert_eq!(cut_heuristic(&path_graph(30), 0).value, 1);
        assert_eq!(cut_heuristic(&cycle_graph(30), 0).value, 2);
        assert_eq!(cut_heuristic(&star_graph(9), 0).value, 1);
        assert_eq!(cut_heuristic(&complete_graph(7), 0).value, 4);
        assert_eq!(cut_heuristic(&Graph::empty(1), 0).value, 1);
        assert_eq!(cut_heuristic(&Graph::empty(0), 0).value, 0);
    }

    #[test]
    fn grid_column() {
        let g = grid_graph(9, 9);
        let c = cut_heuristic(&g, 3);
        assert!(c.value <= 9);
        assert!(is_cut_set(&g, c.separator.as_ref().unwrap()));
    }

    #[test]
    fn seeded_runs_repeat() {
        let g = grid_graph(7, 5);
        assert_eq!(cut_heuristic(&g, 11).separator, cut_heuristic(&g, 11).separator);
    }

    #[test]
    fn refinement_never_grows() {
        let g = grid_graph(6, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let start = VertexSet::new((0..20).collect());
        let out = refine_separator(&g, &start, &mut rng);
        assert!(out.len() <= 20);
        assert!(is_cut_set(&g, &out));
    }
}
