//! Flow arguments: the multicommodity congestion lower bound on `cut(Γ)` and
//! unit-capacity minimum vertex cuts.
//!
//! Route one unit between every pair of vertices in the same component. If
//! `S` is a cut set of size `k`, every pair split by `S` sends its unit
//! through `S`, and at most `Σ c_i(c_i - 1)/2` pairs can stay together when
//! the `n - k` survivors form pieces `c_i ≤ ⌊n/2⌋`. So the `k` most congested
//! vertices must carry at least the number of split pairs; the least `k` for
//! which that is possible is a lower bound. Averaging routings that avoid
//! congested vertices (multiplicative weights) makes the bound tight on
//! lattice balls.

use std::collections::VecDeque;

use rayon::prelude::*;

use super::half;
use crate::graphs::{component_labels, Graph, VertexId, VertexSet};

#[derive(Clone, Debug)]
pub struct LowerBoundOptions {
    /// Multiplicative-weights rounds.
    pub iterations: usize,
    /// Cost sharpness: a vertex at the current maximum load costs `e^eta`.
    pub eta: f64,
    /// Largest graph that gets every round.
    pub full_limit: usize,
    /// Largest graph that gets a single uniform round; above it only the
    /// trivial bound is reported.
    pub single_round_limit: usize,
    /// Stop as soon as the bound reaches this value.
    pub target: Option<usize>,
}

impl Default for LowerBoundOptions {
    fn default() -> Self {
        LowerBoundOptions {
            iterations: 48,
            eta: 8.0,
            full_limit: 2_500,
            single_round_limit: 8_000,
            target: None,
        }
    }
}

/// Averaged per-vertex loads of a valid fractional routing (endpoints
/// included) and the bound they certify.
#[derive(Clone, Debug)]
pub struct Congestion {
    pub load: Vec<f64>,
    pub bound: usize,
    pub rounds: usize,
    pub work: u64,
    /// Pairs lying in a common component of the input graph.
    pub connected_pairs: u128,
}

/// `C(x, 2)`.
fn pairs(x: u128) -> u128 {
    x * x.saturating_sub(1) / 2
}

/// Least number of pairs that a cut set of size `k` must separate.
pub(crate) fn demand(n: usize, k: usize, connected_pairs: u128) -> f64 {
    let m = half(n) as u128;
    let t = (n - k) as u128;
    if m == 0 {
        return connected_pairs as f64;
    }
    let q = t / m;
    let rem = t - q * m;
    let together = q * pairs(m) + pairs(rem);
    connected_pairs as f64 - together as f64
}

/// Relative slack when comparing float sums to integer demands: it only ever
/// lowers the reported bound.
const SLACK: f64 = 1e-9;

pub(crate) fn certify(n: usize, load: &[f64], connected_pairs: u128) -> usize {
    if n <= 1 {
        return n;
    }
    let mut sorted = load.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut prefix = 0.0;
    for k in 0..=n {
        let need = demand(n, k, connected_pairs);
        if prefix >= need * (1.0 - SLACK) - SLACK {
            return k;
        }
        if k < n {
            prefix += sorted[k];
        }
    }
    n
}

/// One routing round with vertex costs `cost`, avoiding `blocked` vertices;
/// returns loads and work. Sources are processed in fixed blocks and block
/// sums are added in order, so the result does not depend on scheduling.
fn route(g: &Graph, cost: &[f64], blocked: Option<&[bool]>, parallel: bool) -> (Vec<f64>, u64) {
    let n = g.vertex_count();
    let chunk = (n / 128).max(64);
    let sources: Vec<VertexId> = (0..n)
        .filter(|&v| blocked.is_none_or(|b| !b[v]))
        .collect();
    let run = |block: &[VertexId]| {
        let mut load = vec![0.0f64; n];
        let mut dist = vec![u32::MAX; n];
        if let Some(b) = blocked {
            for v in 0..n {
                if b[v] {
                    dist[v] = u32::MAX - 1;
                }
            }
        }
        let mut path_cost = vec![0.0f64; n];
        let mut flow = vec![0.0f64; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::new();
        let mut best = Vec::new();
        let mut work = 0u64;
        let pred = |dist: &[u32], p: VertexId, v: VertexId| dist[p] < u32::MAX - 1 && dist[p] + 1 == dist[v];
        for &s in block {
            order.clear();
            dist[s] = 0;
            path_cost[s] = cost[s];
            order.push(s);
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in g.neighbors(u) {
                    if dist[w] == u32::MAX {
                        dist[w] = dist[u] + 1;
                        order.push(w);
                        queue.push_back(w);
                    }
                }
            }
            for &v in &order[1..] {
                let mut m = f64::INFINITY;
                for &p in g.neighbors(v) {
                    if pred(&dist, p, v) && path_cost[p] < m {
                        m = path_cost[p];
                    }
                }
                path_cost[v] = m + cost[v];
            }
            for &v in &order {
                flow[v] = if v > s { 1.0 } else { 0.0 };
            }
            for &v in order[1..].iter().rev() {
                let f = flow[v];
                load[v] += f;
                if f == 0.0 {
                    continue;
                }
                let mut m = f64::INFINITY;
                for &p in g.neighbors(v) {
                    if pred(&dist, p, v) && path_cost[p] < m {
                        m = path_cost[p];
                    }
                }
                // exact equality: every unit must leave along some predecessor
                best.clear();
                best.extend(
                    g.neighbors(v)
                        .iter()
                        .copied()
                        .filter(|&p| pred(&dist, p, v) && path_cost[p] == m),
                );
                let share = f / best.len() as f64;
                for &p in &best {
                    flow[p] += share;
                }
            }
            load[s] += flow[s];
            for &v in &order {
                work += 3 * g.degree(v) as u64;
                dist[v] = u32::MAX;
            }
        }
        (load, work)
    };
    let parts: Vec<(Vec<f64>, u64)> = if parallel {
        sources.par_chunks(chunk).map(run).collect()
    } else {
        sources.chunks(chunk).map(run).collect()
    };
    let mut load = vec![0.0; n];
    let mut work = 0;
    for (part, w) in parts {
        for (a, b) in load.iter_mut().zip(part) {
            *a += b;
        }
        work += w;
    }
    (load, work)
}

fn reweight(cost: &mut [f64], avg: &[f64], eta: f64) {
    let max = avg.iter().copied().fold(0.0, f64::max);
    if max > 0.0 {
        for (c, a) in cost.iter_mut().zip(avg) {
            *c = (eta * a / max).exp();
        }
    }
}

/// Branch-and-bound node test: with `blocked` already in the separator, can
/// `slots` more vertices taken from `open` complete a cut set? Returns `true`
/// when a routing of the surviving graph proves they cannot.
pub(crate) fn residual_prunes(
    g: &Graph,
    blocked: &[bool],
    open: &[bool],
    slots: usize,
    rounds: usize,
    eta: f64,
) -> (bool, u64) {
    let n = g.vertex_count();
    let m = half(n);
    let labels = component_labels(g, blocked);
    let alive = n - blocked.iter().filter(|&&b| b).count();
    let connected_pairs: u128 = labels.sizes.iter().map(|&c| pairs(c as u128)).sum();
    let open_count = open.iter().filter(|&&o| o).count();
    let take = slots.min(open_count);
    let t = (alive - take) as u128;
    let together = if m == 0 {
        0
    } else {
        let mm = m as u128;
        (t / mm) * pairs(mm) + pairs(t % mm)
    };
    if together >= connected_pairs {
        return (false, 0);
    }
    let need = (connected_pairs - together) as f64;
    let mut cost = vec![1.0; n];
    let mut acc = vec![0.0; n];
    let mut work = 0;
    let mut top = Vec::with_capacity(open_count);
    for round in 1..=rounds {
        let (load, w) = route(g, &cost, Some(blocked), false);
        work += w;
        for (a, l) in acc.iter_mut().zip(&load) {
            *a += l;
        }
        let avg: Vec<f64> = acc.iter().map(|a| a / round as f64).collect();
        top.clear();
        top.extend((0..n).filter(|&v| open[v]).map(|v| avg[v]));
        top.sort_by(|a, b| b.total_cmp(a));
        let have: f64 = top[..take].iter().sum();
        if have < need * (1.0 - SLACK) - SLACK {
            return (true, work);
        }
        reweight(&mut cost, &avg, eta);
    }
    (false, work)
}

/// Certified lower bound on `cut(g)` from averaged shortest-path routings.
///
/// ```
/// use sepprofile::cuts::{congestion_lower_bound, LowerBoundOptions};
/// use sepprofile::graphs::{cycle_graph, grid_graph};
///
/// let c = congestion_lower_bound(&cycle_graph(12), &LowerBoundOptions::default());
/// assert_eq!(c.bound, 2);
/// // valid but not tight: cut(grid) is 5
/// let g = congestion_lower_bound(&grid_graph(5, 5), &LowerBoundOptions::default());
/// assert!((1..=5).contains(&g.bound));
/// ```
pub fn congestion_lower_bound(g: &Graph, opts: &LowerBoundOptions) -> Congestion {
    let n = g.vertex_count();
    let labels = component_labels(g, &vec![false; n]);
    let connected_pairs: u128 = labels.sizes.iter().map(|&c| pairs(c as u128)).sum();
    let trivial = if n <= 1 {
        n
    } else {
        usize::from(labels.largest() > half(n))
    };
    let rounds = if n <= opts.full_limit {
        opts.iterations.max(1)
    } else if n <= opts.single_round_limit {
        1
    } else {
        0
    };
    let mut best = Congestion {
        load: vec![0.0; n],
        bound: trivial,
        rounds: 0,
        work: 0,
        connected_pairs,
    };
    let mut cost = vec![1.0; n];
    let mut acc = vec![0.0; n];
    let mut work = 0;
    for t in 1..=rounds {
        let (load, w) = route(g, &cost, None, true);
        work += w;
        for (a, l) in acc.iter_mut().zip(&load) {
            *a += l;
        }
        let avg: Vec<f64> = acc.iter().map(|a| a / t as f64).collect();
        let bound = certify(n, &avg, connected_pairs);
        if bound > best.bound || t == 1 {
            best.bound = best.bound.max(bound);
            best.load = avg.clone();
        }
        best.rounds = t;
        if opts.target.is_some_and(|target| best.bound >= target) {
            break;
        }
        reweight(&mut cost, &avg, opts.eta);
    }
    best.work = work;
    best
}

/// Minimum vertex cut between two disjoint vertex sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinVertexCut {
    pub value: usize,
    /// The cut closest to the sources.
    pub source_side: VertexSet,
    /// The cut closest to the sinks.
    pub sink_side: VertexSet,
}

/// Residual network on split vertices: node `2v` is `v_in`, `2v + 1` is
/// `v_out`; arcs are stored in pairs so `a ^ 1` is the reverse of `a`.
pub(crate) struct SplitNetwork {
    head: Vec<usize>,
    cap: Vec<u32>,
    out: Vec<Vec<usize>>,
}

const INF: u32 = u32::MAX / 4;

impl SplitNetwork {
    fn arc(&mut self, from: usize, to: usize, cap: u32) {
        self.out[from].push(self.head.len());
        self.head.push(to);
        self.cap.push(cap);
        self.out[to].push(self.head.len());
        self.head.push(from);
        self.cap.push(0);
    }

    /// Nodes reachable from `start` along arcs with residual capacity, or
    /// nodes that can reach `start` when `backward`.
    fn reach(&self, start: usize, backward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.out[u] {
                let residual = if backward { self.cap[a ^ 1] } else { self.cap[a] };
                let w = self.head[a];
                if residual > 0 && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }
}

/// Growing terminal sets with an incrementally maintained maximum flow:
/// adding terminals keeps the current flow feasible, so each step only
/// augments by the difference.
pub(crate) struct IncrementalCut<'g> {
    g: &'g Graph,
    net: SplitNetwork,
    pub(crate) source: Vec<bool>,
    pub(crate) sink: Vec<bool>,
    pub(crate) value: usize,
    parent: Vec<usize>,
}

/// Residual reachability after [`IncrementalCut::augment`].
pub(crate) struct Sides {
    /// the cut next to the sources and the vertices behind it
    pub(crate) source_cut: Vec<VertexId>,
    pub(crate) source_side: usize,
    pub(crate) sink_cut: Vec<VertexId>,
    pub(crate) sink_side: usize,
    /// cut vertices that can still reach the sinks (piercing them would
    /// create an augmenting path), per side
    pub(crate) source_reaching: Vec<bool>,
    pub(crate) sink_reaching: Vec<bool>,
}

impl<'g> IncrementalCut<'g> {
    pub(crate) fn new(g: &'g Graph) -> Self {
        let n = g.vertex_count();
        let mut net = SplitNetwork {
            head: Vec::new(),
            cap: Vec::new(),
            out: vec![Vec::new(); 2 * n + 2],
        };
        for v in 0..n {
            // arc 2v is v_in -> v_out
            net.arc(2 * v, 2 * v + 1, 1);
        }
        for v in 0..n {
            for &w in g.neighbors(v) {
                net.arc(2 * v + 1, 2 * w, INF);
            }
        }
        IncrementalCut {
            g,
            net,
            source: vec![false; n],
            sink: vec![false; n],
            value: 0,
            parent: vec![usize::MAX; 2 * n + 2],
        }
    }

    /// Whether `v` could join the given side without touching the other one.
    pub(crate) fn can_join(&self, v: VertexId, as_source: bool) -> bool {
        let other = if as_source { &self.sink } else { &self.source };
        !other[v] && !self.g.neighbors(v).iter().any(|&w| other[w])
    }

    pub(crate) fn add(&mut self, v: VertexId, as_source: bool) {
        let n = self.g.vertex_count();
        let side = if as_source { &mut self.source } else { &mut self.sink };
        if side[v] {
            return;
        }
        side[v] = true;
        self.net.cap[2 * v] += INF;
        if as_source {
            self.net.arc(2 * n, 2 * v, INF);
        } else {
            self.net.arc(2 * v + 1, 2 * n + 1, INF);
        }
    }

    /// Augments to a maximum flow; `false` once the value exceeds `cap`.
    pub(crate) fn augment(&mut self, cap: usize) -> bool {
        let n = self.g.vertex_count();
        let (s, t) = (2 * n, 2 * n + 1);
        loop {
            self.parent.fill(usize::MAX);
            let mut queue = VecDeque::from([s]);
            let mut found = false;
            'bfs: while let Some(u) = queue.pop_front() {
                for &a in &self.net.out[u] {
                    let w = self.net.head[a];
                    if self.net.cap[a] > 0 && w != s && self.parent[w] == usize::MAX {
                        self.parent[w] = a;
                        if w == t {
                            found = true;
                            break 'bfs;
                        }
                        queue.push_back(w);
                    }
                }
            }
            if !found {
                return true;
            }
            self.value += 1;
            if self.value > cap {
                return false;
            }
            let mut v = t;
            while v != s {
                let a = self.parent[v];
                self.net.cap[a] -= 1;
                self.net.cap[a ^ 1] += 1;
                v = self.net.head[a ^ 1];
            }
        }
    }

    pub(crate) fn sides(&self) -> Sides {
        let n = self.g.vertex_count();
        let forward = self.net.reach(2 * n, false);
        let backward = self.net.reach(2 * n + 1, true);
        let mut sides = Sides {
            source_cut: Vec::new(),
            source_side: 0,
            sink_cut: Vec::new(),
            sink_side: 0,
            source_reaching: vec![false; n],
            sink_reaching: vec![false; n],
        };
        for v in 0..n {
            let (fi, fo) = (forward[2 * v], forward[2 * v + 1]);
            let (bi, bo) = (backward[2 * v], backward[2 * v + 1]);
            if fi && !fo {
                sides.source_cut.push(v);
            } else if fi && fo {
                sides.source_side += 1;
            }
            if bo && !bi {
                sides.sink_cut.push(v);
            } else if bi && bo {
                sides.sink_side += 1;
            }
            sides.source_reaching[v] = bo;
            sides.sink_reaching[v] = fi;
        }
        sides
    }

    /// Vertices on the source side of the source cut (forward reachable).
    pub(crate) fn source_region(&self) -> Vec<VertexId> {
        let n = self.g.vertex_count();
        let forward = self.net.reach(2 * n, false);
        (0..n).filter(|&v| forward[2 * v] && forward[2 * v + 1]).collect()
    }

    pub(crate) fn sink_region(&self) -> Vec<VertexId> {
        let n = self.g.vertex_count();
        let backward = self.net.reach(2 * n + 1, true);
        (0..n).filter(|&v| backward[2 * v] && backward[2 * v + 1]).collect()
    }
}

/// Smallest set of vertices outside `sources ∪ sinks` meeting every path
/// from `sources` to `sinks`, by unit-capacity augmenting paths on the
/// split graph. Returns `None` if the sets touch or the cut exceeds `cap`.
pub fn min_vertex_cut(
    g: &Graph,
    sources: &[bool],
    sinks: &[bool],
    cap: usize,
) -> Option<MinVertexCut> {
    let n = g.vertex_count();
    for u in 0..n {
        if sources[u] && (sinks[u] || g.neighbors(u).iter().any(|&w| sinks[w])) {
            return None;
        }
    }
    let (s, t) = (2 * n, 2 * n + 1);
    let mut net = SplitNetwork {
        head: Vec::new(),
        cap: Vec::new(),
        out: vec![Vec::new(); 2 * n + 2],
    };
    for v in 0..n {
        let terminal = sources[v] || sinks[v];
        net.arc(2 * v, 2 * v + 1, if terminal { INF } else { 1 });
        for &w in g.neighbors(v) {
            net.arc(2 * v + 1, 2 * w, INF);
        }
        if sources[v] {
            net.arc(s, 2 * v, INF);
        }
        if sinks[v] {
            net.arc(2 * v + 1, t, INF);
        }
    }
    let mut value = 0;
    let mut parent = vec![usize::MAX; 2 * n + 2];
    loop {
        parent.fill(usize::MAX);
        let mut queue = VecDeque::from([s]);
        let mut found = false;
        'bfs: while let Some(u) = queue.pop_front() {
            for &a in &net.out[u] {
                let w = net.head[a];
                if net.cap[a] > 0 && w != s && parent[w] == usize::MAX {
                    parent[w] = a;
                    if w == t {
                        found = true;
                        break 'bfs;
                    }
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        value += 1;
        if value > cap {
            return None;
        }
        let mut v = t;
        while v != s {
            let a = parent[v];
            net.cap[a] -= 1;
            net.cap[a ^ 1] += 1;
            v = net.head[a ^ 1];
        }
    }
    let forward = net.reach(s, false);
    let backward = net.reach(t, true);
    let inner = |v: usize| !(sources[v] || sinks[v]);
    let source_side: Vec<VertexId> = (0..n)
        .filter(|&v| inner(v) && forward[2 * v] && !forward[2 * v + 1])
        .collect();
    let sink_side: Vec<VertexId> = (0..n)
        .filter(|&v| inner(v) && backward[2 * v + 1] && !backward[2 * v])
        .collect();
    debug_assert_eq!(source_side.len(), value);
    debug_assert_eq!(sink_side.len(), value);
    Some(MinVertexCut {
        value,
        source_side: VertexSet::new(source_side),
        sink_side: VertexSet::new(sink_side),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{complete_graph, cycle_graph, grid_graph, path_graph};

    fn mask(n: usize, vs: &[usize]) -> Vec<bool> {
        VertexSet::new(vs.to_vec()).mask(n)
    }

    #[test]
    fn demand_counts_split_pairs() {
        // K4 with one vertex removed: survivors 3 in pieces of at most 2
        assert_eq!(demand(4, 1, 6), 6.0 - 1.0);
        assert_eq!(demand(4, 4, 6), 6.0);
    }

    #[test]
    fn bounds_on_small_families() {
        let opts = LowerBoundOptions::default();
        assert_eq!(congestion_lower_bound(&complete_graph(8), &opts).bound, 4);
        assert_eq!(congestion_lower_bound(&path_graph(9), &opts).bound, 1);
        assert!(congestion_lower_bound(&cycle_graph(10), &opts).bound <= 2);
        assert_eq!(congestion_lower_bound(&Graph::empty(1), &opts).bound, 1);
        assert_eq!(congestion_lower_bound(&Graph::empty(4), &opts).bound, 0);
    }

    #[test]
    fn grid_vertex_cut() {
        // columns 0 and 4 of a 5x3 grid are separated by any full column
        let g = grid_graph(5, 3);
        let n = g.vertex_count();
        let left: Vec<usize> = (0..3).map(|y| y * 5).collect();
        let right: Vec<usize> = (0..3).map(|y| y * 5 + 4).collect();
        let cut = min_vertex_cut(&g, &mask(n, &left), &mask(n, &right), n).unwrap();
        assert_eq!(cut.value, 3);
        assert_eq!(cut.source_side.as_slice(), &[1, 6, 11]);
        assert_eq!(cut.sink_side.as_slice(), &[3, 8, 13]);
        assert!(min_vertex_cut(&g, &mask(n, &left), &mask(n, &right), 2).is_none());
    }

    #[test]
    fn touching_sets_have_no_cut() {
        let g = path_graph(3);
        assert!(min_vertex_cut(&g, &mask(3, &[0]), &mask(3, &[1]), 3).is_none());
        let cut = min_vertex_cut(&g, &mask(3, &[0]), &mask(3, &[2]), 3).unwrap();
        assert_eq!(cut.source_side.as_slice(), &[1]);
    }
}
