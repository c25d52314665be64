//! Anytime branch and bound for `cut(Γ)`.
//!
//! The root is bracketed by the heuristic separator and the congestion lower
//! bound. Each size `k` between them is then decided in turn ("is there a cut
//! set of size `k`?"), so every exhausted level raises the certified lower
//! bound by one. Inside a level, vertices are branched into the separator or
//! kept; a node dies when kept vertices alone span more than half the graph,
//! when the separator is full, or when the chosen vertices cannot carry the
//! flow that any size-`k` cut set must carry.

use std::time::Instant;

use super::flow::{congestion_lower_bound, demand, residual_prunes, LowerBoundOptions};
use super::heuristic::heuristic_with_layers;
use super::{half, BoundKind, CutCertificate, CutOutcome, SearchStats};
use crate::error::{Error, Result};
use crate::graphs::{component_labels, Graph, VertexId, VertexSet};

/// Work units (adjacency-list entries scanned) granted to the search per
/// millisecond of `budget_ms`. Budgets are counted in work rather than wall time so that a
/// run is reproducible on any machine and any number of workers.
pub const WORK_PER_MS: u64 = 150_000;

#[derive(Clone, Debug)]
pub struct ExactOptions<'a> {
    pub budget_ms: i64,
    pub seed: u64,
    /// Ball layers, tried as separators by the upper-bound heuristic.
    pub layers: Option<&'a [u32]>,
    pub lower: LowerBoundOptions,
    /// Routing rounds spent re-bounding each search node on the graph with
    /// its chosen separator vertices removed.
    pub node_rounds: usize,
}

impl ExactOptions<'_> {
    pub fn new(budget_ms: i64) -> Self {
        ExactOptions {
            budget_ms,
            seed: 0,
            layers: None,
            lower: LowerBoundOptions::default(),
            node_rounds: 12,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Open,
    Cut,
    Kept,
}

enum Level {
    Found(VertexSet),
    Infeasible,
    OutOfBudget,
}

struct Search<'g> {
    g: &'g Graph,
    k: usize,
    state: Vec<State>,
    cut_count: usize,
    cut_load: f64,
    load: &'g [f64],
    /// vertices by load, heaviest first (ties by id)
    by_load: &'g [VertexId],
    connected_pairs: u128,
    node_rounds: usize,
    eta: f64,
    nodes: u64,
    work: u64,
    allowance: u64,
}

impl Search<'_> {
    fn charge(&mut self) -> bool {
        self.work += (self.g.vertex_count() + 2 * self.g.edge_count()) as u64;
        self.work <= self.allowance
    }

    fn run(&mut self) -> Level {
        self.nodes += 1;
        if !self.charge() {
            return Level::OutOfBudget;
        }
        let g = self.g;
        let n = g.vertex_count();
        let m = half(n);

        let removed: Vec<bool> = self.state.iter().map(|&s| s == State::Cut).collect();
        let labels = component_labels(g, &removed);
        let (big, big_size) = labels
            .sizes
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(c, &s)| (c, s))
            .unwrap_or((0, 0));
        if big_size <= m {
            return Level::Found(VertexSet::from_mask(&removed));
        }
        if self.cut_count >= self.k {
            return Level::Infeasible;
        }

        let kept: Vec<bool> = self.state.iter().map(|&s| s != State::Kept).collect();
        if component_labels(g, &kept).largest() > m {
            return Level::Infeasible;
        }

        // flow bound: heaviest open vertices fill the remaining slots
        let slots = self.k - self.cut_count;
        let mut have = self.cut_load;
        let mut taken = 0;
        for &v in self.by_load {
            if taken == slots {
                break;
            }
            if self.state[v] == State::Open {
                have += self.load[v];
                taken += 1;
            }
        }
        let need = demand(n, self.cut_count + taken, self.connected_pairs);
        if have < need * (1.0 - 1e-9) - 1e-9 {
            return Level::Infeasible;
        }

        if self.node_rounds > 0 && self.cut_count > 0 {
            let open: Vec<bool> = self.state.iter().map(|&s| s == State::Open).collect();
            let (prune, work) =
                residual_prunes(g, &removed, &open, slots, self.node_rounds, self.eta);
            self.work += work;
            if prune {
                return Level::Infeasible;
            }
        }

        let Some(&v) = self
            .by_load
            .iter()
            .find(|&&v| self.state[v] == State::Open && labels.label[v] == big)
        else {
            // the oversized component is all kept; caught above, kept for safety
            return Level::Infeasible;
        };

        self.state[v] = State::Cut;
        self.cut_count += 1;
        self.cut_load += self.load[v];
        let first = self.run();
        self.cut_count -= 1;
        self.cut_load -= self.load[v];
        if !matches!(first, Level::Infeasible) {
            self.state[v] = State::Open;
            return first;
        }
        self.state[v] = State::Kept;
        let second = self.run();
        self.state[v] = State::Open;
        second
    }
}

/// Exact `cut(g)` within a work budget derived from `budget_ms`; on
/// exhaustion returns the certified bracket instead.
///
/// ```
/// use sepprofile::cuts::cut_exact;
/// use sepprofile::graphs::complete_graph;
///
/// let out = cut_exact(&complete_graph(9), 1_000).unwrap();
/// assert!(out.is_exact());
/// assert_eq!(out.upper_value(), 5);
/// ```
pub fn cut_exact(g: &Graph, budget_ms: i64) -> Result<CutOutcome> {
    cut_exact_with(g, &ExactOptions::new(budget_ms))
}

pub fn cut_exact_with(g: &Graph, opts: &ExactOptions<'_>) -> Result<CutOutcome> {
    if opts.budget_ms <= 0 {
        return Err(Error::Argument(format!(
            "budget_ms must be positive (got {})",
            opts.budget_ms
        )));
    }
    let start = Instant::now();
    let n = g.vertex_count();
    let finish = |mut cert: CutCertificate, nodes: u64, work: u64| {
        cert.stats = SearchStats {
            nodes,
            work,
            elapsed_ms: start.elapsed().as_millis() as u64,
        };
        cert
    };
    if n <= 1 {
        let s = VertexSet::new((0..n).collect());
        let cert = CutCertificate::with_separator(g, s, BoundKind::Exact);
        return Ok(CutOutcome::Exact(finish(cert, 1, 0)));
    }

    let mut upper = heuristic_with_layers(g, opts.layers, opts.seed);
    let lower_opts = LowerBoundOptions {
        target: Some(upper.value),
        ..opts.lower.clone()
    };
    let congestion = congestion_lower_bound(g, &lower_opts);
    let mut lower = congestion.bound;
    let mut search_work = 0;
    let mut nodes = 0;
    let allowance = (opts.budget_ms as u64).saturating_mul(WORK_PER_MS);

    let mut by_load: Vec<VertexId> = (0..n).collect();
    by_load.sort_by(|&a, &b| congestion.load[b].total_cmp(&congestion.load[a]).then(a.cmp(&b)));

    while lower < upper.value {
        if congestion.rounds == 0 {
            // no usable loads: the flow prune would be vacuous, so do not search
            break;
        }
        let mut search = Search {
            g,
            k: lower,
            state: vec![State::Open; n],
            cut_count: 0,
            cut_load: 0.0,
            load: &congestion.load,
            by_load: &by_load,
            connected_pairs: congestion.connected_pairs,
            node_rounds: opts.node_rounds,
            eta: opts.lower.eta,
            nodes: 0,
            work: search_work,
            allowance,
        };
        let outcome = search.run();
        nodes += search.nodes;
        search_work = search.work;
        match outcome {
            Level::Found(s) => {
                upper = CutCertificate::with_separator(g, s, BoundKind::Exact);
                break;
            }
            Level::Infeasible => lower += 1,
            Level::OutOfBudget => break,
        }
    }

    let work = congestion.work + search_work;
    if lower >= upper.value {
        upper.bound_kind = BoundKind::Exact;
        return Ok(CutOutcome::Exact(finish(upper, nodes, work)));
    }
    upper.bound_kind = BoundKind::Upper;
    Ok(CutOutcome::Bracketed {
        lower: finish(CutCertificate::lower(lower), nodes, work),
        upper: finish(upper, nodes, work),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuts::cut_brute;
    use crate::graphs::{complete_graph, cycle_graph, grid_graph, path_graph};

    #[test]
    fn matches_brute_on_families() {
        for n in 1..=12 {
            for g in [path_graph(n), complete_graph(n)] {
                let exact = cut_exact(&g, 1_000).unwrap();
                assert!(exact.is_exact());
                assert_eq!(exact.upper_value(), cut_brute(&g).unwrap().value);
            }
        }
        let exact = cut_exact(&cycle_graph(9), 1_000).unwrap();
        assert_eq!(exact.upper_value(), 2);
    }

    #[test]
    fn grid_4x4() {
        let g = grid_graph(4, 4);
        let exact = cut_exact(&g, 1_000).unwrap();
        assert!(exact.is_exact());
        assert_eq!(exact.upper_value(), cut_brute(&g).unwrap().value);
    }

    #[test]
    fn rejects_non_positive_budget() {
        assert!(matches!(
            cut_exact(&path_graph(3), 0),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn tiny_budget_brackets() {
        let g = grid_graph(8, 8);
        let out = cut_exact_with(
            &g,
            &ExactOptions {
                lower: LowerBoundOptions {
                    iterations: 1,
                    ..LowerBoundOptions::default()
                },
                ..ExactOptions::new(1)
            },
        )
        .unwrap();
        assert!(out.lower_value() <= out.upper_value());
        assert!(out.upper().verify(&g));
    }
}
