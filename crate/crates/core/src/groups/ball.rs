//! Layered breadth-first enumeration of Cayley balls.
//!
//! Vertex ids are assigned layer by layer; inside a layer, new elements are
//! sorted shortlex by their representative key before numbering, so the
//! numbering does not depend on how the frontier was split across workers.

use std::cmp::Ordering;
use std::collections::HashMap;

use rayon::prelude::*;

use super::{ElementKey, GroupModel, Symbol};
use crate::error::{Error, Result};
use crate::graphs::{Graph, VertexId, VertexSet};

pub const DEFAULT_VERTEX_BUDGET: usize = 500_000;

const NONE: u32 = u32::MAX;

fn shortlex(a: &ElementKey, b: &ElementKey) -> Ordering {
    a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0))
}

/// The ball `B_r(e)` of a Cayley graph with its BFS data.
#[derive(Clone, Debug)]
pub struct Ball {
    pub graph: Graph,
    pub center: VertexId,
    pub radius: u32,
    pub dist: Vec<u32>,
    pub keys: Vec<ElementKey>,
    symbols: usize,
    succ: Vec<u32>,
    index: HashMap<ElementKey, VertexId>,
}

impl Ball {
    pub fn vertex_count(&self) -> usize {
        self.keys.len()
    }

    /// The vertex `v * g`, if it lies in the ball.
    pub fn successor(&self, v: VertexId, g: Symbol) -> Option<VertexId> {
        match self.succ[v * self.symbols + g] {
            NONE => None,
            id => Some(id as VertexId),
        }
    }

    /// Follows `word` from `start`; `None` once the path leaves the ball.
    pub fn walk(&self, start: VertexId, word: &[Symbol]) -> Option<VertexId> {
        word.iter()
            .try_fold(start, |v, &g| self.successor(v, g))
    }

    /// Vertex carrying `key` (or a representative recorded as an alias of it).
    pub fn vertex_of(&self, key: &ElementKey) -> Option<VertexId> {
        self.index.get(key).copied()
    }

    pub fn vertex_of_label(&self, label: &str) -> Option<VertexId> {
        self.graph
            .labels()
            .and_then(|ls| ls.iter().position(|l| l == label))
    }

    /// Vertices at distance exactly `t` from the center.
    pub fn sphere(&self, t: u32) -> VertexSet {
        VertexSet::new(
            self.dist
                .iter()
                .enumerate()
                .filter(|&(_, &d)| d == t)
                .map(|(v, _)| v)
                .collect(),
        )
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.radius as usize + 1];
        for &d in &self.dist {
            sizes[d as usize] += 1;
        }
        sizes
    }
}

enum Resolved {
    Found(VertexId, Option<ElementKey>),
    New(ElementKey),
}

/// Incremental ball construction: `extend` grows the radius by one.
pub struct BallBuilder<'a> {
    model: &'a dyn GroupModel,
    budget: usize,
    radius: u32,
    keys: Vec<ElementKey>,
    layer_start: Vec<usize>,
    /// successors of every vertex below the current radius
    succ: Vec<u32>,
    index: HashMap<ElementKey, VertexId>,
    buckets: HashMap<ElementKey, Vec<VertexId>>,
}

impl<'a> BallBuilder<'a> {
    pub fn new(model: &'a dyn GroupModel) -> Self {
        let identity = model.identity();
        let mut index = HashMap::new();
        index.insert(identity.clone(), 0);
        let mut buckets = HashMap::new();
        if !model.keys_are_canonical() {
            buckets.insert(model.invariant(&identity), vec![0]);
        }
        BallBuilder {
            model,
            budget: DEFAULT_VERTEX_BUDGET,
            radius: 0,
            keys: vec![identity],
            layer_start: vec![0],
            succ: Vec::new(),
            index,
            buckets,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn vertex_count(&self) -> usize {
        self.keys.len()
    }

    fn lookup(&self, key: &ElementKey) -> Option<(VertexId, bool)> {
        if let Some(&id) = self.index.get(key) {
            return Some((id, false));
        }
        if self.model.keys_are_canonical() {
            return None;
        }
        let bucket = self.buckets.get(&self.model.invariant(key))?;
        bucket
            .iter()
            .find(|&&id| self.model.same_element(&self.keys[id], key))
            .map(|&id| (id, true))
    }

    fn products(&self, range: std::ops::Range<VertexId>) -> Vec<Vec<Resolved>> {
        let symbols = self.model.alphabet().len();
        range
            .into_par_iter()
            .map(|v| {
                (0..symbols)
                    .map(|g| {
                        let p = self.model.multiply(&self.keys[v], g);
                        match self.lookup(&p) {
                            Some((id, false)) => Resolved::Found(id, None),
                            Some((id, true)) => Resolved::Found(id, Some(p)),
                            None => Resolved::New(p),
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Groups new keys into elements: `(representative, other keys)`.
    fn cluster(&self, mut fresh: Vec<ElementKey>) -> Vec<(ElementKey, Vec<ElementKey>)> {
        fresh.sort_by(shortlex);
        fresh.dedup();
        if self.model.keys_are_canonical() {
            return fresh.into_iter().map(|k| (k, Vec::new())).collect();
        }
        let mut by_invariant: HashMap<ElementKey, Vec<ElementKey>> = HashMap::new();
        for k in fresh {
            by_invariant
                .entry(self.model.invariant(&k))
                .or_default()
                .push(k);
        }
        let mut groups: Vec<Vec<ElementKey>> = by_invariant.into_values().collect();
        groups.sort_by(|a, b| shortlex(&a[0], &b[0]));
        let mut clusters: Vec<(ElementKey, Vec<ElementKey>)> = groups
            .into_par_iter()
            .flat_map_iter(|members| {
                // members arrive shortlex-sorted, so the first of each class is its minimum
                let mut classes: Vec<(ElementKey, Vec<ElementKey>)> = Vec::new();
                for k in members {
                    match classes
                        .iter_mut()
                        .find(|(rep, _)| self.model.same_element(rep, &k))
                    {
                        Some((_, others)) => others.push(k),
                        None => classes.push((k, Vec::new())),
                    }
                }
                classes
            })
            .collect();
        clusters.sort_by(|a, b| shortlex(&a.0, &b.0));
        clusters
    }

    /// Grows the ball by one layer.
    pub fn extend(&mut self) -> Result<()> {
        let r = self.radius as usize;
        let frontier = self.layer_start[r]..self.keys.len();
        let symbols = self.model.alphabet().len();
        let resolved = self.products(frontier.clone());

        let mut fresh = Vec::new();
        let mut aliases = Vec::new();
        for row in &resolved {
            for item in row {
                match item {
                    Resolved::New(p) => fresh.push(p.clone()),
                    Resolved::Found(id, Some(p)) => aliases.push((p.clone(), *id)),
                    Resolved::Found(_, None) => {}
                }
            }
        }
        let clusters = self.cluster(fresh);
        if self.keys.len() + clusters.len() > self.budget {
            return Err(Error::resource(format!(
                "ball of {} exceeds the vertex budget of {} at radius {}; completed radius {}",
                self.model.name(),
                self.budget,
                r + 1,
                r
            )));
        }
        for (p, id) in aliases {
            self.index.insert(p, id);
        }
        self.layer_start.push(self.keys.len());
        for (rep, others) in clusters {
            let id = self.keys.len();
            if !self.model.keys_are_canonical() {
                self.buckets
                    .entry(self.model.invariant(&rep))
                    .or_default()
                    .push(id);
            }
            for k in others {
                self.index.insert(k, id);
            }
            self.index.insert(rep.clone(), id);
            self.keys.push(rep);
        }
        for row in resolved {
            for item in row {
                let id = match item {
                    Resolved::Found(id, _) => id,
                    Resolved::New(p) => self.index[&p],
                };
                self.succ.push(id as u32);
            }
        }
        debug_assert_eq!(self.succ.len(), frontier.end * symbols);
        self.radius += 1;
        Ok(())
    }

    /// Materializes the current ball, adding the edges inside the outer sphere.
    pub fn ball(&self) -> Result<Ball> {
        let r = self.radius as usize;
        let symbols = self.model.alphabet().len();
        let mut succ = self.succ.clone();
        for row in self.products(self.layer_start[r]..self.keys.len()) {
            for item in row {
                succ.push(match item {
                    Resolved::Found(id, _) => id as u32,
                    Resolved::New(_) => NONE,
                });
            }
        }
        let mut dist = vec![0u32; self.keys.len()];
        for (t, w) in self.layer_start.windows(2).enumerate() {
            dist[w[0]..w[1]].fill(t as u32);
        }
        dist[self.layer_start[r]..].fill(r as u32);
        let n = self.keys.len();
        let edges = (0..n).flat_map(|v| {
            let succ = &succ;
            (0..symbols).filter_map(move |g| match succ[v * symbols + g] {
                NONE => None,
                w => Some((v, w as VertexId)),
            })
        });
        let labels = self.keys.iter().map(|k| self.model.format_key(k)).collect();
        let graph = Graph::from_edges(n, edges)?.with_labels(labels)?;
        Ok(Ball {
            graph,
            center: 0,
            radius: self.radius,
            dist,
            keys: self.keys.clone(),
            symbols,
            succ,
            index: self.index.clone(),
        })
    }
}

/// Ball of radius `r` about the identity, within the default vertex budget.
pub fn cayley_ball(model: &dyn GroupModel, r: u32) -> Result<Ball> {
    cayley_ball_with_budget(model, r, DEFAULT_VERTEX_BUDGET)
}

pub fn cayley_ball_with_budget(model: &dyn GroupModel, r: u32, budget: usize) -> Result<Ball> {
    let mut builder = BallBuilder::new(model).with_budget(budget);
    while builder.radius() < r {
        builder.extend()?;
    }
    builder.ball()
}

/// `|B_0|, ..., |B_{r_max}|`.
pub fn growth_table(model: &dyn GroupModel, r_max: u32) -> Result<Vec<usize>> {
    let mut builder = BallBuilder::new(model);
    let mut table = vec![1];
    while builder.radius() < r_max {
        builder.extend()?;
        table.push(builder.vertex_count());
    }
    Ok(table)
}

/// Inverse growth function: the largest `r` with `|B_r| <= n`.
pub fn kappa(model: &dyn GroupModel, n: usize) -> Result<u32> {
    if n == 0 {
        return Err(Error::Argument("kappa needs n >= 1".into()));
    }
    let mut builder = BallBuilder::new(model);
    loop {
        let before = builder.vertex_count();
        builder.extend()?;
        if builder.vertex_count() > n {
            return Ok(builder.radius() - 1);
        }
        if builder.vertex_count() == before {
            return Err(Error::Argument(format!(
                "{} is finite with {} elements; kappa is unbounded",
                model.name(),
                before
            )));
        }
    }
}
