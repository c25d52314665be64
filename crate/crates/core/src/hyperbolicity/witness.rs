use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::bigons::{scan_ball, BigonReport};
use super::{cycle_distortion, required_radius, Ambient, CycleWitness, DEFAULT_K};
use crate::error::{Error, Result};
use crate::graphs::{bfs_from, Graph, VertexId};
use crate::groups::{cayley_ball, Ball, BallBuilder, GroupModel, Symbol};

#[derive(Clone, Debug)]
pub struct WitnessOptions {
    /// largest accepted distortion
    pub k: Ratio<u64>,
    pub vertex_budget: usize,
    /// fattest bigons turned into quadrilaterals
    pub bigon_candidates: usize,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions {
            k: Ratio::from_integer(DEFAULT_K),
            vertex_budget: 200_000,
            bigon_candidates: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum WitnessSearch {
    Found(CycleWitness),
    /// Both phases ran to completion in a ball of the needed radius, or the
    /// Cayley graph is a tree (`searched_radius` 0).
    Exhausted { searched_radius: u32, candidates_tried: usize },
    /// The ball could not be grown far enough, or some candidate needed
    /// more room than the ball had.
    BudgetLimited {
        searched_radius: u32,
        max_length_searchable: usize,
        message: String,
    },
}

impl WitnessSearch {
    pub fn witness(&self) -> Option<&CycleWitness> {
        match self {
            WitnessSearch::Found(w) => Some(w),
            _ => None,
        }
    }

    pub fn summary(&self) -> String {
        match self {
            WitnessSearch::Found(w) => format!("found length={} distortion={}", w.length, w.distortion),
            WitnessSearch::Exhausted { .. } => "none (exhausted)".into(),
            WitnessSearch::BudgetLimited { .. } => "none (budget-limited)".into(),
        }
    }
}

/// Walks `word` from `start`, returning the visited vertices when the walk
/// closes up into an embedded cycle.
fn closed_walk(ball: &Ball, start: VertexId, word: &[Symbol]) -> Option<Vec<VertexId>> {
    let mut cycle = vec![start];
    let mut v = start;
    for &s in word {
        v = ball.successor(v, s)?;
        cycle.push(v);
    }
    if cycle.pop() != Some(start) {
        return None;
    }
    let mut sorted = cycle.clone();
    sorted.sort_unstable();
    sorted.dedup();
    (sorted.len() == cycle.len() && cycle.len() >= 3).then_some(cycle)
}

/// Commutator squares `g^s h^s g^-s h^-s`, started at `g^-⌊s/2⌋ h^-⌊s/2⌋` so
/// that they sit around the centre.
fn pattern_cycles(m: &dyn GroupModel, ball: &Ball, s: usize) -> Vec<Vec<VertexId>> {
    let alphabet = m.alphabet();
    let mut out = Vec::new();
    for g in 0..alphabet.len() {
        for h in g + 1..alphabet.len() {
            let (gi, hi) = (alphabet.inverse(g), alphabet.inverse(h));
            if h == gi {
                continue;
            }
            let lead: Vec<Symbol> = [gi].repeat(s / 2).into_iter().chain([hi].repeat(s / 2)).collect();
            let Some(start) = ball.walk(ball.center, &lead) else {
                continue;
            };
            let word: Vec<Symbol> = [[g].repeat(s), [h].repeat(s), [gi].repeat(s), [hi].repeat(s)].concat();
            if let Some(c) = closed_walk(ball, start, &word) {
                out.push(c);
            }
        }
    }
    out
}

/// Smallest-id descent from `x` along `dist` to a vertex at distance 0.
fn descend(g: &Graph, dist: &[u32], mut x: VertexId) -> Vec<VertexId> {
    let mut path = vec![x];
    while dist[x] > 0 {
        x = *g
            .neighbors(x)
            .iter()
            .find(|&&w| dist[w] + 1 == dist[x])
            .expect("BFS distances descend");
        path.push(x);
    }
    path
}

/// Geodesic `u -> p -> v` through `p`.
fn geodesic_through(g: &Graph, du: &[u32], dv: &[u32], p: VertexId) -> Vec<VertexId> {
    let mut path = descend(g, du, p);
    path.reverse();
    path.extend(descend(g, dv, p).into_iter().skip(1));
    path
}

/// The quadrilateral `γ₁ β₂ γ₂ β₁` built from two geodesics with common ends:
/// `γ(k)` is the point of `γ` furthest from `γ'`, the subarc `γ₁` extends
/// from it until the distance to `γ'` drops to half the arc length, the
/// `β`s are shortest paths back to `γ'`, and `γ₂` is the part of `γ'`
/// between their feet.
pub(crate) fn quadrilateral(g: &Graph, first: &[VertexId], second: &[VertexId]) -> Option<Vec<VertexId>> {
    let to_second = bfs_from(g, second, u32::MAX);
    let to_first = bfs_from(g, first, u32::MAX);
    let h1: Vec<u32> = first.iter().map(|&x| to_second[x]).collect();
    let h2: Vec<u32> = second.iter().map(|&x| to_first[x]).collect();
    let (gamma, other, h, to_other) = if h1.iter().max() >= h2.iter().max() {
        (first, second, h1, to_second)
    } else {
        (second, first, h2, to_first)
    };
    let n = *h.iter().max()?;
    if n == 0 {
        return None;
    }
    let k = h.iter().position(|&x| x == n)?;
    let l = (1..=k).find(|&l| l as u32 >= 2 * h[k - l])?;
    let l2 = (1..gamma.len() - k).find(|&l| l as u32 >= 2 * h[k + l])?;
    let (a, b) = (k - l, k + l2);
    let beta1 = descend(g, &to_other, gamma[a]);
    let beta2 = descend(g, &to_other, gamma[b]);
    let pos = |v: VertexId| other.iter().position(|&x| x == v);
    let (i1, i2) = (pos(*beta1.last()?)?, pos(*beta2.last()?)?);

    let mut walk: Vec<VertexId> = gamma[a..=b].to_vec();
    walk.extend(&beta2[1..]);
    if i2 >= i1 {
        walk.extend(other[i1..i2].iter().rev());
    } else {
        walk.extend(&other[i2 + 1..=i1]);
    }
    walk.extend(beta1.iter().rev().skip(1));
    walk.dedup();
    while walk.len() > 1 && walk.last() == walk.first() {
        walk.pop();
    }
    let mut sorted = walk.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let embedded = sorted.len() == walk.len()
        && walk.len() >= 3
        && (0..walk.len()).all(|i| g.has_edge(walk[i], walk[(i + 1) % walk.len()]));
    embedded.then_some(walk)
}

fn bigon_cycle(ball: &Ball, report: &BigonReport) -> Option<Vec<VertexId>> {
    let g = &ball.graph;
    let du = bfs_from(g, &[report.u], u32::MAX);
    let dv = bfs_from(g, &[report.v], u32::MAX);
    let (p, q) = report.far_pair;
    let first = geodesic_through(g, &du, &dv, p);
    let second = geodesic_through(g, &du, &dv, q);
    quadrilateral(g, &first, &second)
}

fn make_witness(m: &dyn GroupModel, ball: &Ball, cycle: Vec<VertexId>, distortion: Ratio<u64>, phase: &str) -> CycleWitness {
    CycleWitness {
        group: m.name().to_string(),
        keys: cycle
            .iter()
            .map(|&v| ball.graph.label(v).unwrap_or_default().to_string())
            .collect(),
        length: cycle.len(),
        cycle,
        distortion,
        ambient_radius_used: ball.radius,
        phase: phase.to_string(),
    }
}

/// Searches for an embedded cycle of length at least `target_length` whose
/// distortion is at most `opts.k`. Commutator squares are tried first; then
/// the fattest bigons of an inner ball are turned into quadrilaterals.
///
/// ```
/// use sepprofile::groups::catalog_group;
/// use sepprofile::hyperbolicity::{find_distorted_cycle, WitnessOptions};
///
/// let z2 = catalog_group("zd:2").unwrap();
/// let found = find_distorted_cycle(z2.as_ref(), 16, &WitnessOptions::default()).unwrap();
/// assert_eq!(found.witness().unwrap().length, 16);
/// ```
pub fn find_distorted_cycle(m: &dyn GroupModel, target_length: usize, opts: &WitnessOptions) -> Result<WitnessSearch> {
    if target_length < 3 {
        return Err(Error::Argument(format!(
            "target length must be at least 3 (got {target_length})"
        )));
    }
    if m.cayley_graph_is_tree() {
        // no cycles anywhere
        return Ok(WitnessSearch::Exhausted {
            searched_radius: 0,
            candidates_tried: 0,
        });
    }
    // squares of side s need radius 3s; a bigon between points of B_ρ at
    // distance D gives cycles of length at most 2D within B_{2ρ}, so lengths
    // up to the target need ρ = target/4 and radius 4ρ
    let side = target_length.div_ceil(4);
    let inner = side as u32;
    let goal = 4 * inner;

    let mut builder = BallBuilder::new(m).with_budget(opts.vertex_budget);
    let mut limited = None;
    while builder.radius() < goal {
        let before = builder.vertex_count();
        match builder.extend() {
            Ok(()) if builder.vertex_count() == before => break,
            Ok(()) => {}
            Err(Error::Resource { message }) => {
                limited = Some(message);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let ball = builder.ball()?;
    let radius = ball.radius;
    let ambient = Ambient {
        dist: &ball.dist,
        radius,
    };
    let accept = |cycle: &[VertexId]| -> Result<Option<Ratio<u64>>> {
        if cycle.len() < target_length || required_radius(&ball.dist, cycle) > radius {
            return Ok(None);
        }
        let d = cycle_distortion(&ball.graph, cycle, Some(ambient))?;
        Ok((d <= opts.k).then_some(d))
    };

    for cycle in pattern_cycles(m, &ball, side) {
        if let Some(d) = accept(&cycle)? {
            return Ok(WitnessSearch::Found(make_witness(m, &ball, cycle, d, "pattern")));
        }
    }

    let scan_radius = inner.min(radius / 4);
    let reports = scan_ball(&ball, scan_radius, opts.bigon_candidates)?;
    let mut tried = 0;
    let mut cramped = false;
    for report in reports.iter().filter(|r| r.max_layer_diameter >= 2) {
        tried += 1;
        let Some(cycle) = bigon_cycle(&ball, report) else {
            continue;
        };
        if cycle.len() >= target_length && required_radius(&ball.dist, &cycle) > radius {
            cramped = true;
            continue;
        }
        if let Some(d) = accept(&cycle)? {
            return Ok(WitnessSearch::Found(make_witness(m, &ball, cycle, d, "bigon")));
        }
    }

    let message = match (limited, cramped) {
        (Some(msg), _) => Some(format!("ball stopped at radius {radius} of {goal}: {msg}")),
        (None, true) => Some("candidate cycles reach past the padded ball".to_string()),
        (None, false) => None,
    };
    Ok(match message {
        Some(message) => WitnessSearch::BudgetLimited {
            searched_radius: radius,
            max_length_searchable: 4 * (radius as usize / 4),
            message,
        },
        None => WitnessSearch::Exhausted {
            searched_radius: radius,
            candidates_tried: tried,
        },
    })
}

/// Rebuilds the witness's ball from scratch, maps its keys back to vertices
/// and recomputes the distortion.
pub fn verify_witness(m: &dyn GroupModel, w: &CycleWitness) -> Result<Ratio<u64>> {
    if m.name() != w.group {
        return Err(Error::Argument(format!(
            "witness is for {}, not {}",
            w.group,
            m.name()
        )));
    }
    let ball = cayley_ball(m, w.ambient_radius_used)?;
    let cycle = w
        .keys
        .iter()
        .map(|k| {
            ball.vertex_of_label(k)
                .ok_or_else(|| Error::Argument(format!("key {k} is not in the ball")))
        })
        .collect::<Result<Vec<_>>>()?;
    cycle_distortion(
        &ball.graph,
        &cycle,
        Some(Ambient {
            dist: &ball.dist,
            radius: ball.radius,
        }),
    )
}
