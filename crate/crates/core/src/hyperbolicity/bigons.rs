use std::cmp::Reverse;
use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{bfs_from, Graph, VertexId, UNREACHABLE};
use crate::groups::{cayley_ball_with_budget, Ball, GroupModel, DEFAULT_VERTEX_BUDGET};

/// Reports kept by [`bigon_fatness_scan`].
pub const TOP_BIGONS: usize = 100;

/// All-pairs distances are tabulated up to this many vertices; larger graphs
/// fall back to truncated searches.
const MATRIX_LIMIT: usize = 4096;

/// Geodesic interval between `u` and `v`, with the diameter of its layers
/// `L_i = {x : d(u, x) = i, d(x, v) = d(u, v) - i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigonReport {
    pub u: VertexId,
    pub v: VertexId,
    pub u_key: String,
    pub v_key: String,
    pub geodesic_length: u32,
    pub max_layer_diameter: u32,
    /// first layer reaching the maximum
    pub layer_index: u32,
    /// two vertices of that layer at maximal distance
    pub far_pair: (VertexId, VertexId),
}

pub(crate) struct Metric<'g> {
    g: &'g Graph,
    matrix: Option<Vec<u16>>,
}

impl<'g> Metric<'g> {
    pub(crate) fn new(g: &'g Graph) -> Self {
        let n = g.vertex_count();
        let matrix = (n <= MATRIX_LIMIT).then(|| {
            (0..n)
                .into_par_iter()
                .flat_map_iter(|v| {
                    bfs_from(g, &[v], u32::MAX)
                        .into_iter()
                        .map(|d| d.min(u32::from(u16::MAX)) as u16)
                })
                .collect()
        });
        Metric { g, matrix }
    }

    /// Largest distance within `layer` and the first pair attaining it.
    /// Distances above `limit` are never needed since the layer lies on
    /// geodesics through a common point at distance `limit / 2`.
    fn diameter(&self, layer: &[VertexId], limit: u32) -> (u32, (VertexId, VertexId)) {
        let n = self.g.vertex_count();
        let mut best = (0, (layer[0], layer[0]));
        for (i, &x) in layer.iter().enumerate() {
            if i + 1 == layer.len() {
                break;
            }
            let row: Option<Vec<u32>> = match &self.matrix {
                Some(_) => None,
                None => Some(bfs_from(self.g, &[x], limit)),
            };
            for &y in &layer[i + 1..] {
                let d = match (&self.matrix, &row) {
                    (Some(m), _) => u32::from(m[x * n + y]),
                    (None, Some(r)) => r[y],
                    _ => unreachable!(),
                };
                if d != UNREACHABLE && d > best.0 {
                    best = (d, (x, y));
                }
            }
        }
        best
    }
}

/// Interval layers `L_0..=L_D` between `u` and `v`, found by walking back
/// from `v` along `du` (distances from `u`). Layers are sorted.
pub(crate) fn interval_layers(g: &Graph, du: &[u32], v: VertexId, mark: &mut [u32], stamp: u32) -> Vec<Vec<VertexId>> {
    let d = du[v] as usize;
    let mut layers = vec![Vec::new(); d + 1];
    layers[d].push(v);
    mark[v] = stamp;
    for i in (1..=d).rev() {
        let (lower, upper) = layers.split_at_mut(i);
        for &x in &upper[0] {
            for &w in g.neighbors(x) {
                if du[w] as usize == i - 1 && mark[w] != stamp {
                    mark[w] = stamp;
                    lower[i - 1].push(w);
                }
            }
        }
        lower[i - 1].sort_unstable();
    }
    layers
}

fn label(ball: &Ball, v: VertexId) -> String {
    ball.graph.label(v).unwrap_or_default().to_string()
}

fn sort_reports(reports: &mut Vec<BigonReport>, keep: usize) {
    reports.sort_by_key(|r| (Reverse(r.max_layer_diameter), r.u, r.v));
    reports.truncate(keep);
}

/// Fatness of every bigon between vertices of `B_radius` (pairs at distance
/// at least 4), measured in `ball`, which must have at least twice that
/// radius. Returns the `keep` fattest, fattest first, ties by pair ids.
pub fn scan_ball(ball: &Ball, radius: u32, keep: usize) -> Result<Vec<BigonReport>> {
    if ball.radius < 2 * radius {
        return Err(Error::Argument(format!(
            "bigon scan of radius {radius} needs a ball of radius {}, got {}",
            2 * radius,
            ball.radius
        )));
    }
    let g = &ball.graph;
    let n = g.vertex_count();
    let inner = ball.dist.iter().filter(|&&d| d <= radius).count();
    let metric = Metric::new(g);
    let mut reports: Vec<BigonReport> = (0..inner)
        .into_par_iter()
        .map(|u| {
            let du = bfs_from(g, &[u], 2 * radius);
            let mut mark = vec![0u32; n];
            let mut local = Vec::new();
            for v in u + 1..inner {
                let d = du[v];
                if d < 4 {
                    continue;
                }
                let layers = interval_layers(g, &du, v, &mut mark, v as u32 + 1);
                let mut best = (0, 0, (u, u));
                for (i, layer) in layers.iter().enumerate().take(d as usize).skip(1) {
                    if layer.len() < 2 {
                        continue;
                    }
                    let limit = 2 * (i as u32).min(d - i as u32);
                    let (diam, pair) = metric.diameter(layer, limit);
                    if diam > best.0 {
                        best = (diam, i as u32, pair);
                    }
                }
                local.push(BigonReport {
                    u,
                    v,
                    u_key: label(ball, u),
                    v_key: label(ball, v),
                    geodesic_length: d,
                    max_layer_diameter: best.0,
                    layer_index: best.1,
                    far_pair: best.2,
                });
            }
            sort_reports(&mut local, keep);
            local
        })
        .flatten()
        .collect();
    sort_reports(&mut reports, keep);
    Ok(reports)
}

/// The [`TOP_BIGONS`] fattest bigons between vertices of `B_radius`, with
/// distances taken in `B_{2 radius}`.
///
/// ```
/// use sepprofile::groups::catalog_group;
/// use sepprofile::hyperbolicity::bigon_fatness_scan;
///
/// let f2 = catalog_group("free:2").unwrap();
/// let reports = bigon_fatness_scan(f2.as_ref(), 3, None).unwrap();
/// assert!(reports.iter().all(|r| r.max_layer_diameter == 0));
/// ```
pub fn bigon_fatness_scan(m: &dyn GroupModel, radius: u32, vertex_budget: Option<usize>) -> Result<Vec<BigonReport>> {
    let ball = cayley_ball_with_budget(m, 2 * radius, vertex_budget.unwrap_or(DEFAULT_VERTEX_BUDGET))?;
    scan_ball(&ball, radius, TOP_BIGONS)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub x: VertexId,
    pub y: VertexId,
    pub midpoint: VertexId,
    pub x_key: String,
    pub y_key: String,
    pub midpoint_key: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BottleneckReport {
    pub group: String,
    pub radius: u32,
    pub delta: u32,
    pub pairs_checked: usize,
    pub violations: Vec<Violation>,
}

impl BottleneckReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

fn connected_avoiding(g: &Graph, x: VertexId, y: VertexId, blocked: &[bool]) -> bool {
    if blocked[x] || blocked[y] {
        return false;
    }
    let mut seen = blocked.to_vec();
    seen[x] = true;
    let mut queue = VecDeque::from([x]);
    while let Some(u) = queue.pop_front() {
        if u == y {
            return true;
        }
        for &w in g.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

/// Finite-scale bottleneck test. For each pair `x, y` of `B_radius`, take the
/// first (by id) vertex `w` on a geodesic with `|d(x, w) - d(x, y)/2| <= 1/2`;
/// the pair violates the property when `x` and `y` stay connected in
/// `B_{2 radius}` after deleting the closed `delta`-ball around `w`.
///
/// ```
/// use sepprofile::groups::catalog_group;
/// use sepprofile::hyperbolicity::bottleneck_check;
///
/// let f2 = catalog_group("free:2").unwrap();
/// assert!(bottleneck_check(f2.as_ref(), 2, 0, None).unwrap().holds());
/// ```
pub fn bottleneck_check(
    m: &dyn GroupModel,
    radius: u32,
    delta: u32,
    vertex_budget: Option<usize>,
) -> Result<BottleneckReport> {
    let ball = cayley_ball_with_budget(m, 2 * radius, vertex_budget.unwrap_or(DEFAULT_VERTEX_BUDGET))?;
    let g = &ball.graph;
    let n = g.vertex_count();
    let inner = ball.dist.iter().filter(|&&d| d <= radius).count();
    let per_x: Vec<(usize, Vec<Violation>)> = (0..inner)
        .into_par_iter()
        .map(|x| {
            let dx = bfs_from(g, &[x], u32::MAX);
            let mut mark = vec![0u32; n];
            let mut found = Vec::new();
            let mut checked = 0;
            for y in x + 1..inner {
                checked += 1;
                let d = dx[y] as usize;
                let layers = interval_layers(g, &dx, y, &mut mark, y as u32 + 1);
                let w = layers[d / 2]
                    .iter()
                    .chain(&layers[d.div_ceil(2)])
                    .copied()
                    .min()
                    .expect("interval layers are non-empty");
                let blocked: Vec<bool> = bfs_from(g, &[w], delta)
                    .into_iter()
                    .map(|t| t != UNREACHABLE)
                    .collect();
                if connected_avoiding(g, x, y, &blocked) {
                    found.push(Violation {
                        x,
                        y,
                        midpoint: w,
                        x_key: label(&ball, x),
                        y_key: label(&ball, y),
                        midpoint_key: label(&ball, w),
                    });
                }
            }
            (checked, found)
        })
        .collect();
    Ok(BottleneckReport {
        group: m.name().to_string(),
        radius,
        delta,
        pairs_checked: per_x.iter().map(|p| p.0).sum(),
        violations: per_x.into_iter().flat_map(|p| p.1).collect(),
    })
}
