use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ProfileOptions;
use crate::error::{Error, Result};
use crate::graphs::{induced_subgraph, Graph, VertexId, VertexSet, UNREACHABLE};
use crate::groups::{BallBuilder, Source};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Balls,
    SpheresThickened,
    RandomConnected,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [
        Strategy::Balls,
        Strategy::SpheresThickened,
        Strategy::RandomConnected,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Balls => "balls",
            Strategy::SpheresThickened => "spheres-thickened",
            Strategy::RandomConnected => "random-connected",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                Error::Argument(format!(
                    "unknown candidate strategy `{s}` (expected balls, spheres-thickened or random-connected)"
                ))
            })
    }
}

/// A candidate subgraph, identified well enough to rebuild it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub strategy: Strategy,
    /// outer radius for balls and shells
    pub radius: Option<u32>,
    /// number of spheres in a shell
    pub thickness: Option<u32>,
    /// index of a random sample
    pub sample: Option<usize>,
    pub vertices: usize,
}

impl Candidate {
    pub fn descriptor(&self) -> String {
        match self.strategy {
            Strategy::Balls => format!("ball r={}", self.radius.unwrap_or(0)),
            Strategy::SpheresThickened => format!(
                "shell r={} w={}",
                self.radius.unwrap_or(0),
                self.thickness.unwrap_or(0)
            ),
            Strategy::RandomConnected => {
                format!("random #{} n={}", self.sample.unwrap_or(0), self.vertices)
            }
        }
    }
}

/// A candidate with its graph and, for balls and shells, distances from the
/// centre.
pub type BuiltCandidate = (Candidate, Graph, Option<Vec<u32>>);

/// Concentric host data: ball graphs of increasing radius, plus a larger
/// host to draw random subgraphs from.
struct Hosts {
    /// (radius, graph, distances) for every ball with at most `n_max` vertices
    balls: Vec<(u32, Graph, Vec<u32>)>,
    host: Option<(Graph, Vec<u32>)>,
    truncated: Option<String>,
}

fn group_hosts(source: &Source, n_max: usize, vertex_budget: usize) -> Result<Hosts> {
    let model = source.as_group().expect("group source");
    let mut builder = BallBuilder::new(model).with_budget(vertex_budget);
    let first = builder.ball()?;
    let mut balls = vec![(0, first.graph, first.dist)];
    let mut host = None;
    let mut truncated = None;
    loop {
        let before = builder.vertex_count();
        match builder.extend() {
            Ok(()) => {}
            Err(Error::Resource { message }) => {
                truncated = Some(message);
                break;
            }
            Err(e) => return Err(e),
        }
        if builder.vertex_count() == before {
            break;
        }
        let b = builder.ball()?;
        if b.vertex_count() > n_max {
            host = Some((b.graph, b.dist));
            break;
        }
        balls.push((b.radius, b.graph, b.dist));
    }
    Ok(Hosts {
        balls,
        host,
        truncated,
    })
}

fn graph_hosts(g: &Graph, n_max: usize) -> Result<Hosts> {
    let mut balls = Vec::new();
    if g.vertex_count() == 0 {
        return Ok(Hosts {
            balls,
            host: None,
            truncated: None,
        });
    }
    let dist = crate::graphs::bfs_distances(g, &VertexSet::singleton(0))?;
    let mut r = 0;
    let mut last = 0;
    loop {
        let set: VertexSet = (0..g.vertex_count()).filter(|&v| dist[v] <= r).collect();
        if set.len() > n_max || set.len() == last {
            break;
        }
        last = set.len();
        let (sub, remap) = induced_subgraph(g, &set)?;
        let d = remap.iter().map(|&v| dist[v]).collect();
        balls.push((r, sub, d));
        r += 1;
    }
    Ok(Hosts {
        balls,
        host: Some((g.clone(), dist)),
        truncated: None,
    })
}

fn shell(g: &Graph, dist: &[u32], r: u32, w: u32) -> Result<(Graph, Vec<u32>)> {
    let set: VertexSet = (0..g.vertex_count())
        .filter(|&v| dist[v] <= r && dist[v] + w > r)
        .collect();
    let (sub, remap) = induced_subgraph(g, &set)?;
    let d = remap.iter().map(|&v| dist[v]).collect();
    Ok((sub, d))
}

/// Grows a connected set from `start` by absorbing uniformly random frontier
/// vertices until it has `target` vertices or the component runs out.
pub(crate) fn grow_random<R: Rng>(g: &Graph, start: VertexId, target: usize, rng: &mut R) -> VertexSet {
    let n = g.vertex_count();
    let mut inside = vec![false; n];
    let mut queued = vec![false; n];
    let mut frontier = vec![start];
    queued[start] = true;
    let mut taken = 0;
    while taken < target && !frontier.is_empty() {
        let i = rng.gen_range(0..frontier.len());
        let v = frontier.swap_remove(i);
        inside[v] = true;
        taken += 1;
        for &w in g.neighbors(v) {
            if !queued[w] {
                queued[w] = true;
                frontier.push(w);
            }
        }
    }
    VertexSet::from_mask(&inside)
}

/// Target sizes for random samples: `n_max`, then repeatedly two thirds of
/// it, down to 4 vertices.
fn random_targets(n_max: usize, host: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut t = n_max.min(host);
    while t >= 4 {
        out.push(t);
        t = t * 2 / 3;
    }
    out
}

/// Builds the candidate subgraphs for a profile, in evaluation order: balls
/// by radius, shells by radius, then random samples. The second value is the
/// budget message when the host ball could not reach `n_max` vertices.
pub fn profile_candidates(
    source: &Source,
    opts: &ProfileOptions,
) -> Result<(Vec<BuiltCandidate>, Option<String>)> {
    if opts.n_max == 0 {
        return Err(Error::Argument("n_max must be at least 1".into()));
    }
    let hosts = match source {
        Source::Group(_) => group_hosts(source, opts.n_max, opts.vertex_budget)?,
        Source::Graph { graph, .. } => graph_hosts(graph, opts.n_max)?,
    };
    let mut out: Vec<BuiltCandidate> = Vec::new();
    let mut strategies = opts.strategies.clone();
    strategies.sort();
    strategies.dedup();
    for strategy in strategies {
        match strategy {
            Strategy::Balls => {
                for (r, g, d) in &hosts.balls {
                    let c = Candidate {
                        strategy,
                        radius: Some(*r),
                        thickness: None,
                        sample: None,
                        vertices: g.vertex_count(),
                    };
                    out.push((c, g.clone(), Some(d.clone())));
                }
            }
            Strategy::SpheresThickened => {
                for (r, g, d) in hosts.balls.iter().filter(|b| b.0 >= 3) {
                    let w = (r.div_ceil(2)).max(2);
                    let (sub, sd) = shell(g, d, *r, w)?;
                    let c = Candidate {
                        strategy,
                        radius: Some(*r),
                        thickness: Some(w),
                        sample: None,
                        vertices: sub.vertex_count(),
                    };
                    out.push((c, sub, Some(sd)));
                }
            }
            Strategy::RandomConnected => {
                let host = match &hosts.host {
                    Some((g, d)) => Some((g, d)),
                    None => hosts.balls.last().map(|(_, g, d)| (g, d)),
                };
                let Some((g, d)) = host else { continue };
                let reach = d.iter().filter(|&&x| x != UNREACHABLE).max().copied().unwrap_or(0);
                let starts: Vec<VertexId> = (0..g.vertex_count())
                    .filter(|&v| d[v] != UNREACHABLE && d[v] <= reach / 2)
                    .collect();
                for (i, t) in random_targets(opts.n_max, g.vertex_count()).into_iter().enumerate() {
                    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(i as u64));
                    let start = starts[rng.gen_range(0..starts.len())];
                    let set = grow_random(g, start, t, &mut rng);
                    let (sub, _) = induced_subgraph(g, &set)?;
                    let c = Candidate {
                        strategy,
                        radius: None,
                        thickness: None,
                        sample: Some(i),
                        vertices: sub.vertex_count(),
                    };
                    out.push((c, sub, None));
                }
            }
        }
    }
    Ok((out, hosts.truncated))
}
