//! Run records: one JSON document per invocation, re-checkable later.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use sepprofile::cuts::{CutCertificate, CutOutcome};
use sepprofile::graphs::{load_edge_list, Graph};
use sepprofile::groups::{cayley_ball, Source};
use sepprofile::hyperbolicity::{
    verify_witness, BigonReport, BottleneckReport, WitnessSearch,
};
use sepprofile::profiles::{
    profile_candidates, CandidateReport, FitReport, GapReport, ProfileOptions, ProfilePoint,
    Strategy,
};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema: u32,
    pub command_line: Vec<String>,
    pub source: Option<String>,
    pub seed: u64,
    pub parameters: serde_json::Value,
    pub started_at: String,
    pub finished_at: String,
    pub tool_version: String,
    /// worker threads used; results do not depend on it
    pub workers: usize,
    pub payload: Payload,
}

/// Where a cut's graph came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "from", rename_all = "kebab-case")]
pub enum GraphRef {
    Ball { group: String, radius: u32 },
    Source { spec: String },
    File { path: String },
}

impl GraphRef {
    pub fn load(&self) -> Result<Graph> {
        Ok(match self {
            GraphRef::Ball { group, radius } => {
                let src = Source::parse(group)?;
                let Some(m) = src.as_group() else {
                    bail!("{group} is not a group");
                };
                cayley_ball(m, *radius)?.graph
            }
            GraphRef::Source { spec } => match Source::parse(spec)? {
                Source::Graph { graph, .. } => graph,
                Source::Group(_) => bail!("{spec} is a group; a radius is needed"),
            },
            GraphRef::File { path } => load_edge_list(path)?,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KappaValue {
    pub n: usize,
    pub kappa: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Ball {
        group: String,
        radius: u32,
        center: usize,
        vertices: usize,
        edges: usize,
        layer_sizes: Vec<usize>,
        dist: Vec<u32>,
        keys: Vec<String>,
    },
    Cut {
        graph: GraphRef,
        vertices: usize,
        edges: usize,
        mode: String,
        upper: CutCertificate,
        lower: Option<CutCertificate>,
    },
    Profile {
        group: String,
        max_n: usize,
        strategies: Vec<Strategy>,
        budget_ms: i64,
        vertex_budget: usize,
        points: Vec<ProfilePoint>,
        candidates: Vec<CandidateReport>,
        fit: Option<FitReport>,
        truncated: Option<String>,
    },
    Kappa {
        group: String,
        values: Vec<KappaValue>,
    },
    Gapcheck {
        report: GapReport,
    },
    Witness {
        group: String,
        length: usize,
        distortion: String,
        search: WitnessSearch,
    },
    Bigons {
        group: String,
        radius: u32,
        reports: Vec<BigonReport>,
    },
    Bottleneck {
        report: BottleneckReport,
    },
}

/// Clears wall-clock fields so payloads compare equal across runs.
pub fn strip_timing(outcome: &mut CutOutcome) {
    match outcome {
        CutOutcome::Exact(c) => c.stats.elapsed_ms = 0,
        CutOutcome::Bracketed { lower, upper } => {
            lower.stats.elapsed_ms = 0;
            upper.stats.elapsed_ms = 0;
        }
    }
}

fn check_pair(g: &Graph, upper: &CutCertificate, lower: Option<&CutCertificate>) -> Result<()> {
    if !upper.verify(g) {
        bail!("separator of size {} is not a valid cut set", upper.value);
    }
    if let Some(l) = lower {
        if !l.verify(g) || l.value > upper.value {
            bail!("lower bound {} is inconsistent with upper bound {}", l.value, upper.value);
        }
    }
    Ok(())
}

/// Re-validates a record's payload against freshly rebuilt graphs: every
/// separator must be a cut set and every witness must re-measure to its
/// stated distortion. Returns a one-line summary.
pub fn verify_record(record: &RunRecord) -> Result<String> {
    if record.schema != SCHEMA {
        bail!("unsupported record schema {} (expected {SCHEMA})", record.schema);
    }
    match &record.payload {
        Payload::Ball {
            group,
            radius,
            vertices,
            keys,
            ..
        } => {
            let src = Source::parse(group)?;
            let m = src.as_group().context("ball record names a graph")?;
            let ball = cayley_ball(m, *radius)?;
            let fresh: Vec<&str> = (0..ball.vertex_count())
                .map(|v| ball.graph.label(v).unwrap_or_default())
                .collect();
            if ball.vertex_count() != *vertices || fresh != keys.iter().map(String::as_str).collect::<Vec<_>>() {
                bail!("ball does not match a fresh build");
            }
            Ok(format!("ball ok: {vertices} vertices"))
        }
        Payload::Cut {
            graph, upper, lower, ..
        } => {
            let g = graph.load()?;
            check_pair(&g, upper, lower.as_ref())?;
            Ok(format!("cut ok: separator of size {} verified", upper.value))
        }
        Payload::Profile {
            group,
            max_n,
            strategies,
            vertex_budget,
            candidates,
            points,
            ..
        } => {
            let src = Source::parse(group)?;
            let opts = ProfileOptions {
                strategies: strategies.clone(),
                seed: record.seed,
                vertex_budget: *vertex_budget,
                ..ProfileOptions::new(*max_n)
            };
            let (built, _) = profile_candidates(&src, &opts)?;
            if built.len() != candidates.len() {
                bail!("record has {} candidates, rebuild gives {}", candidates.len(), built.len());
            }
            for ((cand, g, _), report) in built.iter().zip(candidates) {
                if *cand != report.candidate {
                    bail!("candidate {} does not match a fresh build", report.candidate.descriptor());
                }
                let (upper, lower) = match &report.outcome {
                    CutOutcome::Exact(c) => (c, None),
                    CutOutcome::Bracketed { lower, upper } => (upper, Some(lower)),
                };
                check_pair(g, upper, lower)
                    .with_context(|| format!("candidate {}", cand.descriptor()))?;
            }
            for w in points.windows(2) {
                if w[1].best_cut_lower < w[0].best_cut_lower {
                    bail!("profile is not monotone at n = {}", w[1].n);
                }
            }
            Ok(format!("profile ok: {} candidates verified", candidates.len()))
        }
        Payload::Witness { group, search, .. } => match search {
            WitnessSearch::Found(w) => {
                let src = Source::parse(group)?;
                let m = src.as_group().context("witness record names a graph")?;
                let d = verify_witness(m, w)?;
                if d != w.distortion {
                    bail!("witness re-measures to {d}, record says {}", w.distortion);
                }
                Ok(format!("witness ok: length {} distortion {d}", w.length))
            }
            other => Ok(format!("witness record: {}", other.summary())),
        },
        Payload::Gapcheck { report } => {
            if report.rows.iter().any(|r| r.lower > r.upper) {
                bail!("gap report has a row with lower > upper");
            }
            Ok(format!("gapcheck ok: {}/{} pass", report.passed(), report.rows.len()))
        }
        Payload::Kappa { values, .. } => Ok(format!("kappa record: {} values", values.len())),
        Payload::Bigons { reports, .. } => {
            if reports.iter().any(|r| r.max_layer_diameter > r.geodesic_length) {
                bail!("bigon report exceeds its geodesic length");
            }
            Ok(format!("bigons ok: {} reports", reports.len()))
        }
        Payload::Bottleneck { report } => Ok(format!(
            "bottleneck record: {} violations in {} pairs",
            report.violations.len(),
            report.pairs_checked
        )),
    }
}

pub fn load_record(path: &Path) -> Result<RunRecord> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
