//! The `sepprofile` command line: every experiment as a subcommand, each
//! run saved as a JSON record that `verify` can re-check.

pub mod record;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sepprofile::cuts::{
    cut_brute, cut_exact_with, cut_heuristic, cut_heuristic_layered, CutCertificate, CutOutcome,
    ExactOptions,
};
use sepprofile::graphs::{load_edge_list, write_edge_list, Graph};
use sepprofile::groups::{cayley_ball_with_budget, kappa, GroupModel, Source, DEFAULT_VERTEX_BUDGET};
use sepprofile::hyperbolicity::{
    bigon_fatness_scan, bottleneck_check, find_distorted_cycle, Ratio, WitnessOptions, DEFAULT_K,
};
use sepprofile::profiles::{fit_exponent, gap_check, sep_profile, ProfileOptions, Strategy};

use record::{load_record, strip_timing, verify_record, GraphRef, KappaValue, Payload, RunRecord, SCHEMA};

const PROFILE_HELP: &str = "\
Output files in DIR:
  profile.csv     columns n,cut_lower,cut_upper,candidate: one row per
                  distinct candidate size; the cut columns hold the running
                  maximum of certified bounds, candidate names its holder
  profile.json    the run record
  profile.loglog  two columns `log_n log_cut` (natural logs of n and
                  cut_lower), for plotting";

#[derive(Parser, Debug)]
#[command(name = "sepprofile", version, about = "Separation profiles and hyperbolicity witnesses for Cayley graphs")]
pub struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Seed for every random choice (ChaCha8 streams derived from it).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Largest Cayley ball to enumerate, in vertices.
    #[arg(long, global = true, default_value_t = DEFAULT_VERTEX_BUDGET)]
    pub vertex_budget: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a Cayley ball and write it as an edge list.
    Ball {
        #[arg(long)]
        group: String,
        #[arg(long)]
        radius: u32,
        /// Edge list path; the record goes to PATH.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute or bracket the cut size of a graph.
    Cut(CutArgs),
    /// Empirical separation profile with a log-log fit.
    #[command(after_help = PROFILE_HELP)]
    Profile {
        #[arg(long)]
        group: String,
        #[arg(long)]
        max_n: usize,
        /// Comma-separated: balls, spheres-thickened, random-connected.
        #[arg(long, value_delimiter = ',', default_value = "balls")]
        candidates: Vec<Strategy>,
        /// Per-candidate budget for the exact solver.
        #[arg(long, default_value_t = 2_000)]
        budget_ms: i64,
        /// Smallest n used by the fit.
        #[arg(long, default_value_t = 1)]
        fit_min_n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inverse growth function: the largest r with |B_r| <= n.
    Kappa {
        #[arg(long)]
        group: String,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check cut(B_r) >= r / (400 M) for r = 1..=max-r.
    Gapcheck {
        #[arg(long)]
        group: String,
        #[arg(long)]
        max_r: u32,
        #[arg(long, default_value_t = 2_000)]
        budget_ms: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a long embedded cycle of bounded distortion.
    Witness {
        #[arg(long)]
        group: String,
        #[arg(long)]
        length: usize,
        /// Largest accepted distortion, an integer or a fraction like 5/2.
        #[arg(long, default_value_t = Ratio::from_integer(DEFAULT_K))]
        distortion: Ratio<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The fattest geodesic bigons between points of B_radius.
    Bigons {
        #[arg(long)]
        group: String,
        #[arg(long)]
        radius: u32,
        /// Rows printed (all are kept in the record).
        #[arg(long, default_value_t = 10)]
        top: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite-scale bottleneck test around geodesic midpoints.
    Bottleneck {
        #[arg(long)]
        group: String,
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        delta: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check the separators and witnesses of a saved record.
    Verify {
        #[arg(long)]
        record: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct CutArgs {
    /// Edge list file.
    #[arg(long, conflicts_with = "group", required_unless_present = "group")]
    input: Option<PathBuf>,
    /// Group spec (with --radius) or graph spec such as sierpinski:3.
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    radius: Option<u32>,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    #[arg(long, default_value_t = 10_000)]
    budget_ms: i64,
    /// Where to write the record with the full certificate.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    Brute,
    Exact,
    Heuristic,
}

/// Everything a subcommand produces before it is wrapped into a record.
struct Finished {
    source: Option<String>,
    parameters: serde_json::Value,
    payload: Payload,
}

fn group_model(src: &Source) -> Result<&dyn GroupModel> {
    match src.as_group() {
        Some(m) => Ok(m),
        None => Err(sepprofile::Error::Argument(format!("{} is a graph, not a group", src.name())).into()),
    }
}

fn parse_group(spec: &str) -> Result<Source> {
    Ok(Source::parse(spec)?)
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn run_ball(cli: &Cli, group: &str, radius: u32, out: &mut dyn Write, path: Option<&Path>) -> Result<Finished> {
    let src = parse_group(group)?;
    let ball = cayley_ball_with_budget(group_model(&src)?, radius, cli.vertex_budget)?;
    let g = &ball.graph;
    writeln!(out, "vertices={} edges={}", g.vertex_count(), g.edge_count())?;
    writeln!(out, "layers={:?}", ball.layer_sizes())?;
    if let Some(p) = path {
        fs::write(p, write_edge_list(g)).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(Finished {
        source: Some(group.to_string()),
        parameters: json!({ "radius": radius }),
        payload: Payload::Ball {
            group: group.to_string(),
            radius,
            center: ball.center,
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            layer_sizes: ball.layer_sizes(),
            dist: ball.dist.clone(),
            keys: (0..g.vertex_count()).map(|v| g.label(v).unwrap_or_default().to_string()).collect(),
        },
    })
}

fn run_cut(cli: &Cli, args: &CutArgs, out: &mut dyn Write) -> Result<Finished> {
    let (graph_ref, g, layers): (GraphRef, Graph, Option<Vec<u32>>) = match (&args.input, &args.group) {
        (Some(path), _) => (
            GraphRef::File {
                path: path.display().to_string(),
            },
            load_edge_list(path)?,
            None,
        ),
        (None, Some(spec)) => match (parse_group(spec)?, args.radius) {
            (Source::Group(m), Some(r)) => {
                let ball = cayley_ball_with_budget(m.as_ref(), r, cli.vertex_budget)?;
                (
                    GraphRef::Ball {
                        group: spec.clone(),
                        radius: r,
                    },
                    ball.graph,
                    Some(ball.dist),
                )
            }
            (Source::Group(_), None) => {
                return Err(sepprofile::Error::Argument(format!("{spec} is a group; pass --radius")).into())
            }
            (Source::Graph { graph, .. }, None) => (GraphRef::Source { spec: spec.clone() }, graph, None),
            (Source::Graph { .. }, Some(_)) => {
                return Err(sepprofile::Error::Argument(format!("{spec} is a graph; --radius does not apply")).into())
            }
        },
        (None, None) => return Err(sepprofile::Error::Argument("one of --input or --group is required".into()).into()),
    };
    let (upper, lower) = match args.mode {
        Mode::Brute => (cut_brute(&g)?, None),
        Mode::Heuristic => match &layers {
            Some(d) => (cut_heuristic_layered(&g, d, cli.seed), None),
            None => (cut_heuristic(&g, cli.seed), None),
        },
        Mode::Exact => {
            let mut outcome = cut_exact_with(
                &g,
                &ExactOptions {
                    seed: cli.seed,
                    layers: layers.as_deref(),
                    ..ExactOptions::new(args.budget_ms)
                },
            )?;
            strip_timing(&mut outcome);
            match outcome {
                CutOutcome::Exact(c) => (c, None),
                CutOutcome::Bracketed { lower, upper } => (upper, Some(lower)),
            }
        }
    };
    let mut upper: CutCertificate = upper;
    upper.stats.elapsed_ms = 0;
    match &lower {
        Some(l) => writeln!(out, "cut={},{} kind=lower,upper", l.value, upper.value)?,
        None => writeln!(out, "cut={} kind={}", upper.value, upper.bound_kind.as_str())?,
    }
    Ok(Finished {
        source: args.group.clone().or_else(|| args.input.as_ref().map(|p| p.display().to_string())),
        parameters: json!({
            "radius": args.radius,
            "mode": format!("{:?}", args.mode).to_lowercase(),
            "budget_ms": args.budget_ms,
        }),
        payload: Payload::Cut {
            graph: graph_ref,
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            mode: format!("{:?}", args.mode).to_lowercase(),
            upper,
            lower,
        },
    })
}

#[allow(clippy::too_many_arguments)]
fn run_profile(
    cli: &Cli,
    group: &str,
    max_n: usize,
    strategies: &[Strategy],
    budget_ms: i64,
    fit_min_n: usize,
    out: &mut dyn Write,
    dir: Option<&Path>,
) -> Result<Finished> {
    let src = parse_group(group)?;
    let opts = ProfileOptions {
        strategies: strategies.to_vec(),
        budget_ms,
        seed: cli.seed,
        vertex_budget: cli.vertex_budget,
        ..ProfileOptions::new(max_n)
    };
    let mut profile = sep_profile(&src, &opts)?;
    for c in &mut profile.candidates {
        strip_timing(&mut c.outcome);
    }
    writeln!(out, "{:>8} {:>9} {:>9}  candidate", "n", "cut_lower", "cut_upper")?;
    for p in &profile.points {
        writeln!(out, "{:>8} {:>9} {:>9}  {}", p.n, p.best_cut_lower, p.best_cut_upper, p.witness_candidate)?;
    }
    if let Some(t) = &profile.truncated {
        writeln!(out, "truncated: {t}")?;
    }
    let fit = fit_exponent(&profile.points, fit_min_n).ok();
    match &fit {
        Some(f) => writeln!(
            out,
            "fit: slope={:.4} intercept={:.4} r2={:.4} n=[{},{}] points={}",
            f.slope, f.intercept, f.r_squared, f.range[0], f.range[1], f.points_used
        )?,
        None => writeln!(out, "fit: fewer than 3 usable points")?,
    }
    if let Some(dir) = dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut w = csv::Writer::from_path(dir.join("profile.csv"))?;
        w.write_record(["n", "cut_lower", "cut_upper", "candidate"])?;
        for p in &profile.points {
            w.write_record([
                p.n.to_string(),
                p.best_cut_lower.to_string(),
                p.best_cut_upper.to_string(),
                p.witness_candidate.clone(),
            ])?;
        }
        w.flush()?;
        let mut loglog = String::from("# log_n log_cut\n");
        for p in profile.points.iter().filter(|p| p.best_cut_lower > 0) {
            loglog += &format!("{:.6} {:.6}\n", (p.n as f64).ln(), (p.best_cut_lower as f64).ln());
        }
        fs::write(dir.join("profile.loglog"), loglog)?;
    }
    Ok(Finished {
        source: Some(group.to_string()),
        parameters: json!({
            "max_n": max_n,
            "candidates": strategies,
            "budget_ms": budget_ms,
            "fit_min_n": fit_min_n,
        }),
        payload: Payload::Profile {
            group: group.to_string(),
            max_n,
            strategies: strategies.to_vec(),
            budget_ms,
            vertex_budget: cli.vertex_budget,
            points: profile.points,
            candidates: profile.candidates,
            fit,
            truncated: profile.truncated,
        },
    })
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<Option<(Finished, PathBuf)>> {
    let finished = match &cli.command {
        Command::Ball { group, radius, out: path } => {
            let f = run_ball(cli, group, *radius, out, path.as_deref())?;
            path.as_ref().map(|p| {
                let mut json = p.clone().into_os_string();
                json.push(".json");
                (f, PathBuf::from(json))
            })
        }
        Command::Cut(args) => {
            let f = run_cut(cli, args, out)?;
            args.out.clone().map(|p| (f, p))
        }
        Command::Profile {
            group,
            max_n,
            candidates,
            budget_ms,
            fit_min_n,
            out: dir,
        } => {
            let f = run_profile(cli, group, *max_n, candidates, *budget_ms, *fit_min_n, out, dir.as_deref())?;
            dir.as_ref().map(|d| (f, d.join("profile.json")))
        }
        Command::Kappa { group, n, out: path } => {
            let src = parse_group(group)?;
            let m = group_model(&src)?;
            let values = n
                .iter()
                .map(|&n| Ok(KappaValue { n, kappa: kappa(m, n)? }))
                .collect::<Result<Vec<_>>>()?;
            writeln!(out, "{:>10} {:>6}", "n", "kappa")?;
            for v in &values {
                writeln!(out, "{:>10} {:>6}", v.n, v.kappa)?;
            }
            let f = Finished {
                source: Some(group.clone()),
                parameters: json!({ "n": n }),
                payload: Payload::Kappa {
                    group: group.clone(),
                    values,
                },
            };
            path.clone().map(|p| (f, p))
        }
        Command::Gapcheck {
            group,
            max_r,
            budget_ms,
            out: path,
        } => {
            let src = parse_group(group)?;
            let report = gap_check(group_model(&src)?, *max_r, *budget_ms, cli.seed)?;
            writeln!(out, "group={} M={} one_ended={}", report.group, report.relator_bound, report.one_ended)?;
            writeln!(out, "{:>4} {:>8} {:>6} {:>6} {:>10} {:>8}  result", "r", "n", "lower", "upper", "threshold", "lower/r")?;
            for row in &report.rows {
                writeln!(
                    out,
                    "{:>4} {:>8} {:>6} {:>6} {:>10.5} {:>8.3}  {}",
                    row.r,
                    row.n,
                    row.lower,
                    row.upper,
                    row.threshold,
                    row.ratio_lower,
                    if row.pass { "pass" } else { "FAIL" }
                )?;
            }
            writeln!(out, "{}/{} pass", report.passed(), report.rows.len())?;
            let f = Finished {
                source: Some(group.clone()),
                parameters: json!({ "max_r": max_r, "budget_ms": budget_ms }),
                payload: Payload::Gapcheck { report },
            };
            path.clone().map(|p| (f, p))
        }
        Command::Witness {
            group,
            length,
            distortion,
            out: path,
        } => {
            let src = parse_group(group)?;
            let opts = WitnessOptions {
                k: *distortion,
                vertex_budget: cli.vertex_budget.min(WitnessOptions::default().vertex_budget),
                ..WitnessOptions::default()
            };
            let search = find_distorted_cycle(group_model(&src)?, *length, &opts)?;
            writeln!(out, "{}", search.summary())?;
            match &search {
                sepprofile::hyperbolicity::WitnessSearch::Found(w) => {
                    writeln!(out, "phase={} ball_radius={}", w.phase, w.ambient_radius_used)?;
                    writeln!(out, "keys={}", w.keys.join(" "))?;
                }
                sepprofile::hyperbolicity::WitnessSearch::Exhausted { searched_radius, candidates_tried } => {
                    writeln!(out, "searched_radius={searched_radius} candidates_tried={candidates_tried}")?
                }
                sepprofile::hyperbolicity::WitnessSearch::BudgetLimited {
                    searched_radius,
                    max_length_searchable,
                    message,
                } => writeln!(
                    out,
                    "searched_radius={searched_radius} max_length_searchable={max_length_searchable}: {message}"
                )?,
            }
            let f = Finished {
                source: Some(group.clone()),
                parameters: json!({ "length": length, "distortion": distortion.to_string() }),
                payload: Payload::Witness {
                    group: group.clone(),
                    length: *length,
                    distortion: distortion.to_string(),
                    search,
                },
            };
            path.clone().map(|p| (f, p))
        }
        Command::Bigons {
            group,
            radius,
            top,
            out: path,
        } => {
            let src = parse_group(group)?;
            let reports = bigon_fatness_scan(group_model(&src)?, *radius, Some(cli.vertex_budget))?;
            let max = reports.first().map_or(0, |r| r.max_layer_diameter);
            writeln!(out, "max_fatness={max} bigons_reported={}", reports.len())?;
            writeln!(out, "{:>6} {:>7}  {:<20} {:<20}", "length", "fatness", "u", "v")?;
            for r in reports.iter().take(*top) {
                writeln!(out, "{:>6} {:>7}  {:<20} {:<20}", r.geodesic_length, r.max_layer_diameter, r.u_key, r.v_key)?;
            }
            let f = Finished {
                source: Some(group.clone()),
                parameters: json!({ "radius": radius }),
                payload: Payload::Bigons {
                    group: group.clone(),
                    radius: *radius,
                    reports,
                },
            };
            path.clone().map(|p| (f, p))
        }
        Command::Bottleneck {
            group,
            radius,
            delta,
            out: path,
        } => {
            let src = parse_group(group)?;
            let report = bottleneck_check(group_model(&src)?, *radius, *delta, Some(cli.vertex_budget))?;
            writeln!(
                out,
                "pairs_checked={} violations={} holds={}",
                report.pairs_checked,
                report.violations.len(),
                report.holds()
            )?;
            for v in report.violations.iter().take(10) {
                writeln!(out, "  {} -- {} around {}", v.x_key, v.y_key, v.midpoint_key)?;
            }
            let f = Finished {
                source: Some(group.clone()),
                parameters: json!({ "radius": radius, "delta": delta }),
                payload: Payload::Bottleneck { report },
            };
            path.clone().map(|p| (f, p))
        }
        Command::Verify { record } => {
            let rec = load_record(record)?;
            writeln!(out, "{}", verify_record(&rec)?)?;
            None
        }
    };
    Ok(finished)
}

/// Runs a parsed command line, writing human output to `out` and the run
/// record to the subcommand's `--out` target, if any.
pub fn run(cli: &Cli, argv: &[String], out: &mut dyn Write) -> Result<()> {
    let workers = cli.workers.unwrap_or_else(rayon::current_num_threads).max(1);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    let started_at = chrono::Utc::now().to_rfc3339();
    let mut buffer = Vec::new();
    let finished = pool.install(|| execute(cli, &mut buffer));
    out.write_all(&buffer)?;
    let finished = finished?;
    if let Some((f, path)) = finished {
        let record = RunRecord {
            schema: SCHEMA,
            command_line: argv.to_vec(),
            source: f.source,
            seed: cli.seed,
            parameters: f.parameters,
            started_at,
            finished_at: chrono::Utc::now().to_rfc3339(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            workers,
            payload: f.payload,
        };
        write_json(&path, &record)?;
    }
    Ok(())
}

/// Exit code for a failed run: 2 for user and resource errors, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    let user = err.chain().any(|e| {
        e.is::<sepprofile::Error>()
            || e.is::<std::io::Error>()
            || e.is::<serde_json::Error>()
            || e.is::<csv::Error>()
    });
    if user {
        2
    } else {
        1
    }
}
