//! Acceptance run: one line per criterion, `PASS` or `FAIL` with the numbers
//! behind it. Exits non-zero if any criterion fails, except those listed in
//! `KNOWN_UNATTAINABLE`, which are still run and reported.
//!
//! Independent oracles live here: an exhaustive subset search for cut sizes
//! and lattice balls built from coordinates rather than from the group code.

use std::collections::VecDeque;
use std::process::Command;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use sepprofile::cuts::{cut_brute, cut_exact, cut_heuristic_layered, CutOutcome};
use sepprofile::graphs::{complete_graph, cycle_graph, path_graph, random_connected_graph, Graph};
use sepprofile::groups::{catalog_group, cayley_ball, kappa, Source};
use sepprofile::hyperbolicity::{bigon_fatness_scan, find_distorted_cycle, verify_witness, Ratio, WitnessOptions, WitnessSearch};
use sepprofile::profiles::{fit_exponent, gap_check, sep_profile, Profile, ProfileOptions};

/// Criteria that cannot hold for mathematical reasons; see the README.
const KNOWN_UNATTAINABLE: &[(u32, &str)] = &[(
    6,
    "B_3 of surface:2 is a tree (cut 1) while cut(B_4) = 3, so cut/sqrt(n) rises from r = 3 to r = 4",
)];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn adjacency(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.vertex_count()).map(|v| g.neighbors(v).to_vec()).collect()
}

/// Largest component left after deleting `removed`.
fn largest_left(adj: &[Vec<usize>], removed: &[bool]) -> usize {
    let mut seen = removed.to_vec();
    let mut best = 0;
    for s in 0..adj.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut size = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            size += 1;
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        best = best.max(size);
    }
    best
}

fn any_cut_of_size(adj: &[Vec<usize>], start: usize, removed: &mut [bool], left: usize) -> bool {
    if left == 0 {
        return largest_left(adj, removed) <= adj.len() / 2;
    }
    for v in start..adj.len() {
        if adj.len() - v < left {
            break;
        }
        removed[v] = true;
        let hit = any_cut_of_size(adj, v + 1, removed, left - 1);
        removed[v] = false;
        if hit {
            return true;
        }
    }
    false
}

/// Exhaustive cut size, or the first `k <= k_max` that works; `None` when
/// no set of at most `k_max` vertices is a cut set.
fn oracle_cut(adj: &[Vec<usize>], k_max: usize) -> Option<usize> {
    let n = adj.len();
    if n <= 1 {
        return Some(n);
    }
    (0..=k_max.min(n)).find(|&k| any_cut_of_size(adj, 0, &mut vec![false; n], k))
}

/// `{(x, y) : |x| + |y| <= r}` with unit steps, built from coordinates.
fn lattice_ball(r: i64) -> Vec<Vec<usize>> {
    let points: Vec<(i64, i64)> = (-r..=r)
        .flat_map(|x| (-r..=r).map(move |y| (x, y)))
        .filter(|(x, y)| x.abs() + y.abs() <= r)
        .collect();
    let index = |p: (i64, i64)| points.iter().position(|&q| q == p);
    points
        .iter()
        .map(|&(x, y)| {
            [(1, 0), (-1, 0), (0, 1), (0, -1)]
                .iter()
                .filter_map(|(dx, dy)| index((x + dx, y + dy)))
                .collect()
        })
        .collect()
}

fn z2_size(r: usize) -> usize {
    2 * r * r + 2 * r + 1
}

fn free2_size(r: u32) -> usize {
    2 * 3usize.pow(r) - 1
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut graphs: Vec<Graph> = (0..200)
        .map(|i| {
            let n = 4 + i % 9;
            let p = [0.1, 0.25, 0.5][i % 3];
            random_connected_graph(n, p, &mut rng)
        })
        .collect();
    for n in 1..=14 {
        graphs.push(path_graph(n));
        graphs.push(complete_graph(n));
        if n >= 3 {
            graphs.push(cycle_graph(n));
        }
    }
    let mut mismatches = 0;
    for g in &graphs {
        let exact = cut_exact(g, 60_000).unwrap();
        let brute = cut_brute(g).unwrap().value;
        let oracle = oracle_cut(&adjacency(g), g.vertex_count()).unwrap();
        if !exact.is_exact() || exact.upper_value() != brute || brute != oracle {
            mismatches += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        mismatches == 0 && secs < 60.0,
        format!("{} graphs, {mismatches} mismatches, {secs:.1}s", graphs.len()),
    )
}

fn criterion_2() -> Verdict {
    let mut bad = Vec::new();
    for n in 1..=14usize {
        let mut families = vec![("P", path_graph(n), 1), ("K", complete_graph(n), n.div_ceil(2))];
        if n >= 3 {
            families.push(("C", cycle_graph(n), 2));
        }
        for (name, g, want) in families {
            match cut_exact(&g, 60_000).unwrap() {
                CutOutcome::Exact(c) if c.value == want => {}
                other => bad.push(format!("{name}_{n}: {}", other.upper_value())),
            }
        }
    }
    verdict(bad.is_empty(), format!("P_n, C_n, K_n for n <= 14; failures: {bad:?}"))
}

fn profile(spec: &str, n_max: usize, budget_ms: i64) -> Profile {
    let opts = ProfileOptions {
        budget_ms,
        ..ProfileOptions::new(n_max)
    };
    sep_profile(&Source::parse(spec).unwrap(), &opts).unwrap()
}

fn criterion_3() -> Verdict {
    let p = profile("free:2", free2_size(6), 2_000);
    let balls: Vec<_> = p.candidates.iter().filter(|c| c.candidate.radius.is_some_and(|r| r >= 1)).collect();
    let all_one = balls.iter().all(|c| c.outcome.is_exact() && c.outcome.upper_value() == 1);
    let sizes_ok = balls.iter().all(|c| c.candidate.vertices == free2_size(c.candidate.radius.unwrap()));
    let fit = fit_exponent(&p.points, 1).unwrap();
    verdict(
        balls.len() == 6 && all_one && sizes_ok && fit.slope.abs() <= 0.05,
        format!("{} balls, all exactly 1: {all_one}, slope {:.4}", balls.len(), fit.slope),
    )
}

fn criterion_4_and_7() -> (Verdict, Verdict) {
    let start = Instant::now();
    let z2 = profile("zd:2", z2_size(24), 2_000);
    let fit2 = fit_exponent(&z2.points, z2_size(4)).unwrap();
    let exact_small = z2
        .candidates
        .iter()
        .filter(|c| c.candidate.radius.is_some_and(|r| r <= 7))
        .all(|c| c.outcome.is_exact());

    let z3_host = cayley_ball(catalog_group("zd:3").unwrap().as_ref(), 8).unwrap();
    let z3 = profile("zd:3", z3_host.vertex_count(), 2_000);
    let fit3 = fit_exponent(&z3.points, 1).unwrap();
    let secs = start.elapsed().as_secs_f64();

    let c4 = verdict(
        (0.38..=0.62).contains(&fit2.slope) && (0.55..=0.78).contains(&fit3.slope) && exact_small && secs < 600.0,
        format!(
            "zd:2 slope {:.3} over r=4..24 (exact for r<=7: {exact_small}), zd:3 slope {:.3} over r<=8, {secs:.0}s",
            fit2.slope, fit3.slope
        ),
    );

    let mut worst = f64::INFINITY;
    for c in &z2.candidates {
        let Some(r) = c.candidate.radius.filter(|r| (4..=24).contains(r)) else {
            continue;
        };
        let n = z2_size(r as usize);
        let at = z2.points.iter().find(|p| p.n == n).map_or(0, |p| p.best_cut_lower);
        worst = worst.min(at as f64 / (n as f64).sqrt());
    }
    let c7 = verdict(worst >= 0.1, format!("min profile/sqrt(n) over zd:2 balls r=4..24 is {worst:.3}"));
    (c4, c7)
}

fn criterion_5() -> Verdict {
    let z2 = gap_check(catalog_group("zd:2").unwrap().as_ref(), 10, 5_000, 0).unwrap();
    let heis = gap_check(catalog_group("heis").unwrap().as_ref(), 6, 5_000, 0).unwrap();
    let mut ratios = Vec::new();
    let mut agree = true;
    for row in z2.rows.iter().filter(|row| (3..=7).contains(&row.r)) {
        ratios.push(row.lower as f64 / row.r as f64);
        agree &= row.lower == row.upper;
        if row.r <= 5 {
            // independent lower bound: no smaller set of the coordinate ball cuts it
            let adj = lattice_ball(i64::from(row.r));
            agree &= adj.len() == row.n && oracle_cut(&adj, row.lower - 1).is_none();
        }
    }
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    verdict(
        z2.all_pass() && z2.relator_bound == 4 && heis.all_pass() && heis.relator_bound == 5 && agree && lo >= 0.5,
        format!(
            "zd:2 {}/{} pass, heis {}/{} pass, cut/r in [{lo:.2}, {hi:.2}] for r=3..7",
            z2.passed(),
            z2.rows.len(),
            heis.passed(),
            heis.rows.len()
        ),
    )
}

fn criterion_6() -> Verdict {
    let m = catalog_group("surface:2").unwrap();
    let mut ratios = Vec::new();
    let mut within = true;
    let mut cells = Vec::new();
    for r in 1..=5u32 {
        let ball = cayley_ball(m.as_ref(), r).unwrap();
        let upper = cut_heuristic_layered(&ball.graph, &ball.dist, 0).value;
        let lower = cut_exact(&ball.graph, 2_000).unwrap().lower_value();
        let n = ball.vertex_count();
        within &= upper as u32 <= 8 * r && lower <= upper;
        cells.push(format!("r={r} n={n} cut in [{lower},{upper}]"));
        if r >= 3 {
            ratios.push(upper as f64 / (n as f64).sqrt());
        }
    }
    let decreasing = ratios.windows(2).all(|w| w[1] < w[0]);
    let ratios: Vec<String> = ratios.iter().map(|x| format!("{x:.3}")).collect();
    verdict(
        within && decreasing,
        format!("{}; upper/sqrt(n) for r=3..5: {}", cells.join(", "), ratios.join(", ")),
    )
}

fn criterion_8() -> Verdict {
    let z2 = catalog_group("zd:2").unwrap();
    let f2 = catalog_group("free:2").unwrap();
    let opts = WitnessOptions::default();
    let mut found = Vec::new();
    let mut ok = true;
    for target in [16, 32, 64] {
        match find_distorted_cycle(z2.as_ref(), target, &opts).unwrap() {
            WitnessSearch::Found(w) => {
                let again = verify_witness(z2.as_ref(), &w).unwrap();
                ok &= w.length >= target && again == w.distortion && w.distortion <= Ratio::from_integer(2);
                found.push(format!("{}@{}", w.length, w.distortion));
            }
            other => {
                ok = false;
                found.push(other.summary());
            }
        }
    }
    let exhausted = (3..=12).all(|l| {
        find_distorted_cycle(f2.as_ref(), l, &opts).unwrap().summary() == "none (exhausted)"
    });
    let free_fat = bigon_fatness_scan(f2.as_ref(), 5, None).unwrap().iter().map(|r| r.max_layer_diameter).max().unwrap_or(0);
    let lattice_fat = bigon_fatness_scan(z2.as_ref(), 10, None).unwrap()[0].max_layer_diameter;
    verdict(
        ok && exhausted && free_fat == 0 && lattice_fat >= 4,
        format!(
            "zd:2 witnesses {found:?}, free:2 exhausted for 3..=12: {exhausted}, fatness free:2 {free_fat}, zd:2 {lattice_fat}"
        ),
    )
}

fn criterion_9() -> Verdict {
    let z2 = catalog_group("zd:2").unwrap();
    let f2 = catalog_group("free:2").unwrap();
    // closed forms: largest r with |B_r| <= n
    let z2_kappa = |n: usize| (0..).take_while(|&r| z2_size(r) <= n).last().unwrap() as u32;
    let f2_kappa = |n: usize| (0..).take_while(|&r| free2_size(r) <= n).last().unwrap();
    let cases = [
        (kappa(z2.as_ref(), 13).unwrap(), z2_kappa(13), 2),
        (kappa(z2.as_ref(), 24).unwrap(), z2_kappa(24), 2),
        (kappa(z2.as_ref(), 25).unwrap(), z2_kappa(25), 3),
        (kappa(f2.as_ref(), 17).unwrap(), f2_kappa(17), 2),
    ];
    let ok = cases.iter().all(|&(got, closed, want)| got == want && closed == want);
    verdict(ok, format!("(library, closed form, expected): {cases:?}"))
}

fn run_cli(workers: &str, args: &[&str], record: &std::path::Path) -> Value {
    let mut full = vec!["--workers", workers, "--seed", "11"];
    full.extend_from_slice(args);
    let status = Command::new(env!("CARGO_BIN_EXE_sepprofile"))
        .args(&full)
        .output()
        .expect("binary runs")
        .status;
    assert!(status.success(), "{full:?}");
    let json: Value = serde_json::from_str(&std::fs::read_to_string(record).unwrap()).unwrap();
    json["payload"].clone()
}

fn criterion_10() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<(&str, Vec<String>, &str)> = vec![
        ("profile", vec!["profile", "--group", "zd:2", "--max-n", "200", "--candidates", "balls,spheres-thickened,random-connected", "--out"].into_iter().map(String::from).collect(), "profile.json"),
        ("cut", vec!["cut", "--group", "heis", "--radius", "3", "--out"].into_iter().map(String::from).collect(), ""),
        ("witness", vec!["witness", "--group", "lamplighter", "--length", "12", "--out"].into_iter().map(String::from).collect(), ""),
        ("gapcheck", vec!["gapcheck", "--group", "zd:2", "--max-r", "5", "--out"].into_iter().map(String::from).collect(), ""),
        ("bigons", vec!["bigons", "--group", "heis", "--radius", "3", "--out"].into_iter().map(String::from).collect(), ""),
    ];
    let mut differing = Vec::new();
    for (name, args, file) in &runs {
        let payloads: Vec<Value> = ["1", "4"]
            .iter()
            .map(|w| {
                let target = dir.path().join(format!("{name}-{w}"));
                let mut args: Vec<&str> = args.iter().map(String::as_str).collect();
                let target_str = target.to_str().unwrap().to_string();
                args.push(&target_str);
                let record = if file.is_empty() { target.clone() } else { target.join(file) };
                run_cli(w, &args, &record)
            })
            .collect();
        if payloads[0] != payloads[1] {
            differing.push(*name);
        }
    }
    verdict(
        differing.is_empty(),
        format!("{} subcommands at --workers 1 and 4; differing payloads: {differing:?}", runs.len()),
    )
}

fn main() {
    let start = Instant::now();
    let mut results: Vec<(u32, Verdict)> = vec![
        (1, criterion_1()),
        (2, criterion_2()),
        (3, criterion_3()),
    ];
    let (c4, c7) = criterion_4_and_7();
    results.push((4, c4));
    results.push((5, criterion_5()));
    results.push((6, criterion_6()));
    results.push((7, c7));
    results.push((8, criterion_8()));
    results.push((9, criterion_9()));
    results.push((10, criterion_10()));

    let mut unexpected = Vec::new();
    for (id, v) in &results {
        let known = KNOWN_UNATTAINABLE.iter().find(|(k, _)| k == id);
        println!("criterion {id:>2}: {} | {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        match (v.pass, known) {
            (false, Some((_, why))) => println!("              known unattainable: {why}"),
            (false, None) => unexpected.push(*id),
            (true, _) => {}
        }
    }
    let passed = results.iter().filter(|(_, v)| v.pass).count();
    println!("{passed}/{} criteria pass in {:.0}s", results.len(), start.elapsed().as_secs_f64());
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
