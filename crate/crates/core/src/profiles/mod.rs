//! Empirical separation profiles.
//!
//! `sep(n)` is the largest cut over all subgraphs with at most `n` vertices.
//! That maximum is out of reach, so a profile here is the running maximum of
//! certified lower bounds over a family of candidate subgraphs: balls,
//! thickened spheres and randomly grown connected sets. The result is a lower
//! bound envelope for `sep`, never a claimed exact value.

mod candidates;
mod gap;

pub use candidates::{profile_candidates, Candidate, Strategy};
pub use gap::{gap_check, kappa_compare, GapReport, GapRow, KappaComparison, KappaRow};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cuts::{cut_brute, cut_exact_with, CutOutcome, ExactOptions, BRUTE_FORCE_LIMIT};
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::groups::{Source, DEFAULT_VERTEX_BUDGET};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub n: usize,
    pub best_cut_lower: usize,
    pub best_cut_upper: usize,
    /// descriptor of the candidate that holds the maximum, e.g. `ball r=3`
    pub witness_candidate: String,
    pub witness_vertices: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub range: [usize; 2],
    pub points_used: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateReport {
    pub candidate: Candidate,
    pub outcome: CutOutcome,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Profile {
    pub points: Vec<ProfilePoint>,
    pub candidates: Vec<CandidateReport>,
    /// Set when the host ball hit its vertex budget before covering `n_max`.
    pub truncated: Option<String>,
}

#[derive(Clone, Debug)]
pub struct ProfileOptions {
    pub n_max: usize,
    pub strategies: Vec<Strategy>,
    /// per-candidate budget handed to the exact solver
    pub budget_ms: i64,
    pub seed: u64,
    /// cap on the host ball; hitting it truncates the profile
    pub vertex_budget: usize,
}

impl ProfileOptions {
    pub fn new(n_max: usize) -> Self {
        ProfileOptions {
            n_max,
            strategies: vec![Strategy::Balls],
            budget_ms: 2_000,
            seed: 0,
            vertex_budget: DEFAULT_VERTEX_BUDGET,
        }
    }
}

/// Cut bounds for one graph: brute force when it is tiny, otherwise the
/// anytime solver. `layers` are BFS distances from a centre, if any.
pub fn bound_cut(g: &Graph, layers: Option<&[u32]>, budget_ms: i64, seed: u64) -> Result<CutOutcome> {
    if g.vertex_count() <= BRUTE_FORCE_LIMIT {
        return Ok(CutOutcome::Exact(cut_brute(g)?));
    }
    let opts = ExactOptions {
        seed,
        layers,
        ..ExactOptions::new(budget_ms)
    };
    cut_exact_with(g, &opts)
}

/// Lower-bound separation profile of `source` over the chosen candidates.
///
/// ```
/// use sepprofile::groups::Source;
/// use sepprofile::profiles::{sep_profile, ProfileOptions};
///
/// let free = Source::parse("free:2").unwrap();
/// let profile = sep_profile(&free, &ProfileOptions::new(100)).unwrap();
/// assert!(profile.points.iter().all(|p| p.best_cut_lower == 1 && p.best_cut_upper == 1));
/// ```
pub fn sep_profile(source: &Source, opts: &ProfileOptions) -> Result<Profile> {
    if opts.strategies.is_empty() {
        return Err(Error::Argument("no candidate strategy selected".into()));
    }
    if opts.budget_ms <= 0 {
        return Err(Error::Argument(format!(
            "budget_ms must be positive (got {})",
            opts.budget_ms
        )));
    }
    let (built, truncated) = profile_candidates(source, opts)?;
    let reports = built
        .par_iter()
        .map(|(candidate, g, layers)| {
            let outcome = bound_cut(g, layers.as_deref(), opts.budget_ms, opts.seed)?;
            Ok(CandidateReport {
                candidate: candidate.clone(),
                outcome,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Profile {
        points: envelope(&reports),
        candidates: reports,
        truncated,
    })
}

/// Running maximum of lower bounds, one point per distinct candidate size.
/// Ties keep the earliest candidate in evaluation order.
pub fn envelope(reports: &[CandidateReport]) -> Vec<ProfilePoint> {
    let mut order: Vec<usize> = (0..reports.len()).collect();
    order.sort_by_key(|&i| (reports[i].candidate.vertices, i));
    let mut points: Vec<ProfilePoint> = Vec::new();
    let mut best: Option<usize> = None;
    for i in order {
        let r = &reports[i];
        if best.is_none_or(|b| r.outcome.lower_value() > reports[b].outcome.lower_value()) {
            best = Some(i);
        }
        let b = &reports[best.expect("set above")];
        let point = ProfilePoint {
            n: r.candidate.vertices,
            best_cut_lower: b.outcome.lower_value(),
            best_cut_upper: b.outcome.upper_value(),
            witness_candidate: b.candidate.descriptor(),
            witness_vertices: b.candidate.vertices,
        };
        match points.last_mut() {
            Some(last) if last.n == point.n => *last = point,
            _ => points.push(point),
        }
    }
    points
}

/// Least-squares fit of `ln(best_cut_lower)` against `ln(n)` over the points
/// with `n >= n_min` and a positive value.
///
/// ```
/// use sepprofile::profiles::{fit_exponent, ProfilePoint};
///
/// let points: Vec<ProfilePoint> = [4usize, 16, 64, 256]
///     .iter()
///     .map(|&n| ProfilePoint {
///         n,
///         best_cut_lower: (n as f64).sqrt() as usize,
///         best_cut_upper: (n as f64).sqrt() as usize,
///         witness_candidate: String::new(),
///         witness_vertices: n,
///     })
///     .collect();
/// let fit = fit_exponent(&points, 1).unwrap();
/// assert!((fit.slope - 0.5).abs() < 1e-9);
/// ```
pub fn fit_exponent(points: &[ProfilePoint], n_min: usize) -> Result<FitReport> {
    let used: Vec<(f64, f64, usize)> = points
        .iter()
        .filter(|p| p.n >= n_min && p.best_cut_lower >= 1)
        .map(|p| ((p.n as f64).ln(), (p.best_cut_lower as f64).ln(), p.n))
        .collect();
    if used.len() < 3 {
        return Err(Error::Argument(format!(
            "fit needs at least 3 points with n >= {n_min} and value >= 1 (have {})",
            used.len()
        )));
    }
    let k = used.len() as f64;
    let mx = used.iter().map(|p| p.0).sum::<f64>() / k;
    let my = used.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = used.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = used.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = used.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Argument("fit needs at least two distinct sizes".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual: f64 = used
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - residual / syy };
    Ok(FitReport {
        slope,
        intercept,
        r_squared,
        range: [
            used.iter().map(|p| p.2).min().expect("non-empty"),
            used.iter().map(|p| p.2).max().expect("non-empty"),
        ],
        points_used: used.len(),
    })
}

/// Profile value at `n`: the envelope at the largest candidate size `<= n`
/// (0 below the smallest candidate).
pub fn profile_at(points: &[ProfilePoint], n: usize) -> usize {
    points
        .iter()
        .take_while(|p| p.n <= n)
        .last()
        .map_or(0, |p| p.best_cut_lower)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(n: usize, v: usize) -> ProfilePoint {
        ProfilePoint {
            n,
            best_cut_lower: v,
            best_cut_upper: v,
            witness_candidate: String::new(),
            witness_vertices: n,
        }
    }

    #[test]
    fn constant_fit() {
        let pts: Vec<_> = [5, 13, 25, 41].iter().map(|&n| point(n, 1)).collect();
        let fit = fit_exponent(&pts, 1).unwrap();
        assert!(fit.slope.abs() < 1e-9);
        assert_eq!(fit.range, [5, 41]);
    }

    #[test]
    fn fit_needs_three_points() {
        let pts = vec![point(4, 2), point(9, 3), point(16, 0)];
        assert!(matches!(fit_exponent(&pts, 1), Err(Error::Argument(_))));
        assert!(matches!(fit_exponent(&pts, 5), Err(Error::Argument(_))));
    }

    #[test]
    fn lattice_line_is_flat() {
        let src = Source::parse("zd:1").unwrap();
        let p = sep_profile(&src, &ProfileOptions::new(50)).unwrap();
        assert_eq!(p.points.len(), 25);
        assert!(p.points.iter().all(|q| q.best_cut_lower == 1 && q.best_cut_upper == 1));
    }

    #[test]
    fn plane_profile_grows() {
        let src = Source::parse("zd:2").unwrap();
        let p = sep_profile(&src, &ProfileOptions::new(200)).unwrap();
        let values: Vec<usize> = p.points.iter().map(|q| q.best_cut_lower).collect();
        // balls of radius 0..=7 are solved exactly
        assert_eq!(values[..8], [1, 1, 3, 3, 5, 5, 7, 7]);
        assert!(p.points[..8].iter().all(|q| q.best_cut_lower == q.best_cut_upper));
        assert!(values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_empty_strategy_set() {
        let src = Source::parse("zd:2").unwrap();
        let opts = ProfileOptions {
            strategies: vec![],
            ..ProfileOptions::new(20)
        };
        assert!(matches!(sep_profile(&src, &opts), Err(Error::Argument(_))));
    }

    #[test]
    fn envelope_is_running_max() {
        let src = Source::parse("zd:2").unwrap();
        let opts = ProfileOptions {
            strategies: vec![Strategy::Balls, Strategy::SpheresThickened, Strategy::RandomConnected],
            ..ProfileOptions::new(120)
        };
        let p = sep_profile(&src, &opts).unwrap();
        for w in p.points.windows(2) {
            assert!(w[0].n < w[1].n);
            assert!(w[0].best_cut_lower <= w[1].best_cut_lower);
        }
        for q in &p.points {
            assert!(q.best_cut_lower <= q.best_cut_upper);
            assert!(q.witness_vertices <= q.n);
        }
    }
}
