use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{bound_cut, profile_at, ProfilePoint};
use crate::error::{Error, Result};
use crate::groups::{BallBuilder, GroupModel};

/// Multiplier in the linear lower bound `cut(B_r) >= r / (400 M)` for
/// one-ended groups whose relators have length at most `M`.
pub const GAP_FACTOR: f64 = 400.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub r: u32,
    pub n: usize,
    pub lower: usize,
    pub upper: usize,
    pub threshold: f64,
    pub pass: bool,
    /// `lower / r`, the empirical constant the bound is compared with
    pub ratio_lower: f64,
    pub ratio_upper: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub group: String,
    pub relator_bound: usize,
    /// as documented by the catalog; not decided here
    pub one_ended: bool,
    pub rows: Vec<GapRow>,
}

impl GapReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn passed(&self) -> usize {
        self.rows.iter().filter(|r| r.pass).count()
    }
}

/// Checks `cut(B_r) >= r / (400 M)` with certified lower bounds for
/// `r = 1..=r_max`.
///
/// ```
/// use sepprofile::groups::catalog_group;
/// use sepprofile::profiles::gap_check;
///
/// let z2 = catalog_group("zd:2").unwrap();
/// let report = gap_check(z2.as_ref(), 5, 1_000, 0).unwrap();
/// assert_eq!(report.passed(), 5);
/// ```
pub fn gap_check(m: &dyn GroupModel, r_max: u32, budget_ms: i64, seed: u64) -> Result<GapReport> {
    let bound = m.relator_bound().ok_or_else(|| {
        Error::Config(format!(
            "{} has no relator length bound M; the gap check needs one",
            m.name()
        ))
    })?;
    let mut builder = BallBuilder::new(m);
    let mut balls = Vec::new();
    while builder.radius() < r_max {
        builder.extend()?;
        balls.push(builder.ball()?);
    }
    let rows = balls
        .par_iter()
        .map(|b| {
            let out = bound_cut(&b.graph, Some(&b.dist), budget_ms, seed)?;
            let r = b.radius;
            let threshold = r as f64 / (GAP_FACTOR * bound as f64);
            Ok(GapRow {
                r,
                n: b.vertex_count(),
                lower: out.lower_value(),
                upper: out.upper_value(),
                threshold,
                pass: out.lower_value() as f64 >= threshold,
                ratio_lower: out.lower_value() as f64 / r as f64,
                ratio_upper: out.upper_value() as f64 / r as f64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GapReport {
        group: m.name().to_string(),
        relator_bound: bound,
        one_ended: m.one_ended(),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaRow {
    pub n: usize,
    pub profile_lower: usize,
    pub kappa: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaComparison {
    pub group: String,
    pub rows: Vec<KappaRow>,
    /// smallest `profile / kappa` over rows with `kappa >= 1`
    pub best_constant: Option<f64>,
    /// false for virtually free groups, where no `kappa` lower bound holds
    pub applies: bool,
    pub note: String,
}

/// Pairs the profile envelope with the inverse growth function at each `n`.
pub fn kappa_compare(
    m: &dyn GroupModel,
    points: &[ProfilePoint],
    n_list: &[usize],
) -> Result<KappaComparison> {
    if n_list.contains(&0) {
        return Err(Error::Argument("kappa needs n >= 1".into()));
    }
    let largest = n_list.iter().copied().max().unwrap_or(1);
    let mut builder = BallBuilder::new(m);
    let mut table = vec![1usize];
    while *table.last().expect("non-empty") <= largest {
        builder.extend()?;
        if builder.vertex_count() == *table.last().expect("non-empty") {
            return Err(Error::Argument(format!(
                "{} is finite; kappa is unbounded",
                m.name()
            )));
        }
        table.push(builder.vertex_count());
    }
    let rows: Vec<KappaRow> = n_list
        .iter()
        .map(|&n| KappaRow {
            n,
            profile_lower: profile_at(points, n),
            kappa: (table.iter().take_while(|&&size| size <= n).count() - 1) as u32,
        })
        .collect();
    let best_constant = rows
        .iter()
        .filter(|row| row.kappa >= 1)
        .map(|row| row.profile_lower as f64 / row.kappa as f64)
        .min_by(f64::total_cmp);
    let applies = !m.virtually_free();
    let note = if applies {
        "profile is expected to dominate a multiple of kappa".to_string()
    } else {
        format!(
            "{} is virtually free: kappa grows while the profile stays bounded, and no kappa lower bound applies",
            m.name()
        )
    };
    Ok(KappaComparison {
        group: m.name().to_string(),
        rows,
        best_constant,
        applies,
        note,
    })
}
