//! Finite-scale witnesses of non-hyperbolicity.
//!
//! A graph is hyperbolic exactly when its undistorted cycles have bounded
//! length, where "undistorted" means the arc distance `d_α` along the cycle is
//! at most `K` times the ambient distance for every pair of cycle vertices.
//! This module searches Cayley balls for long such cycles, scans geodesic
//! bigons for fatness, and tests the bottleneck property of quasi-trees.
//!
//! Distances inside a ball can exceed true Cayley distances near its
//! boundary. A geodesic between two points of `B_ρ` at distance `d` stays in
//! `B_{ρ + ⌈d/2⌉}`, so every metric check here runs in a ball padded by half
//! the relevant scale and refuses when the padding is missing.

mod bigons;
mod witness;

pub use bigons::{
    bigon_fatness_scan, bottleneck_check, scan_ball, BigonReport, BottleneckReport, Violation,
};
pub use witness::{find_distorted_cycle, verify_witness, WitnessOptions, WitnessSearch};

pub use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{bfs_from, Graph, VertexId, UNREACHABLE};

/// Default bi-Lipschitz constant for witnesses.
pub const DEFAULT_K: u64 = 18;

/// A closed embedded cycle of a Cayley ball with its measured distortion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleWitness {
    pub group: String,
    /// vertex ids in the ball of radius `ambient_radius_used`
    pub cycle: Vec<VertexId>,
    /// element keys of the cycle vertices, for re-checking in a fresh ball
    pub keys: Vec<String>,
    pub length: usize,
    pub distortion: Ratio<u64>,
    pub ambient_radius_used: u32,
    /// `pattern` for commutator squares, `bigon` for quadrilaterals
    pub phase: String,
}

/// Centre distances and radius of the ball a cycle lives in.
#[derive(Clone, Copy, Debug)]
pub struct Ambient<'a> {
    pub dist: &'a [u32],
    pub radius: u32,
}

/// Radius a ball needs so that distances between the cycle's vertices are
/// true distances.
pub fn required_radius(dist: &[u32], cycle: &[VertexId]) -> u32 {
    let reach = cycle.iter().map(|&v| dist[v]).max().unwrap_or(0);
    reach + (cycle.len() as u32).div_ceil(2)
}

fn check_cycle(g: &Graph, cycle: &[VertexId]) -> Result<()> {
    let n = g.vertex_count();
    if cycle.len() < 3 {
        return Err(Error::Argument(format!(
            "a cycle needs at least 3 vertices (got {})",
            cycle.len()
        )));
    }
    let mut seen = vec![false; n];
    for (i, &v) in cycle.iter().enumerate() {
        if v >= n {
            return Err(Error::Argument(format!("vertex {v} out of range (n = {n})")));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::Argument(format!("vertex {v} repeats; cycle is not embedded")));
        }
        let w = cycle[(i + 1) % cycle.len()];
        if !g.has_edge(v, w) {
            return Err(Error::Argument(format!("{v} and {w} are consecutive but not adjacent")));
        }
    }
    Ok(())
}

/// Largest ratio `d_α(x, y) / d_X(x, y)` over pairs of cycle vertices, with
/// `d_α` the shorter arc. With an ambient ball the cycle must sit at least
/// `⌈length / 2⌉` inside it.
///
/// ```
/// use num_rational::Ratio;
/// use sepprofile::graphs::cycle_graph;
/// use sepprofile::hyperbolicity::cycle_distortion;
///
/// let c = cycle_graph(9);
/// let all: Vec<usize> = (0..9).collect();
/// assert_eq!(cycle_distortion(&c, &all, None).unwrap(), Ratio::from_integer(1));
/// ```
pub fn cycle_distortion(g: &Graph, cycle: &[VertexId], ambient: Option<Ambient<'_>>) -> Result<Ratio<u64>> {
    check_cycle(g, cycle)?;
    if let Some(a) = ambient {
        let need = required_radius(a.dist, cycle);
        if need > a.radius {
            return Err(Error::resource(format!(
                "cycle of length {} reaches too close to the ball boundary: needs radius {need}, ball has {}",
                cycle.len(),
                a.radius
            )));
        }
    }
    let len = cycle.len();
    let half = (len / 2) as u32;
    let worst = (0..len)
        .into_par_iter()
        .map(|i| {
            let d = bfs_from(g, &[cycle[i]], half);
            let mut worst = Ratio::from_integer(1u64);
            for (j, &w) in cycle.iter().enumerate().skip(i + 1) {
                let gap = j - i;
                let arc = gap.min(len - gap) as u64;
                // d_X <= d_α, so the truncated search always reaches w
                debug_assert_ne!(d[w], UNREACHABLE);
                let r = Ratio::new(arc, u64::from(d[w]));
                if r > worst {
                    worst = r;
                }
            }
            worst
        })
        .max()
        .unwrap_or(Ratio::from_integer(1));
    Ok(worst)
}
