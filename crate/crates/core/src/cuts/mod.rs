//! Balanced vertex separators.
//!
//! A cut set of a finite graph `Γ` is a vertex set `S` such that every
//! connected component of `Γ - S` has at most `⌊|Γ|/2⌋` vertices; `cut(Γ)` is
//! the least size of a cut set. Removing more vertices never hurts, so cut
//! sets are closed under supersets. The singleton graph needs its only vertex
//! removed, so its cut is 1.
//!
//! ```
//! use sepprofile::cuts::{cut_brute, is_cut_set};
//! use sepprofile::graphs::{cycle_graph, VertexSet};
//!
//! let c6 = cycle_graph(6);
//! assert!(is_cut_set(&c6, &VertexSet::new(vec![0, 3])));
//! assert_eq!(cut_brute(&c6).unwrap().value, 2);
//! ```

mod brute;
mod exact;
mod flow;
mod heuristic;
mod treewidth;

pub use brute::{cut_brute, BRUTE_FORCE_LIMIT};
pub use exact::{cut_exact, cut_exact_with, ExactOptions, WORK_PER_MS};
pub use flow::{congestion_lower_bound, min_vertex_cut, Congestion, LowerBoundOptions};
pub use heuristic::{cut_heuristic, cut_heuristic_layered, refine_separator};
pub use treewidth::{elimination_width, min_fill_order, treewidth_upper};

use serde::{Deserialize, Serialize};

use crate::graphs::{component_labels, Graph, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Exact,
    Upper,
    Lower,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::Exact => "exact",
            BoundKind::Upper => "upper",
            BoundKind::Lower => "lower",
        }
    }
}

/// Search effort behind a certificate. `work` counts adjacency-list scans and
/// is what the exact solver's budget is measured in.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub work: u64,
    pub elapsed_ms: u64,
}

/// A bound on `cut(Γ)`. Exact and upper certificates carry a separator that
/// passes [`is_cut_set`]; lower certificates carry none.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutCertificate {
    pub separator: Option<VertexSet>,
    pub largest_component_size: Option<usize>,
    pub bound_kind: BoundKind,
    pub value: usize,
    pub stats: SearchStats,
}

impl CutCertificate {
    pub(crate) fn with_separator(g: &Graph, separator: VertexSet, kind: BoundKind) -> Self {
        let largest = largest_component_after(g, &separator);
        CutCertificate {
            value: separator.len(),
            separator: Some(separator),
            largest_component_size: Some(largest),
            bound_kind: kind,
            stats: SearchStats::default(),
        }
    }

    pub(crate) fn lower(value: usize) -> Self {
        CutCertificate {
            separator: None,
            largest_component_size: None,
            bound_kind: BoundKind::Lower,
            value,
            stats: SearchStats::default(),
        }
    }

    /// Re-checks the certificate against `g`: separators must be valid cut
    /// sets of the stated size. Lower bounds cannot be re-checked cheaply and
    /// only have their shape validated.
    pub fn verify(&self, g: &Graph) -> bool {
        match (&self.bound_kind, &self.separator) {
            (BoundKind::Lower, None) => true,
            (BoundKind::Lower, Some(_)) => false,
            (_, Some(s)) => {
                s.check_within(g.vertex_count()).is_ok()
                    && s.len() == self.value
                    && is_cut_set(g, s)
                    && self.largest_component_size == Some(largest_component_after(g, s))
            }
            (_, None) => false,
        }
    }
}

/// Outcome of the anytime exact solver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CutOutcome {
    Exact(CutCertificate),
    Bracketed {
        lower: CutCertificate,
        upper: CutCertificate,
    },
}

impl CutOutcome {
    pub fn lower_value(&self) -> usize {
        match self {
            CutOutcome::Exact(c) => c.value,
            CutOutcome::Bracketed { lower, .. } => lower.value,
        }
    }

    pub fn upper_value(&self) -> usize {
        match self {
            CutOutcome::Exact(c) => c.value,
            CutOutcome::Bracketed { upper, .. } => upper.value,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CutOutcome::Exact(_))
    }

    /// The certificate carrying a separator.
    pub fn upper(&self) -> &CutCertificate {
        match self {
            CutOutcome::Exact(c) => c,
            CutOutcome::Bracketed { upper, .. } => upper,
        }
    }

    pub fn stats(&self) -> &SearchStats {
        &self.upper().stats
    }
}

/// Largest allowed component size `⌊n/2⌋`.
#[inline]
pub fn half(n: usize) -> usize {
    n / 2
}

/// Size of the largest component of `g - s` (0 when nothing survives).
pub fn largest_component_after(g: &Graph, s: &VertexSet) -> usize {
    component_labels(g, &s.mask(g.vertex_count())).largest()
}

/// Whether every component of `g - s` has at most `⌊|g|/2⌋` vertices.
pub fn is_cut_set(g: &Graph, s: &VertexSet) -> bool {
    largest_component_after(g, s) <= half(g.vertex_count())
}

/// Same check on a removal mask, used by the solvers.
pub(crate) fn is_cut_mask(g: &Graph, removed: &[bool]) -> bool {
    component_labels(g, removed).largest() <= half(g.vertex_count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{complete_graph, cycle_graph, path_graph};

    #[test]
    fn verifier_examples() {
        assert!(!is_cut_set(&path_graph(2), &VertexSet::default()));
        assert!(is_cut_set(&complete_graph(5), &VertexSet::new(vec![0, 2, 4])));
        assert!(is_cut_set(&cycle_graph(6), &VertexSet::new(vec![1, 4])));
        assert!(!is_cut_set(&cycle_graph(6), &VertexSet::new(vec![0, 1])));
    }

    #[test]
    fn singleton_needs_its_vertex() {
        let g = Graph::empty(1);
        assert!(!is_cut_set(&g, &VertexSet::default()));
        assert!(is_cut_set(&g, &VertexSet::singleton(0)));
    }

    #[test]
    fn certificate_verification() {
        let g = cycle_graph(6);
        let c = CutCertificate::with_separator(&g, VertexSet::new(vec![0, 3]), BoundKind::Exact);
        assert!(c.verify(&g));
        let mut bad = c.clone();
        bad.separator = Some(VertexSet::new(vec![0, 1]));
        assert!(!bad.verify(&g));
        assert!(CutCertificate::lower(2).verify(&g));
    }
}
