use std::time::Instant;

use super::{half, BoundKind, CutCertificate};
use crate::error::{Error, Result};
use crate::graphs::{Graph, VertexSet};

/// Largest graph `cut_brute` accepts.
pub const BRUTE_FORCE_LIMIT: usize = 20;

fn largest_piece(adj: &[u32], alive: u32) -> u32 {
    let mut rest = alive;
    let mut best = 0;
    while rest != 0 {
        let mut comp = rest & rest.wrapping_neg();
        let mut frontier = comp;
        while frontier != 0 {
            let mut grown = 0;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                grown |= adj[v];
            }
            frontier = grown & alive & !comp;
            comp |= frontier;
        }
        best = best.max(comp.count_ones());
        rest &= !comp;
    }
    best
}

/// Exact `cut(g)` by enumerating subsets in order of size, each size in
/// lexicographic order, so the separator returned is the lexicographically
/// smallest of minimum size.
pub fn cut_brute(g: &Graph) -> Result<CutCertificate> {
    let n = g.vertex_count();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::resource(format!(
            "cut_brute handles at most {BRUTE_FORCE_LIMIT} vertices (got {n}); use cut_exact"
        )));
    }
    let start = Instant::now();
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect();
    let all: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let limit = half(n) as u32;
    let mut nodes = 0u64;
    for k in 0..=n {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            nodes += 1;
            let removed = idx.iter().fold(0u32, |m, &v| m | (1 << v));
            if largest_piece(&adj, all & !removed) <= limit {
                let mut cert =
                    CutCertificate::with_separator(g, VertexSet::new(idx), BoundKind::Exact);
                cert.stats.nodes = nodes;
                cert.stats.elapsed_ms = start.elapsed().as_millis() as u64;
                return Ok(cert);
            }
            // next combination in lexicographic order
            let mut i = k;
            while i > 0 && idx[i - 1] == n - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    unreachable!("removing every vertex is always a cut set")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{complete_graph, cycle_graph, grid_graph, path_graph, star_graph};

    #[test]
    fn small_families() {
        assert_eq!(cut_brute(&path_graph(7)).unwrap().separator, Some(VertexSet::singleton(3)));
        assert_eq!(cut_brute(&cycle_graph(6)).unwrap().value, 2);
        assert_eq!(cut_brute(&complete_graph(6)).unwrap().value, 3);
        assert_eq!(cut_brute(&star_graph(5)).unwrap().value, 1);
        assert_eq!(cut_brute(&Graph::empty(0)).unwrap().value, 0);
        assert_eq!(cut_brute(&Graph::empty(1)).unwrap().value, 1);
        // disconnected small pieces need nothing removed
        assert_eq!(cut_brute(&Graph::empty(4)).unwrap().value, 0);
    }

    #[test]
    fn grid_and_limit() {
        assert_eq!(cut_brute(&grid_graph(3, 3)).unwrap().value, 3);
        assert!(matches!(
            cut_brute(&path_graph(21)),
            Err(Error::Resource { .. })
        ));
    }
}
