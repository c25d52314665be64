use std::collections::BTreeMap;

use rand::Rng;

use super::Graph;

pub fn path_graph(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
}

pub fn cycle_graph(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
}

pub fn complete_graph(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid clique")
}

/// Star with `leaves` leaves around centre 0.
pub fn star_graph(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("valid star")
}

/// `width x height` grid; vertex `(x, y)` has id `y * width + x`.
pub fn grid_graph(width: usize, height: usize) -> Graph {
    let mut edges = Vec::new();
    for y in 0..height {
        for x in 0..width {
            let v = y * width + x;
            if x + 1 < width {
                edges.push((v, v + 1));
            }
            if y + 1 < height {
                edges.push((v, v + width));
            }
        }
    }
    Graph::from_edges(width * height, edges).expect("valid grid")
}

/// Sierpinski triangle graph of the given level: level 0 is a triangle and
/// level `L` glues three copies of level `L - 1` at their corners, giving
/// `3 (3^L + 1) / 2` vertices.
pub fn sierpinski_graph(level: u32) -> Graph {
    // corners (x, y), (x + s, y), (x, y + s) in axial lattice coordinates
    fn recurse(x: i64, y: i64, side: i64, out: &mut Vec<[(i64, i64); 3]>) {
        if side == 1 {
            out.push([(x, y), (x + 1, y), (x, y + 1)]);
            return;
        }
        let h = side / 2;
        recurse(x, y, h, out);
        recurse(x + h, y, h, out);
        recurse(x, y + h, h, out);
    }
    let mut triangles = Vec::new();
    recurse(0, 0, 1i64 << level, &mut triangles);
    let mut ids = BTreeMap::new();
    for t in &triangles {
        for p in t {
            ids.entry(*p).or_insert(0usize);
        }
    }
    for (i, v) in ids.values_mut().enumerate() {
        *v = i;
    }
    let edges = triangles.iter().flat_map(|t| {
        let [a, b, c] = t.map(|p| ids[&p]);
        [(a, b), (b, c), (a, c)]
    });
    let labels = ids.keys().map(|(x, y)| format!("({x},{y})")).collect();
    Graph::from_edges(ids.len(), edges.collect::<Vec<_>>())
        .and_then(|g| g.with_labels(labels))
        .expect("valid sierpinski graph")
}

/// Random connected graph: a random recursive tree plus each remaining pair
/// independently with probability `extra_edge_prob`.
pub fn random_connected_graph<R: Rng>(n: usize, extra_edge_prob: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(extra_edge_prob) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("valid random graph")
}
