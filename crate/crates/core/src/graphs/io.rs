//! Edge-list text format.
//!
//! One edge per line as two non-negative decimal integers separated by
//! whitespace; `#` starts a comment. Vertex ids need not be contiguous and
//! are remapped to `0..n` in ascending order of the original id. Duplicate
//! edges are merged, self-loops are rejected.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use super::Graph;
use crate::error::{Error, Result};

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut raw = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected two vertex ids, found {}", fields.len()),
            });
        }
        let parse = |s: &str| {
            s.parse::<u64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("`{s}` is not a non-negative integer"),
            })
        };
        let (u, v) = (parse(fields[0])?, parse(fields[1])?);
        if u == v {
            return Err(Error::Parse {
                line: line_no,
                message: format!("self-loop at vertex {u}"),
            });
        }
        raw.push((u, v));
    }
    if raw.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "edge list contains no edges".into(),
        });
    }
    let ids: Vec<u64> = raw
        .iter()
        .flat_map(|&(u, v)| [u, v])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index = |x: u64| ids.binary_search(&x).expect("id collected above");
    Graph::from_edges(ids.len(), raw.iter().map(|&(u, v)| (index(u), index(v))))
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

/// Canonical text form: a comment header, then `u v` with `u < v` in
/// lexicographic order. Isolated vertices are not representable and are
/// dropped on reload.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!(
        "# vertices {} edges {}\n",
        g.vertex_count(),
        g.edge_count()
    );
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").expect("writing to a String");
    }
    out
}

pub fn save_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_edge_list(g))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::grid_graph;

    #[test]
    fn two_lines_make_a_path() {
        let g = parse_edge_list("0 1\n1 2\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
    }

    #[test]
    fn sparse_ids_are_remapped() {
        let g = parse_edge_list("10 30 # comment\n\n30 20\n20 10\n10 30\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn comments_only_is_an_error() {
        assert!(matches!(
            parse_edge_list("# nothing\n   # here\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_edge_list("0 1\n2 2\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse_edge_list("0 1\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse_edge_list("0 1 2\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn save_load_round_trip() {
        let g = grid_graph(4, 3);
        let back = parse_edge_list(&write_edge_list(&g)).unwrap();
        assert_eq!(back, g);
    }
}
