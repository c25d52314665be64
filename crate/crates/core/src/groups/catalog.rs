//! Spec tokens naming the built-in groups and graph sources.

use std::fmt;

use super::models::{BaumslagSolitar, DehnGroup, FreeAbelian, FreeGroup, Heisenberg, Lamplighter};
use super::presentation::Presentation;
use super::GroupModel;
use crate::error::{Error, Result};
use crate::graphs::{load_edge_list, sierpinski_graph, Graph};

pub const VALID_SPECS: &[&str] = &[
    "zd:<d>",
    "free:<k>",
    "heis",
    "lamplighter",
    "bs:1:<n>",
    "surface:2",
    "presentation:<path>",
    "file:<path>",
    "sierpinski:<L>",
];

fn unknown(spec: &str) -> Error {
    Error::Config(format!(
        "unknown group spec `{spec}`; valid specs: {}",
        VALID_SPECS.join(", ")
    ))
}

fn number<T: std::str::FromStr>(spec: &str, text: &str) -> Result<T> {
    text.parse().map_err(|_| unknown(spec))
}

/// Instantiates a group from its spec token.
///
/// ```
/// use sepprofile::groups::catalog_group;
///
/// let z2 = catalog_group("zd:2").unwrap();
/// assert_eq!(z2.relator_bound(), Some(4));
/// assert!(catalog_group("zd:x").is_err());
/// ```
pub fn catalog_group(spec: &str) -> Result<Box<dyn GroupModel>> {
    let parts: Vec<&str> = spec.splitn(2, ':').collect();
    let model: Box<dyn GroupModel> = match parts.as_slice() {
        ["zd", d] => {
            let d: usize = number(spec, d)?;
            if d == 0 {
                return Err(unknown(spec));
            }
            Box::new(FreeAbelian::new(d))
        }
        ["free", k] => {
            let k: usize = number(spec, k)?;
            if k == 0 {
                return Err(unknown(spec));
            }
            Box::new(FreeGroup::new(k))
        }
        ["heis"] => Box::new(Heisenberg::new()),
        ["lamplighter"] => Box::new(Lamplighter::new()),
        ["bs", rest] => match rest.split_once(':') {
            Some(("1", n)) => {
                let n: u32 = number(spec, n)?;
                if n < 2 {
                    return Err(unknown(spec));
                }
                Box::new(BaumslagSolitar::new(n))
            }
            _ => return Err(unknown(spec)),
        },
        ["surface", "2"] => Box::new(DehnGroup::genus_two()),
        ["presentation", path] => {
            Box::new(DehnGroup::new(spec.to_string(), Presentation::load(path)?)?)
        }
        ["file", _] | ["sierpinski", _] => {
            return Err(Error::Config(format!(
                "`{spec}` names a graph, not a group; this operation needs a group spec"
            )))
        }
        _ => return Err(unknown(spec)),
    };
    Ok(model)
}

/// A group, or a plain graph loaded from a file or a builder.
pub enum Source {
    Group(Box<dyn GroupModel>),
    Graph { name: String, graph: Graph },
}

impl Source {
    pub fn parse(spec: &str) -> Result<Source> {
        if let Some(path) = spec.strip_prefix("file:") {
            return Ok(Source::Graph {
                name: spec.to_string(),
                graph: load_edge_list(path)?,
            });
        }
        if let Some(level) = spec.strip_prefix("sierpinski:") {
            let level: u32 = number(spec, level)?;
            if level > 12 {
                return Err(Error::resource(format!(
                    "sierpinski level {level} is too large (max 12)"
                )));
            }
            return Ok(Source::Graph {
                name: spec.to_string(),
                graph: sierpinski_graph(level),
            });
        }
        catalog_group(spec).map(Source::Group)
    }

    pub fn name(&self) -> &str {
        match self {
            Source::Group(m) => m.name(),
            Source::Graph { name, .. } => name,
        }
    }

    pub fn as_group(&self) -> Option<&dyn GroupModel> {
        match self {
            Source::Group(m) => Some(m.as_ref()),
            Source::Graph { .. } => None,
        }
    }
}

impl fmt::Debug for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Source({})", self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_bounds() {
        assert_eq!(catalog_group("heis").unwrap().relator_bound(), Some(5));
        assert_eq!(catalog_group("surface:2").unwrap().relator_bound(), Some(8));
        assert_eq!(catalog_group("free:2").unwrap().relator_bound(), None);
        assert_eq!(catalog_group("bs:1:2").unwrap().name(), "bs:1:2");
    }

    #[test]
    fn unknown_spec_lists_valid_ones() {
        let err = catalog_group("hyperbolic:7").unwrap_err().to_string();
        assert!(err.contains("zd:<d>") && err.contains("surface:2"));
        assert!(catalog_group("surface:3").is_err());
        assert!(catalog_group("bs:2:3").is_err());
    }

    #[test]
    fn graph_sources() {
        match Source::parse("sierpinski:1").unwrap() {
            Source::Graph { graph, .. } => assert_eq!(graph.vertex_count(), 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(catalog_group("sierpinski:1").is_err());
    }
}
