//! Text formats for digraphs: edge lists, DOT and JSON.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{Digraph, DigraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("unsupported format {0:?} (expected edgelist, dot or json)")]
    UnsupportedFormat(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Digraph(#[from] DigraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    EdgeList,
    Dot,
    Json,
}

impl FromStr for ExportFormat {
    type Err = FormatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edgelist" | "edges" => Ok(ExportFormat::EdgeList),
            "dot" => Ok(ExportFormat::Dot),
            "json" => Ok(ExportFormat::Json),
            other => Err(FormatError::UnsupportedFormat(other.to_string())),
        }
    }
}

/// `{"n": .., "arcs": [[u, v], ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigraphJson {
    pub n: usize,
    pub arcs: Vec<[usize; 2]>,
}

impl From<&Digraph> for DigraphJson {
    fn from(d: &Digraph) -> Self {
        DigraphJson {
            n: d.n_vertices(),
            arcs: d.arcs().map(|(u, v)| [u, v]).collect(),
        }
    }
}

pub fn export(d: &Digraph, format: ExportFormat) -> String {
    match format {
        ExportFormat::EdgeList => to_edgelist(d, &[]),
        ExportFormat::Dot => to_dot(d, "G"),
        ExportFormat::Json => {
            let mut s = serde_json::to_string(&DigraphJson::from(d)).expect("plain data serializes");
            s.push('\n');
            s
        }
    }
}

/// Edge-list text: optional `#` comments, `n <count>`, then sorted `u v` lines.
pub fn to_edgelist(d: &Digraph, comments: &[&str]) -> String {
    let mut s = String::new();
    for c in comments {
        let _ = writeln!(s, "# {c}");
    }
    let _ = writeln!(s, "n {}", d.n_vertices());
    for (u, v) in d.arcs() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

pub fn to_dot(d: &Digraph, name: &str) -> String {
    let mut s = format!("digraph {name} {{\n");
    for v in 0..d.n_vertices() {
        let _ = writeln!(s, "  {v};");
    }
    for (u, v) in d.arcs() {
        let _ = writeln!(s, "  {u} -> {v};");
    }
    s.push_str("}\n");
    s
}

pub fn parse_edgelist(text: &str) -> Result<Digraph, FormatError> {
    let mut n = None;
    let mut arcs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = idx + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: &str| FormatError::Parse {
            line: lineno,
            message: message.to_string(),
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        match (n, fields.as_slice()) {
            (None, ["n", count]) => n = Some(count.parse::<usize>().map_err(|_| err("bad vertex count"))?),
            (None, _) => return Err(err("expected header `n <count>`")),
            (Some(_), [u, v]) => {
                let u = u.parse::<usize>().map_err(|_| err("bad vertex"))?;
                let v = v.parse::<usize>().map_err(|_| err("bad vertex"))?;
                arcs.push((u, v));
            }
            (Some(_), _) => return Err(err("expected `u v`")),
        }
    }
    let n = n.ok_or(FormatError::Parse {
        line: 0,
        message: "missing header `n <count>`".into(),
    })?;
    Ok(Digraph::from_arcs(n, arcs)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_cycle_edgelist() {
        let d = Digraph::from_arcs(3, [(2, 0), (0, 1), (1, 2)]).unwrap();
        assert_eq!(export(&d, ExportFormat::EdgeList), "n 3\n0 1\n1 2\n2 0\n");
        assert_eq!(parse_edgelist("# c\nn 3\n0 1\n\n1 2\n2 0\n").unwrap(), d);
    }

    #[test]
    fn empty_digraph_is_header_only() {
        assert_eq!(export(&Digraph::empty(2), ExportFormat::EdgeList), "n 2\n");
    }

    #[test]
    fn dot_and_json() {
        let d = Digraph::from_arcs(2, [(0, 1)]).unwrap();
        assert!(export(&d, ExportFormat::Dot).contains("0 -> 1;"));
        assert_eq!(export(&d, ExportFormat::Json), "{\"n\":2,\"arcs\":[[0,1]]}\n");
        assert!("png".parse::<ExportFormat>().is_err());
    }

    #[test]
    fn parse_errors() {
        assert!(parse_edgelist("0 1\n").is_err());
        assert!(parse_edgelist("n 2\n0 5\n").is_err());
        assert!(parse_edgelist("n 2\n0 1 1\n").is_err());
        assert!(parse_edgelist("").is_err());
    }
}
