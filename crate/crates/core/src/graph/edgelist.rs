//! Plain-text edge-list format.
//!
//! One edge per line as `i j w` (whitespace-separated, weight optional and
//! defaulting to 1.0), `#` starts a comment, and an optional header line
//! `nodes N` declares the node count. Node labels are 1-based on disk and
//! mapped to the crate's 0-based ids on read.

use crate::error::{Error, Result};
use crate::graph::Graph;
use std::fmt::Write as _;
use std::path::Path;

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut max_label = 0usize;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let first = fields.next().unwrap();
        if first == "nodes" {
            let n: usize = fields
                .next()
                .ok_or_else(|| parse_err(lineno, "missing count after 'nodes'"))?
                .parse()
                .map_err(|_| parse_err(lineno, "invalid node count"))?;
            if n == 0 {
                return Err(parse_err(lineno, "node count must be positive"));
            }
            declared = Some(n);
            continue;
        }
        let a: usize = first
            .parse()
            .map_err(|_| parse_err(lineno, "invalid node label"))?;
        let b: usize = fields
            .next()
            .ok_or_else(|| parse_err(lineno, "missing second node label"))?
            .parse()
            .map_err(|_| parse_err(lineno, "invalid node label"))?;
        let w: f64 = match fields.next() {
            Some(tok) => tok
                .parse()
                .map_err(|_| parse_err(lineno, "invalid weight"))?,
            None => 1.0,
        };
        if fields.next().is_some() {
            return Err(parse_err(lineno, "trailing fields on edge line"));
        }
        if a == 0 || b == 0 {
            return Err(parse_err(lineno, "node labels are 1-based"));
        }
        max_label = max_label.max(a).max(b);
        edges.push((a - 1, b - 1, w));
    }

    let node_count = match declared {
        Some(n) => {
            if max_label > n {
                return Err(Error::InvalidGraph(format!(
                    "edge label {max_label} exceeds declared node count {n}"
                )));
            }
            n
        }
        None => {
            if edges.is_empty() {
                return Err(Error::InvalidGraph(
                    "empty edge list with no 'nodes' header".into(),
                ));
            }
            max_label
        }
    };
    Graph::from_edges(node_count, &edges)
}

/// Canonical serialization: header, then sorted edges with 1-based labels.
/// Identical graphs serialize byte-identically.
pub fn edge_list_string(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "nodes {}", g.node_count());
    for &(a, b, w) in g.edges() {
        let _ = writeln!(out, "{} {} {}", a + 1, b + 1, w);
    }
    out
}

pub fn read_edge_list(path: &Path) -> Result<Graph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

pub fn write_edge_list(g: &Graph, path: &Path) -> Result<()> {
    std::fs::write(path, edge_list_string(g))?;
    Ok(())
}

fn parse_err(lineno: usize, message: &str) -> Error {
    Error::Parse {
        line: lineno + 1,
        message: message.into(),
    }
}
