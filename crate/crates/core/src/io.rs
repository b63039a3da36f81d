//! Edge-list text format and DOT export.
//!
//! The edge-list format is a header line `n m` followed by exactly `m` lines
//! `u v`. Values are separated by single spaces; the trailing newline is
//! optional.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed header: {0:?}")]
    MalformedHeader(String),
    #[error("line {line}: malformed edge {text:?}")]
    MalformedEdge { line: usize, text: String },
    #[error("line {line}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("header declares {declared} edges but {found} were given")]
    EdgeCountMismatch { declared: usize, found: usize },
}

fn parse_pair(line: &str) -> Option<(usize, usize)> {
    let (a, b) = line.split_once(' ')?;
    Some((a.parse().ok()?, b.parse().ok()?))
}

pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let text = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l));
    let header = lines.next().unwrap_or("");
    let (n, m) = parse_pair(header).ok_or_else(|| ParseError::MalformedHeader(header.to_string()))?;

    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::with_capacity(m);
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        if edges.len() == m {
            return Err(ParseError::EdgeCountMismatch { declared: m, found: m + 1 });
        }
        let (u, v) = parse_pair(line)
            .ok_or_else(|| ParseError::MalformedEdge { line: line_no, text: line.to_string() })?;
        if let Some(vertex) = [u, v].into_iter().find(|&x| x >= n) {
            return Err(ParseError::VertexOutOfRange { line: line_no, vertex, n });
        }
        if u == v {
            return Err(ParseError::SelfLoop { line: line_no, vertex: u });
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            return Err(ParseError::DuplicateEdge { line: line_no, u: key.0, v: key.1 });
        }
        edges.push(key);
    }
    if edges.len() != m {
        return Err(ParseError::EdgeCountMismatch { declared: m, found: edges.len() });
    }
    Ok(Graph::from_edges(n, edges).expect("edges validated while parsing"))
}

/// Canonical edge list: edges in sorted `(min, max)` order, trailing newline.
pub fn serialize_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.order(), g.size());
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn to_dot(g: &Graph) -> String {
    let mut out = String::from("graph g {\n  node [label=\"\"];\n");
    for v in 0..g.order() {
        writeln!(out, "  {v};").unwrap();
    }
    for &(u, v) in g.edges() {
        writeln!(out, "  {u} -- {v};").unwrap();
    }
    out.push_str("}\n");
    out
}
