//! Plain-text edge lists: one `u v` pair of 0-based ids per line, `#` starts
//! a comment line, node count is one more than the largest id.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use super::{Graph, GraphError, NodeId};

/// Serializes `g` with the smaller id first on each line, lines sorted.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn write_edge_list(g: &Graph, path: &Path) -> Result<(), GraphError> {
    std::fs::write(path, to_edge_list(g)).map_err(|e| GraphError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

/// Parses an edge list. Duplicate edges (in either orientation), self-loops
/// and disconnected graphs are rejected.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut max_id: Option<NodeId> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let mut next_id = || -> Result<NodeId, GraphError> {
            let tok = fields.next().ok_or_else(|| GraphError::Parse {
                line: line_no,
                reason: "expected two node ids".into(),
            })?;
            tok.parse().map_err(|_| GraphError::Parse {
                line: line_no,
                reason: format!("`{tok}` is not a node id"),
            })
        };
        let u = next_id()?;
        let v = next_id()?;
        if fields.next().is_some() {
            return Err(GraphError::Parse {
                line: line_no,
                reason: "trailing fields".into(),
            });
        }
        if u == v {
            return Err(GraphError::Parse {
                line: line_no,
                reason: format!("self-loop at {u}"),
            });
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(GraphError::Parse {
                line: line_no,
                reason: format!("duplicate edge {} {}", u.min(v), u.max(v)),
            });
        }
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((u, v));
    }
    let n = max_id.map(|m| m + 1).ok_or(GraphError::Empty)?;
    let g = Graph::from_edges(n, &edges)?;
    g.ensure_connected()?;
    Ok(g)
}

pub fn read_edge_list(path: &Path) -> Result<Graph, GraphError> {
    let text = std::fs::read_to_string(path).map_err(|e| GraphError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    parse_edge_list(&text)
}
