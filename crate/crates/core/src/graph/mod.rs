//! Undirected simple graphs with port-labelled adjacency.
//!
//! Every node only knows its incident links by local port number: the port of
//! a neighbor is its position in the node's adjacency list. The graph also
//! stores, for every `(v, port)`, the port under which `v` appears at the
//! other end, so a receiver can identify the incoming link of a message.

mod edgelist;
mod generate;
mod load;
mod metrics;

use std::collections::HashMap;

use thiserror::Error;

pub use edgelist::{parse_edge_list, read_edge_list, to_edge_list, write_edge_list};
pub use generate::{generate, GraphSpec};
pub use load::{load_profile, LoadProfile};
pub use metrics::{bfs_distances, bfs_layers, diameter};

/// Node identifier, `0..n`.
pub type NodeId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("self-loop at node {0}")]
    SelfLoop(NodeId),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(NodeId, NodeId),
    #[error("adjacency is not symmetric: {0} lists {1} but not vice versa")]
    Asymmetric(NodeId, NodeId),
    #[error("node id {id} out of range for a graph with {n} nodes")]
    NodeOutOfRange { id: NodeId, n: usize },
    #[error("graph is disconnected: node {0} is unreachable from node {1}")]
    Disconnected(NodeId, NodeId),
    #[error("edge list line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("graph has no nodes")]
    Empty,
    #[error("i/o error on {path}: {reason}")]
    Io { path: String, reason: String },
}

impl GraphError {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        GraphError::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    // reverse_port[v][p] = port of v in adjacency[adjacency[v][p]]
    reverse_port: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from per-node adjacency lists, validating symmetry and
    /// simplicity. Connectivity is not required here; see [`Graph::ensure_connected`].
    pub fn from_adjacency(adjacency: Vec<Vec<NodeId>>) -> Result<Self, GraphError> {
        let n = adjacency.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut index: Vec<HashMap<NodeId, usize>> = Vec::with_capacity(n);
        for (v, nbrs) in adjacency.iter().enumerate() {
            let mut ports = HashMap::with_capacity(nbrs.len());
            for (p, &u) in nbrs.iter().enumerate() {
                if u >= n {
                    return Err(GraphError::NodeOutOfRange { id: u, n });
                }
                if u == v {
                    return Err(GraphError::SelfLoop(v));
                }
                if ports.insert(u, p).is_some() {
                    return Err(GraphError::DuplicateEdge(v.min(u), v.max(u)));
                }
            }
            index.push(ports);
        }
        let mut reverse_port = Vec::with_capacity(n);
        for (v, nbrs) in adjacency.iter().enumerate() {
            let mut rev = Vec::with_capacity(nbrs.len());
            for &u in nbrs {
                match index[u].get(&v) {
                    Some(&p) => rev.push(p),
                    None => return Err(GraphError::Asymmetric(v, u)),
                }
            }
            reverse_port.push(rev);
        }
        Ok(Graph {
            adjacency,
            reverse_port,
        })
    }

    /// Builds a graph on `n` nodes from an undirected edge list. Each node's
    /// ports follow the order in which its edges appear.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self, GraphError> {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::NodeOutOfRange { id: u.max(v), n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        Self::from_adjacency(adjacency)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    /// Neighbor reached through local port `port` of `v`.
    pub fn neighbor_at(&self, v: NodeId, port: usize) -> NodeId {
        self.adjacency[v][port]
    }

    /// Port under which `v` is seen by the neighbor behind `v`'s port `port`.
    pub fn reverse_port(&self, v: NodeId, port: usize) -> usize {
        self.reverse_port[v][port]
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Common degree when the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0);
        self.adjacency.iter().all(|a| a.len() == d).then_some(d)
    }

    /// Sorted edge list with the smaller endpoint first.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut edges: Vec<_> = self
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(v, nbrs)| nbrs.iter().filter(move |&&u| v < u).map(move |&u| (v, u)))
            .collect();
        edges.sort_unstable();
        edges
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v < self.node_count()
    }

    pub fn check_node(&self, v: NodeId) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange {
                id: v,
                n: self.node_count(),
            })
        }
    }

    pub fn is_connected(&self) -> bool {
        self.ensure_connected().is_ok()
    }

    pub fn ensure_connected(&self) -> Result<(), GraphError> {
        let dist = bfs_distances(self, 0);
        match dist.iter().position(Option::is_none) {
            None => Ok(()),
            Some(v) => Err(GraphError::Disconnected(v, 0)),
        }
    }
}
