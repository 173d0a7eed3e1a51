use std::collections::VecDeque;

use super::{Graph, GraphError, NodeId};

/// Hop distance from `source` to every node; `None` when unreachable.
pub fn bfs_distances(g: &Graph, source: NodeId) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.node_count()];
    let mut queue = VecDeque::new();
    dist[source] = Some(0);
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        let next = dist[v].map(|d| d + 1);
        for &u in g.neighbors(v) {
            if dist[u].is_none() {
                dist[u] = next;
                queue.push_back(u);
            }
        }
    }
    dist
}

/// Breadth-first layers around `source`: layer `i` holds the nodes at
/// distance exactly `i`, each layer sorted by id. Unreachable nodes are not
/// part of any layer.
pub fn bfs_layers(g: &Graph, source: NodeId) -> Result<Vec<Vec<NodeId>>, GraphError> {
    g.check_node(source)?;
    let dist = bfs_distances(g, source);
    let depth = dist.iter().flatten().copied().max().unwrap_or(0);
    let mut layers = vec![Vec::new(); depth + 1];
    for (v, d) in dist.iter().enumerate() {
        if let Some(d) = d {
            layers[*d].push(v);
        }
    }
    Ok(layers)
}

/// Largest shortest-path distance over all node pairs, by one BFS per source.
pub fn diameter(g: &Graph) -> Result<usize, GraphError> {
    let mut best = 0;
    for s in 0..g.node_count() {
        for (v, d) in bfs_distances(g, s).into_iter().enumerate() {
            match d {
                Some(d) => best = best.max(d),
                None => return Err(GraphError::Disconnected(v, s)),
            }
        }
    }
    Ok(best)
}
