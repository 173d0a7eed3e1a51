use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::{read_edge_list, Graph, GraphError, NodeId};
use crate::tape::SplitMix64;

const MAX_REGULAR_ATTEMPTS: usize = 10_000;

/// Recipe for a graph. Every recipe is deterministic; `RandomRegular` is
/// keyed by its seed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GraphSpec {
    Complete {
        n: usize,
    },
    Path {
        n: usize,
    },
    /// One center (node 0) joined to `delta` leaves.
    Star {
        delta: usize,
    },
    /// `d` stars of `delta` leaves whose centers form a path. Centers are
    /// nodes `0..d` in path order; the leaves of center `c` are
    /// `d + c*delta .. d + (c+1)*delta`.
    StarChain {
        d: usize,
        delta: usize,
    },
    RandomRegular {
        n: usize,
        degree: usize,
        seed: u64,
    },
    EdgeListFile {
        path: PathBuf,
    },
}

impl GraphSpec {
    /// Short label usable as a CSV field.
    pub fn label(&self) -> String {
        match self {
            GraphSpec::Complete { n } => format!("complete-{n}"),
            GraphSpec::Path { n } => format!("path-{n}"),
            GraphSpec::Star { delta } => format!("star-{delta}"),
            GraphSpec::StarChain { d, delta } => format!("star-chain-{d}x{delta}"),
            GraphSpec::RandomRegular { n, degree, seed } => {
                format!("random-regular-{n}x{degree}-s{seed}")
            }
            GraphSpec::EdgeListFile { path } => {
                let name = path.file_name().map(|s| s.to_string_lossy().into_owned());
                format!("file-{}", name.unwrap_or_default()).replace([',', '"', ' '], "_")
            }
        }
    }

    /// Checks parameter constraints without building anything.
    pub fn validate(&self) -> Result<(), GraphError> {
        match *self {
            GraphSpec::Complete { n } | GraphSpec::Path { n } => {
                if n == 0 {
                    return Err(GraphError::param("n", "must be at least 1"));
                }
            }
            GraphSpec::Star { delta } => {
                if delta == 0 {
                    return Err(GraphError::param("delta", "must be at least 1"));
                }
            }
            GraphSpec::StarChain { d, delta } => {
                if d == 0 {
                    return Err(GraphError::param("d", "must be at least 1"));
                }
                if delta == 0 {
                    return Err(GraphError::param("delta", "must be at least 1"));
                }
            }
            GraphSpec::RandomRegular { n, degree, .. } => {
                if n == 0 {
                    return Err(GraphError::param("n", "must be at least 1"));
                }
                if degree >= n && n > 1 {
                    return Err(GraphError::param("degree", format!("{degree} must be below n = {n}")));
                }
                if (n * degree) % 2 != 0 {
                    return Err(GraphError::param("degree", format!("n*degree = {} is odd", n * degree)));
                }
                if n > 1 && degree == 0 {
                    return Err(GraphError::param("degree", "0 cannot give a connected graph"));
                }
                if degree == 1 && n > 2 {
                    return Err(GraphError::param(
                        "degree",
                        "1 cannot give a connected graph on more than 2 nodes",
                    ));
                }
            }
            GraphSpec::EdgeListFile { .. } => {}
        }
        Ok(())
    }
}

/// Builds the graph described by `spec`. Identical specs give identical graphs.
pub fn generate(spec: &GraphSpec) -> Result<Graph, GraphError> {
    spec.validate()?;
    match spec {
        &GraphSpec::Complete { n } => {
            let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            Graph::from_edges(n, &edges)
        }
        &GraphSpec::Path { n } => {
            let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
            Graph::from_edges(n, &edges)
        }
        &GraphSpec::Star { delta } => {
            let edges: Vec<_> = (1..=delta).map(|leaf| (0, leaf)).collect();
            Graph::from_edges(delta + 1, &edges)
        }
        &GraphSpec::StarChain { d, delta } => {
            let mut edges: Vec<_> = (1..d).map(|c| (c - 1, c)).collect();
            for c in 0..d {
                edges.extend((0..delta).map(|k| (c, d + c * delta + k)));
            }
            Graph::from_edges(d * (delta + 1), &edges)
        }
        &GraphSpec::RandomRegular { n, degree, seed } => random_regular(n, degree, seed),
        GraphSpec::EdgeListFile { path } => read_edge_list(path),
    }
}

/// Pairing construction: repeatedly join two random free half-edges,
/// rejecting pairs that would create a loop or a multi-edge, and restart
/// when the remaining half-edges admit no valid pair or the result is
/// disconnected.
fn random_regular(n: usize, degree: usize, seed: u64) -> Result<Graph, GraphError> {
    if n == 1 {
        return Graph::from_edges(1, &[]);
    }
    let mut rng = SplitMix64::new(seed);
    for _ in 0..MAX_REGULAR_ATTEMPTS {
        if let Some(edges) = try_pairing(n, degree, &mut rng) {
            let g = Graph::from_edges(n, &edges)?;
            if g.is_connected() {
                return Ok(g);
            }
        }
    }
    Err(GraphError::param(
        "seed",
        format!("no connected simple {degree}-regular graph on {n} nodes after {MAX_REGULAR_ATTEMPTS} attempts"),
    ))
}

fn try_pairing(n: usize, degree: usize, rng: &mut SplitMix64) -> Option<Vec<(NodeId, NodeId)>> {
    let mut points: Vec<NodeId> = (0..n).flat_map(|v| std::iter::repeat_n(v, degree)).collect();
    let mut adjacent = vec![Vec::<NodeId>::with_capacity(degree); n];
    let mut edges = Vec::with_capacity(n * degree / 2);
    while !points.is_empty() {
        let mut found = false;
        // a bounded number of blind tries, then an exhaustive check
        for _ in 0..(4 * points.len()).max(64) {
            let i = rng.below(points.len());
            let j = rng.below(points.len());
            let (u, v) = (points[i], points[j]);
            if i != j && u != v && !adjacent[u].contains(&v) {
                take_pair(&mut points, i, j);
                adjacent[u].push(v);
                adjacent[v].push(u);
                edges.push((u.min(v), u.max(v)));
                found = true;
                break;
            }
        }
        if !found && !has_valid_pair(&points, &adjacent) {
            return None;
        }
    }
    Some(edges)
}

fn take_pair(points: &mut Vec<NodeId>, i: usize, j: usize) {
    let (hi, lo) = if i > j { (i, j) } else { (j, i) };
    points.swap_remove(hi);
    points.swap_remove(lo);
}

fn has_valid_pair(points: &[NodeId], adjacent: &[Vec<NodeId>]) -> bool {
    points
        .iter()
        .enumerate()
        .any(|(i, &u)| points[i + 1..].iter().any(|&v| u != v && !adjacent[u].contains(&v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_chain_counts() {
        let g = generate(&GraphSpec::StarChain { d: 2, delta: 3 }).unwrap();
        assert_eq!(g.node_count(), 8);
        assert_eq!(g.edge_count(), 7);
        assert_eq!(g.degree(0), 4);
        assert_eq!(g.degree(1), 4);
        assert!((2..8).all(|leaf| g.degree(leaf) == 1));
        assert_eq!(g.neighbors(2), &[0]);
        assert_eq!(g.neighbors(5), &[1]);
    }

    #[test]
    fn complete_degrees() {
        let g = generate(&GraphSpec::Complete { n: 4 }).unwrap();
        assert!((0..4).all(|v| g.degree(v) == 3));
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn random_regular_degrees_by_brute_force() {
        let g = generate(&GraphSpec::RandomRegular {
            n: 16,
            degree: 4,
            seed: 7,
        })
        .unwrap();
        assert_eq!(g.node_count(), 16);
        for v in 0..16 {
            let count = (0..16).filter(|&u| g.neighbors(u).contains(&v)).count();
            assert_eq!(count, 4);
            assert_eq!(g.degree(v), 4);
        }
        assert!(g.is_connected());
    }

    #[test]
    fn random_regular_is_deterministic() {
        let spec = GraphSpec::RandomRegular {
            n: 64,
            degree: 8,
            seed: 11,
        };
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let other = GraphSpec::RandomRegular {
            n: 64,
            degree: 8,
            seed: 12,
        };
        assert_ne!(generate(&spec).unwrap().edges(), generate(&other).unwrap().edges());
    }

    #[test]
    fn parameter_errors_name_the_field() {
        let err = |s: GraphSpec| match generate(&s) {
            Err(GraphError::InvalidParameter { field, .. }) => field,
            other => panic!("expected parameter error, got {other:?}"),
        };
        assert_eq!(
            err(GraphSpec::RandomRegular {
                n: 5,
                degree: 3,
                seed: 0
            }),
            "degree"
        );
        assert_eq!(
            err(GraphSpec::RandomRegular {
                n: 4,
                degree: 4,
                seed: 0
            }),
            "degree"
        );
        assert_eq!(err(GraphSpec::Star { delta: 0 }), "delta");
        assert_eq!(err(GraphSpec::StarChain { d: 0, delta: 2 }), "d");
        assert_eq!(err(GraphSpec::Complete { n: 0 }), "n");
    }

    #[test]
    fn spec_json_shape() {
        let s: GraphSpec = serde_json::from_str(r#"{"kind":"star-chain","d":2,"delta":8}"#).unwrap();
        assert_eq!(s, GraphSpec::StarChain { d: 2, delta: 8 });
        assert_eq!(s.label(), "star-chain-2x8");
    }
}
