use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{Graph, GraphError};

/// Expected per-round arrivals at each node when every node contacts one
/// uniformly random neighbor: `E_u` is the sum of `1/d_w` over the neighbors
/// `w` of `u`. Kept as exact rationals so that `sum(E_u) == n` holds with no
/// tolerance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadProfile {
    pub per_node: Vec<BigRational>,
    pub max_load: BigRational,
}

impl LoadProfile {
    pub fn total(&self) -> BigRational {
        self.per_node.iter().fold(BigRational::zero(), |acc, e| acc + e)
    }

    pub fn max_load_f64(&self) -> f64 {
        self.max_load.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn per_node_f64(&self) -> Vec<f64> {
        self.per_node
            .iter()
            .map(|e| e.to_f64().unwrap_or(f64::INFINITY))
            .collect()
    }

    /// True when every node carries load exactly one, which happens exactly
    /// for regular graphs.
    pub fn is_balanced(&self) -> bool {
        self.per_node.iter().all(One::is_one)
    }
}

pub fn load_profile(g: &Graph) -> Result<LoadProfile, GraphError> {
    if let Some(v) = (0..g.node_count()).find(|&v| g.degree(v) == 0) {
        return Err(GraphError::param("graph", format!("node {v} is isolated")));
    }
    let inverse_degree: Vec<BigRational> = (0..g.node_count())
        .map(|v| BigRational::new(BigInt::one(), BigInt::from(g.degree(v))))
        .collect();
    let per_node: Vec<BigRational> = (0..g.node_count())
        .map(|u| {
            g.neighbors(u)
                .iter()
                .fold(BigRational::zero(), |acc, &w| acc + &inverse_degree[w])
        })
        .collect();
    let max_load = per_node.iter().max().cloned().unwrap_or_else(BigRational::zero);
    Ok(LoadProfile { per_node, max_load })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphSpec};

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn regular_graphs_have_unit_load() {
        for spec in [
            GraphSpec::Complete { n: 7 },
            GraphSpec::RandomRegular {
                n: 20,
                degree: 3,
                seed: 4,
            },
        ] {
            let p = load_profile(&generate(&spec).unwrap()).unwrap();
            assert!(p.is_balanced());
            assert_eq!(p.max_load, ratio(1, 1));
        }
    }

    #[test]
    fn star_load_by_hand() {
        let p = load_profile(&generate(&GraphSpec::Star { delta: 5 }).unwrap()).unwrap();
        assert_eq!(p.per_node[0], ratio(5, 1));
        assert!(p.per_node[1..].iter().all(|e| *e == ratio(1, 5)));
        assert_eq!(p.max_load, ratio(5, 1));
        assert_eq!(p.total(), ratio(6, 1));
    }

    #[test]
    fn path_load_by_hand() {
        // 0-1-2-3: E_0 = 1/2, E_1 = 1 + 1/2, E_2 = 1/2 + 1, E_3 = 1/2
        let p = load_profile(&generate(&GraphSpec::Path { n: 4 }).unwrap()).unwrap();
        assert_eq!(p.per_node, vec![ratio(1, 2), ratio(3, 2), ratio(3, 2), ratio(1, 2)]);
        assert_eq!(p.total(), ratio(4, 1));
    }

    #[test]
    fn isolated_node_is_rejected() {
        let g = Graph::from_edges(1, &[]).unwrap();
        assert!(load_profile(&g).is_err());
    }
}
