//! Runs the classical and buffered models on one [`ChoiceTape`] and compares
//! their informed sets round by round.
//!
//! For Push the two sets agree in every round: an uninformed Push node never
//! has anything in its buffer, so every rumor it is sent is read in the round
//! it arrives. For Pull the buffered run falls behind as requests queue up.

use serde::{Deserialize, Serialize};

pub use crate::tape::ChoiceTape;

use crate::classical::run_classical;
use crate::config::{Model, Protocol, RunConfig, SimError, DEFAULT_MAX_ROUNDS};
use crate::engine;
use crate::graph::{Graph, NodeId};
use crate::trace::Trace;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingReport {
    pub protocol: Protocol,
    pub source: NodeId,
    pub seed: u64,
    /// First round whose informed sets differ, within the compared horizon.
    pub first_divergence_round: Option<u64>,
    pub informed_sets_equal_every_round: bool,
    /// Last round covered by the comparison.
    pub rounds_compared: u64,
    /// False when either model hit its round cap; the comparison is then partial.
    pub both_completed: bool,
    pub trace_classical: Trace,
    pub trace_buffered: Trace,
}

pub fn run_coupled(graph: &Graph, source: NodeId, protocol: Protocol, seed: u64) -> Result<CouplingReport, SimError> {
    let config = RunConfig::new(protocol, Model::Buffered, source, seed).with_max_rounds(DEFAULT_MAX_ROUNDS);
    run_coupled_with(graph, &config)
}

/// Like [`run_coupled`], taking every other setting from `config`; its
/// `model` field is ignored.
pub fn run_coupled_with(graph: &Graph, config: &RunConfig) -> Result<CouplingReport, SimError> {
    let buffered = RunConfig {
        model: Model::Buffered,
        ..config.clone()
    };
    let classical = RunConfig {
        model: Model::Classical,
        ..config.clone()
    };
    let trace_buffered = engine::run(graph, &buffered)?;
    let trace_classical = run_classical(graph, &classical)?;
    Ok(compare(trace_classical, trace_buffered))
}

fn compare(trace_classical: Trace, trace_buffered: Trace) -> CouplingReport {
    // Past completion a trace's informed set stays V, so it is known forever.
    let known_until = |t: &Trace| t.completion_round.map_or(t.rounds_run(), |_| u64::MAX);
    let mut horizon = known_until(&trace_classical).min(known_until(&trace_buffered));
    let both_completed = horizon == u64::MAX;
    if both_completed {
        horizon = trace_classical.rounds_run().max(trace_buffered.rounds_run());
    }
    // Node v is in the informed set at round t iff informed_round[v] <= t, so
    // the sets first differ at the smaller of two unequal informed rounds.
    let first_divergence_round = trace_classical
        .informed_round
        .iter()
        .zip(&trace_buffered.informed_round)
        .filter(|(a, b)| a != b)
        .map(|(a, b)| a.unwrap_or(u64::MAX).min(b.unwrap_or(u64::MAX)))
        .min()
        .filter(|&r| r <= horizon);
    CouplingReport {
        protocol: trace_buffered.protocol,
        source: trace_buffered.source,
        seed: trace_buffered.seed,
        first_divergence_round,
        informed_sets_equal_every_round: first_divergence_round.is_none(),
        rounds_compared: horizon,
        both_completed,
        trace_classical,
        trace_buffered,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphSpec};

    // Round-by-round comparison of the explicit informed sets.
    fn brute_force_equal(r: &CouplingReport) -> bool {
        (0..=r.rounds_compared).all(|t| r.trace_classical.informed_set(t) == r.trace_buffered.informed_set(t))
    }

    #[test]
    fn push_couples_exactly() {
        for spec in [
            GraphSpec::Complete { n: 12 },
            GraphSpec::StarChain { d: 3, delta: 4 },
            GraphSpec::RandomRegular {
                n: 24,
                degree: 3,
                seed: 1,
            },
        ] {
            let g = generate(&spec).unwrap();
            for seed in 0..25 {
                let r = run_coupled(&g, 0, Protocol::Push, seed).unwrap();
                assert!(r.informed_sets_equal_every_round, "{spec:?} seed {seed}");
                assert!(brute_force_equal(&r));
                assert_eq!(r.trace_classical.completion_round, r.trace_buffered.completion_round);
            }
        }
    }

    #[test]
    fn trivial_graph() {
        let g = generate(&GraphSpec::Complete { n: 1 }).unwrap();
        let r = run_coupled(&g, 0, Protocol::Push, 0).unwrap();
        assert!(r.informed_sets_equal_every_round);
        assert_eq!(r.trace_classical.completion_round, Some(0));
        assert_eq!(r.trace_buffered.completion_round, Some(0));
    }

    #[test]
    fn pull_on_star_chain_diverges() {
        let g = generate(&GraphSpec::StarChain { d: 2, delta: 8 }).unwrap();
        for seed in 0..10 {
            let r = run_coupled(&g, 0, Protocol::Pull, seed).unwrap();
            let t = r.first_divergence_round.expect("pull must diverge");
            assert!(!brute_force_equal(&r));
            // round 1 already differs: classical informs all 8 leaves of center 0
            assert_eq!(t, 1);
            assert!(r.trace_buffered.completion_round.unwrap() > 3 * r.trace_classical.completion_round.unwrap());
        }
    }

    #[test]
    fn censored_comparison_is_partial() {
        let g = generate(&GraphSpec::StarChain { d: 2, delta: 8 }).unwrap();
        let config = RunConfig::new(Protocol::Push, Model::Buffered, 0, 3).with_max_rounds(2);
        let r = run_coupled_with(&g, &config).unwrap();
        assert!(!r.both_completed);
        assert_eq!(r.rounds_compared, 2);
        assert!(r.informed_sets_equal_every_round);
    }
}
