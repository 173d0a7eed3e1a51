//! Simulation and analysis of randomized rumor spreading (Push, Pull and
//! Push&Pull) in two models: the classical one, where a node serves every
//! contact of a round, and a buffered one, where each node reads a single
//! message per round from a FIFO queue.

pub mod bounds;
pub mod classical;
pub mod config;
pub mod coupling;
pub mod engine;
pub mod experiment;
pub mod graph;
pub mod tape;
pub mod trace;

pub use bounds::{bounds_report, BoundConstants, BoundsError, BoundsReport};
pub use classical::run_classical;
pub use config::{Model, OverflowPolicy, Protocol, RunConfig, SimError, TieBreak, DEFAULT_MAX_ROUNDS};
pub use coupling::{run_coupled, run_coupled_with, CouplingReport};
pub use engine::{Message, MessageKind, NodeState, Simulation};
pub use experiment::{run_experiment, scaling_fit, ExperimentError, ExperimentPlan, Sources, Summary, TrialResult};
pub use graph::{generate, Graph, GraphError, GraphSpec, LoadProfile, NodeId};
pub use tape::ChoiceTape;
pub use trace::{RoundRecord, Trace};

/// Runs `config` on `graph` in whichever model the config names.
pub fn simulate(graph: &Graph, config: &RunConfig) -> Result<Trace, SimError> {
    match config.model {
        Model::Buffered => engine::run(graph, config),
        Model::Classical => classical::run_classical(graph, config),
    }
}
