//! Fixtures shared by the benchmarks.

use rumor_core::{generate, Graph, GraphSpec, Model, Protocol, RunConfig};

/// Graphs the benchmarks run on, labelled for reporting.
pub fn fixtures() -> Vec<(String, Graph)> {
    [
        GraphSpec::Complete { n: 256 },
        GraphSpec::StarChain { d: 2, delta: 16 },
        GraphSpec::RandomRegular {
            n: 1024,
            degree: 8,
            seed: 1,
        },
    ]
    .iter()
    .map(|spec| (spec.label(), generate(spec).expect("fixture graphs are valid")))
    .collect()
}

pub fn config(protocol: Protocol, model: Model, seed: u64) -> RunConfig {
    RunConfig::new(protocol, model, 0, seed)
}
