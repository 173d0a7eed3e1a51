//! Classical (bufferless) model: every contact made in a round is served in
//! that round. Neighbor choices read the same tape cells as the buffer
//! engine, so both models can be driven by one execution.

use crate::config::{Model, Protocol, RunConfig, SimError};
use crate::graph::Graph;
use crate::tape::{ChoiceTape, Purpose};
use crate::trace::{RoundRecord, Trace};

pub fn run_classical(graph: &Graph, config: &RunConfig) -> Result<Trace, SimError> {
    config.validate(graph)?;
    if config.model != Model::Classical {
        return Err(SimError::InvalidConfig {
            field: "model",
            reason: "the classical simulator only runs the classical model".into(),
        });
    }
    let n = graph.node_count();
    let tape = ChoiceTape::new(config.seed);
    let mut informed = vec![false; n];
    let mut informed_round = vec![None; n];
    informed[config.source] = true;
    informed_round[config.source] = Some(0);
    let mut informed_count = 1;
    let mut sent = 0u64;
    let mut rounds = Vec::new();
    let mut round = 0u64;

    let push = matches!(config.protocol, Protocol::Push | Protocol::PushPull);
    let pull = matches!(config.protocol, Protocol::Pull | Protocol::PushPull);

    while informed_count < n && round < config.max_rounds {
        round += 1;
        let at_start = informed.clone();
        for v in 0..n {
            let contact = || graph.neighbor_at(v, tape.below(graph.degree(v), v, round, Purpose::Contact, 0));
            if at_start[v] && push {
                let w = contact();
                sent += 1;
                if !informed[w] {
                    informed[w] = true;
                    informed_round[w] = Some(round);
                    informed_count += 1;
                }
            } else if !at_start[v] && pull {
                let w = contact();
                sent += 1;
                if at_start[w] {
                    // the answer
                    sent += 1;
                    if !informed[v] {
                        informed[v] = true;
                        informed_round[v] = Some(round);
                        informed_count += 1;
                    }
                }
            }
        }
        rounds.push(RoundRecord {
            round,
            informed: informed_count,
            nearly_informed: 0,
            buffered: 0,
            max_buffer: 0,
        });
    }

    Ok(Trace {
        protocol: config.protocol,
        model: Model::Classical,
        source: config.source,
        seed: config.seed,
        rounds,
        informed_round,
        completion_round: (informed_count == n).then_some(round),
        total_messages_sent: sent,
        messages_dropped: 0,
    })
}
