//! Test helpers shared by the engine property tests and the acceptance suite.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::HashSet;

use rand::Rng;
use rumor_core::engine::{ReadVia, Simulation};
use rumor_core::{Graph, MessageKind, OverflowPolicy, Protocol};

/// Random connected simple graph: a random recursive tree plus each
/// remaining pair joined with probability `p`.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = HashSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.insert((u, v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.insert((u, v));
            }
        }
    }
    let mut edges: Vec<_> = edges.into_iter().collect();
    edges.sort_unstable();
    Graph::from_edges(n, &edges).expect("valid construction")
}

/// Advances `sim` by one round and checks every per-round invariant of the
/// buffer model against the state observed before and after the step.
/// `sim` must have read recording enabled.
pub fn audited_step(
    sim: &mut Simulation<'_>,
    protocol: Protocol,
    capacity: Option<usize>,
    overflow: OverflowPolicy,
) -> Result<(), String> {
    let n = sim.nodes().len();
    let before: Vec<_> = sim.nodes().iter().map(|s| s.buffer().clone()).collect();
    let informed_before: Vec<bool> = sim.nodes().iter().map(|s| s.is_informed()).collect();
    let count_before = sim.informed_count();
    let sent_before = sim.total_sent();

    if protocol == Protocol::Push {
        for (v, s) in sim.nodes().iter().enumerate() {
            if !s.is_informed() && !s.buffer().is_empty() {
                return Err(format!(
                    "push: uninformed node {v} has a non-empty buffer at round start"
                ));
            }
        }
    }

    let record = sim.step();
    let round = sim.round();
    let reads = sim.take_read_log();

    // one read, one send
    let mut read_count = vec![0usize; n];
    for e in &reads {
        read_count[e.node] += 1;
    }
    for (v, s) in sim.nodes().iter().enumerate() {
        if s.reads_done() > 1 || s.sends_done() > 1 || read_count[v] > 1 {
            return Err(format!("node {v} exceeded its budget in round {round}"));
        }
        if read_count[v] != s.reads_done() as usize {
            return Err(format!("node {v}: read log and counter disagree"));
        }
    }
    let sends: u64 = sim.nodes().iter().map(|s| s.sends_done() as u64).sum();
    if sends != sim.total_sent() - sent_before {
        return Err("send counters disagree with the message total".into());
    }

    // conservation
    let buffered: usize = sim.nodes().iter().map(|s| s.buffer().len()).sum();
    if buffered != sim.total_buffered() || buffered != record.buffered {
        return Err("buffered total is inconsistent".into());
    }
    if sim.total_sent() != sim.total_reads() + buffered as u64 + sim.total_dropped() {
        return Err(format!(
            "conservation broken: sent {} != read {} + buffered {buffered} + dropped {}",
            sim.total_sent(),
            sim.total_reads(),
            sim.total_dropped()
        ));
    }
    if let Some(cap) = capacity {
        if sim.nodes().iter().any(|s| s.buffer().len() > cap) {
            return Err("buffer above capacity".into());
        }
    }

    // FIFO: a buffer read takes the old head, and surviving old messages keep
    // their order at the front of the buffer
    for e in &reads {
        let head_may_drop = overflow == OverflowPolicy::DropHead && capacity.is_some();
        if e.via == ReadVia::Buffer && before[e.node].front() != Some(&e.message) && !head_may_drop {
            return Err(format!("node {} read out of order in round {round}", e.node));
        }
    }
    let keeps_old = capacity.is_none() || overflow == OverflowPolicy::DropTail;
    if keeps_old {
        for v in 0..n {
            let read_from_buffer = reads.iter().any(|e| e.node == v && e.via == ReadVia::Buffer);
            let survivors: Vec<_> = before[v].iter().skip(read_from_buffer as usize).collect();
            let now: Vec<_> = sim.nodes()[v].buffer().iter().take(survivors.len()).collect();
            if survivors != now {
                return Err(format!("node {v}: buffer prefix changed in round {round}"));
            }
        }
    }

    // monotone informed set; new members informed by a rumor read this round
    for v in 0..n {
        let now = sim.nodes()[v].is_informed();
        if informed_before[v] && !now {
            return Err(format!("node {v} forgot the rumor"));
        }
        if !informed_before[v] && now {
            let by_read = reads
                .iter()
                .any(|e| e.node == v && e.message.kind == MessageKind::Rumor);
            if !by_read || sim.informed_round()[v] != Some(round) {
                return Err(format!("node {v} became informed without reading a rumor"));
            }
        }
    }
    if sim.informed_count() < count_before || record.informed != sim.informed_count() {
        return Err("informed count went backwards".into());
    }
    Ok(())
}
