//! Synchronous-round simulator for the buffer model.
//!
//! Each round runs four phases over the start-of-round state:
//!
//! * **emit** - every node makes at most one call. Push: informed nodes push
//!   the rumor. Pull and Push&Pull: uninformed nodes send a pull request.
//!   Informed Pull/Push&Pull nodes keep their send for the read phase.
//! * **deliver** - arrivals at a node with an empty buffer: one of them,
//!   picked uniformly, goes straight to the node and the rest are appended
//!   in tie-break order. At a non-empty buffer everything is appended.
//! * **read** - every node reads the direct arrival if any, otherwise the
//!   buffer head. An informed node that reads a pull request answers it in
//!   the same round. An informed Push&Pull node that read no request pushes.
//! * **late deliver** - the rumors sent during the read phase arrive. A
//!   recipient that has not read yet and whose buffer is empty reads one of
//!   them directly; the rest are appended.
//!
//! A node therefore reads at most one message and sends at most one message
//! per round, and a node informed in round `t` first acts as informed in
//! round `t + 1`.

use std::collections::VecDeque;
use std::mem;

use serde::{Deserialize, Serialize};

use crate::config::{Model, OverflowPolicy, Protocol, RunConfig, SimError, TieBreak};
use crate::graph::{Graph, NodeId};
use crate::tape::{ChoiceTape, Purpose};
use crate::trace::{RoundRecord, Trace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MessageKind {
    Rumor,
    PullRequest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub kind: MessageKind,
    pub sender: NodeId,
    pub sent_round: u64,
    /// Port of the recipient on which the message arrived.
    pub arrival_port: usize,
    /// Run-wide send sequence number.
    pub seq: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NodeState {
    informed: bool,
    buffer: VecDeque<Message>,
    rumors_buffered: usize,
    reads_done: u8,
    sends_done: u8,
}

impl NodeState {
    pub fn is_informed(&self) -> bool {
        self.informed
    }

    /// Uninformed, but a rumor is waiting in the buffer.
    pub fn is_nearly_informed(&self) -> bool {
        !self.informed && self.rumors_buffered > 0
    }

    pub fn buffer(&self) -> &VecDeque<Message> {
        &self.buffer
    }

    pub fn reads_done(&self) -> u8 {
        self.reads_done
    }

    pub fn sends_done(&self) -> u8 {
        self.sends_done
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReadVia {
    /// Arrived this round at an empty buffer and skipped it.
    Direct,
    /// Head of the buffer.
    Buffer,
    /// Answer delivered after the read phase to a node that had not read.
    LateDirect,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReadEvent {
    pub node: NodeId,
    pub round: u64,
    pub via: ReadVia,
    pub message: Message,
}

/// A buffered-model run that can be advanced one round at a time.
pub struct Simulation<'g> {
    graph: &'g Graph,
    config: RunConfig,
    tape: ChoiceTape,
    nodes: Vec<NodeState>,
    round: u64,
    informed_count: usize,
    informed_round: Vec<Option<u64>>,
    total_sent: u64,
    total_reads: u64,
    total_dropped: u64,
    total_buffered: usize,
    arrivals: Vec<Vec<Message>>,
    direct: Vec<Option<Message>>,
    read_log: Option<Vec<ReadEvent>>,
}

impl<'g> Simulation<'g> {
    pub fn new(graph: &'g Graph, config: RunConfig) -> Result<Self, SimError> {
        config.validate(graph)?;
        if config.model != Model::Buffered {
            return Err(SimError::InvalidConfig {
                field: "model",
                reason: "the buffer engine only runs the buffered model".into(),
            });
        }
        let n = graph.node_count();
        let mut nodes = vec![NodeState::default(); n];
        nodes[config.source].informed = true;
        let mut informed_round = vec![None; n];
        informed_round[config.source] = Some(0);
        Ok(Simulation {
            graph,
            tape: ChoiceTape::new(config.seed),
            config,
            nodes,
            round: 0,
            informed_count: 1,
            informed_round,
            total_sent: 0,
            total_reads: 0,
            total_dropped: 0,
            total_buffered: 0,
            arrivals: vec![Vec::new(); n],
            direct: vec![None; n],
            read_log: None,
        })
    }

    /// Start recording every read; see [`Simulation::take_read_log`].
    pub fn record_reads(&mut self) {
        self.read_log.get_or_insert_with(Vec::new);
    }

    pub fn take_read_log(&mut self) -> Vec<ReadEvent> {
        self.read_log.as_mut().map(mem::take).unwrap_or_default()
    }

    pub fn nodes(&self) -> &[NodeState] {
        &self.nodes
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn informed_count(&self) -> usize {
        self.informed_count
    }

    pub fn is_complete(&self) -> bool {
        self.informed_count == self.nodes.len()
    }

    pub fn informed_round(&self) -> &[Option<u64>] {
        &self.informed_round
    }

    pub fn total_sent(&self) -> u64 {
        self.total_sent
    }

    pub fn total_reads(&self) -> u64 {
        self.total_reads
    }

    pub fn total_dropped(&self) -> u64 {
        self.total_dropped
    }

    pub fn total_buffered(&self) -> usize {
        self.total_buffered
    }

    /// Executes one round and reports the end-of-round state.
    pub fn step(&mut self) -> RoundRecord {
        self.round += 1;
        for node in &mut self.nodes {
            node.reads_done = 0;
            node.sends_done = 0;
        }
        self.emit();
        self.deliver(Purpose::ArrivalOrder, Purpose::DirectPick);
        let informed_at_start: Vec<bool> = self.nodes.iter().map(|s| s.informed).collect();
        self.read_phase(&informed_at_start);
        self.deliver(Purpose::LateArrivalOrder, Purpose::LateDirectPick);
        self.record()
    }

    fn emit(&mut self) {
        for v in 0..self.nodes.len() {
            let informed = self.nodes[v].informed;
            let kind = match (self.config.protocol, informed) {
                (Protocol::Push, true) => MessageKind::Rumor,
                (Protocol::Pull | Protocol::PushPull, false) => MessageKind::PullRequest,
                _ => continue,
            };
            self.send_random(v, kind);
        }
    }

    fn send_random(&mut self, v: NodeId, kind: MessageKind) {
        let degree = self.graph.degree(v);
        if degree == 0 {
            return;
        }
        let port = self.tape.below(degree, v, self.round, Purpose::Contact, 0);
        self.send(v, port, kind);
    }

    fn send(&mut self, v: NodeId, port: usize, kind: MessageKind) {
        let node = &mut self.nodes[v];
        assert_eq!(node.sends_done, 0, "node {v} sent twice in round {}", self.round);
        node.sends_done = 1;
        let to = self.graph.neighbor_at(v, port);
        self.arrivals[to].push(Message {
            kind,
            sender: v,
            sent_round: self.round,
            arrival_port: self.graph.reverse_port(v, port),
            seq: self.total_sent,
        });
        self.total_sent += 1;
    }

    /// Routes pending arrivals. In the first delivery every node still has its
    /// read available, so a pick made for an empty buffer is parked in
    /// `direct` for the read phase; in the late delivery it is read at once.
    fn deliver(&mut self, order: Purpose, pick: Purpose) {
        let late = pick == Purpose::LateDirectPick;
        for w in 0..self.nodes.len() {
            if self.arrivals[w].is_empty() {
                continue;
            }
            let mut batch = mem::take(&mut self.arrivals[w]);
            self.order_arrivals(&mut batch, w, order);
            let node = &self.nodes[w];
            if node.buffer.is_empty() && node.reads_done == 0 {
                let i = self.tape.below(batch.len(), w, self.round, pick, 0);
                let chosen = batch.remove(i);
                if late {
                    self.read(w, chosen, ReadVia::LateDirect);
                } else {
                    self.direct[w] = Some(chosen);
                }
            }
            for m in batch.drain(..) {
                self.enqueue(w, m);
            }
            // hand the allocation back
            self.arrivals[w] = batch;
        }
    }

    fn order_arrivals(&self, batch: &mut [Message], w: NodeId, purpose: Purpose) {
        match self.config.tie_break {
            TieBreak::UniformRandom => self.tape.shuffle(batch, w, self.round, purpose),
            TieBreak::PortOrder => batch.sort_by_key(|m| m.arrival_port),
        }
    }

    fn enqueue(&mut self, w: NodeId, m: Message) {
        let node = &mut self.nodes[w];
        if let Some(cap) = self.config.buffer_capacity {
            if node.buffer.len() >= cap {
                self.total_dropped += 1;
                match self.config.overflow {
                    OverflowPolicy::DropTail => return,
                    OverflowPolicy::DropHead => match node.buffer.pop_front() {
                        Some(old) => {
                            if old.kind == MessageKind::Rumor {
                                node.rumors_buffered -= 1;
                            }
                            self.total_buffered -= 1;
                        }
                        // zero capacity: the arrival itself is the casualty
                        None => return,
                    },
                }
            }
        }
        if m.kind == MessageKind::Rumor {
            node.rumors_buffered += 1;
        }
        node.buffer.push_back(m);
        self.total_buffered += 1;
    }

    fn dequeue(&mut self, v: NodeId) -> Option<Message> {
        let node = &mut self.nodes[v];
        let m = node.buffer.pop_front()?;
        if m.kind == MessageKind::Rumor {
            node.rumors_buffered -= 1;
        }
        self.total_buffered -= 1;
        Some(m)
    }

    fn read_phase(&mut self, informed_at_start: &[bool]) {
        for (v, &was_informed) in informed_at_start.iter().enumerate() {
            let msg = match self.direct[v].take() {
                Some(m) => Some((m, ReadVia::Direct)),
                None => self.dequeue(v).map(|m| (m, ReadVia::Buffer)),
            };
            let answered = match msg {
                Some((m, via)) => self.read(v, m, via),
                None => false,
            };
            if self.config.protocol == Protocol::PushPull && was_informed && !answered {
                self.send_random(v, MessageKind::Rumor);
            }
        }
    }

    /// Consumes `m` at `v`. Returns whether the read produced an answer.
    fn read(&mut self, v: NodeId, m: Message, via: ReadVia) -> bool {
        let node = &mut self.nodes[v];
        assert_eq!(node.reads_done, 0, "node {v} read twice in round {}", self.round);
        node.reads_done = 1;
        self.total_reads += 1;
        if let Some(log) = self.read_log.as_mut() {
            log.push(ReadEvent {
                node: v,
                round: self.round,
                via,
                message: m,
            });
        }
        match m.kind {
            MessageKind::Rumor => {
                if !node.informed {
                    node.informed = true;
                    self.informed_round[v] = Some(self.round);
                    self.informed_count += 1;
                }
                false
            }
            MessageKind::PullRequest if node.informed => {
                debug_assert!(via != ReadVia::LateDirect, "requests are never delivered late");
                self.send(v, m.arrival_port, MessageKind::Rumor);
                true
            }
            // an uninformed node has no room to remember the requester
            MessageKind::PullRequest => false,
        }
    }

    fn record(&self) -> RoundRecord {
        RoundRecord {
            round: self.round,
            informed: self.informed_count,
            nearly_informed: self.nodes.iter().filter(|s| s.is_nearly_informed()).count(),
            buffered: self.total_buffered,
            max_buffer: self.nodes.iter().map(|s| s.buffer.len()).max().unwrap_or(0),
        }
    }

    /// Steps until every node is informed or the round cap is reached.
    pub fn run_to_end(mut self) -> Trace {
        let mut rounds = Vec::new();
        while !self.is_complete() && self.round < self.config.max_rounds {
            rounds.push(self.step());
        }
        let completion_round = self.is_complete().then_some(self.round);
        Trace {
            protocol: self.config.protocol,
            model: Model::Buffered,
            source: self.config.source,
            seed: self.config.seed,
            rounds,
            informed_round: self.informed_round,
            completion_round,
            total_messages_sent: self.total_sent,
            messages_dropped: self.total_dropped,
        }
    }
}

/// Runs the buffered model to completion or to `config.max_rounds`.
pub fn run(graph: &Graph, config: &RunConfig) -> Result<Trace, SimError> {
    Ok(Simulation::new(graph, config.clone())?.run_to_end())
}
