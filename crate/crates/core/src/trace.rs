use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::config::{Model, Protocol};
use crate::graph::NodeId;

/// State of the network at the end of one round.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: u64,
    pub informed: usize,
    /// Uninformed nodes holding an unread rumor in their buffer.
    pub nearly_informed: usize,
    pub buffered: usize,
    pub max_buffer: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub protocol: Protocol,
    pub model: Model,
    pub source: NodeId,
    pub seed: u64,
    pub rounds: Vec<RoundRecord>,
    /// Round in which each node read the rumor; 0 for the source.
    pub informed_round: Vec<Option<u64>>,
    /// First round in which every node is informed; `None` when the run hit
    /// its round cap first.
    pub completion_round: Option<u64>,
    pub total_messages_sent: u64,
    pub messages_dropped: u64,
}

#[derive(Serialize)]
struct SummaryLine {
    completion_round: Option<u64>,
    total_messages: u64,
}

impl Trace {
    pub fn is_censored(&self) -> bool {
        self.completion_round.is_none()
    }

    pub fn rounds_run(&self) -> u64 {
        self.rounds.last().map_or(0, |r| r.round)
    }

    pub fn max_buffer(&self) -> usize {
        self.rounds.iter().map(|r| r.max_buffer).max().unwrap_or(0)
    }

    /// Informed set after `round`, as a membership vector.
    pub fn informed_set(&self, round: u64) -> Vec<bool> {
        self.informed_round
            .iter()
            .map(|r| r.is_some_and(|r| r <= round))
            .collect()
    }

    /// One JSON object per round, then a summary object. Byte-stable.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.rounds {
            // field order is fixed by the struct
            let _ = writeln!(out, "{}", serde_json::to_string(r).expect("plain struct"));
        }
        let summary = SummaryLine {
            completion_round: self.completion_round,
            total_messages: self.total_messages_sent,
        };
        let _ = writeln!(out, "{}", serde_json::to_string(&summary).expect("plain struct"));
        out
    }
}
