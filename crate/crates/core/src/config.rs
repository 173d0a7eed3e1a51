use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, NodeId};

pub const DEFAULT_MAX_ROUNDS: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    Push,
    Pull,
    PushPull,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// One read per node per round from a FIFO buffer.
    Buffered,
    /// Every contact of a round is processed within that round.
    Classical,
}

/// Order in which same-round arrivals are appended to a buffer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    /// A fresh uniform permutation per recipient per round.
    #[default]
    UniformRandom,
    /// Ascending incoming port; a fixed stand-in for an adversarial order.
    PortOrder,
}

/// What happens when a message arrives at a full buffer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OverflowPolicy {
    /// Discard the arriving message.
    #[default]
    DropTail,
    /// Discard the oldest buffered message to make room.
    DropHead,
}

macro_rules! text_enum {
    ($ty:ty { $($variant:ident => $text:literal),+ $(,)? }) => {
        impl $ty {
            pub const NAMES: &'static [&'static str] = &[$($text),+];

            pub fn as_str(&self) -> &'static str {
                match self { $(Self::$variant => $text),+ }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, String> {
                match s {
                    $($text => Ok(Self::$variant),)+
                    other => Err(format!(
                        "unknown value `{other}`, expected one of: {}",
                        Self::NAMES.join(", ")
                    )),
                }
            }
        }
    };
}

text_enum!(Protocol { Push => "push", Pull => "pull", PushPull => "push-pull" });
text_enum!(Model { Buffered => "buffered", Classical => "classical" });
text_enum!(TieBreak { UniformRandom => "uniform-random", PortOrder => "port-order" });
text_enum!(OverflowPolicy { DropTail => "drop-tail", DropHead => "drop-head" });

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub protocol: Protocol,
    pub model: Model,
    pub source: NodeId,
    pub seed: u64,
    #[serde(default)]
    pub tie_break: TieBreak,
    /// `None` means unbounded.
    #[serde(default)]
    pub buffer_capacity: Option<usize>,
    #[serde(default)]
    pub overflow: OverflowPolicy,
    pub max_rounds: u64,
}

impl RunConfig {
    pub fn new(protocol: Protocol, model: Model, source: NodeId, seed: u64) -> Self {
        RunConfig {
            protocol,
            model,
            source,
            seed,
            tie_break: TieBreak::default(),
            buffer_capacity: None,
            overflow: OverflowPolicy::default(),
            max_rounds: DEFAULT_MAX_ROUNDS,
        }
    }

    pub fn with_tie_break(mut self, tie_break: TieBreak) -> Self {
        self.tie_break = tie_break;
        self
    }

    pub fn with_max_rounds(mut self, max_rounds: u64) -> Self {
        self.max_rounds = max_rounds;
        self
    }

    pub fn with_capacity(mut self, capacity: Option<usize>) -> Self {
        self.buffer_capacity = capacity;
        self
    }

    pub fn with_overflow(mut self, overflow: OverflowPolicy) -> Self {
        self.overflow = overflow;
        self
    }

    pub fn validate(&self, graph: &Graph) -> Result<(), SimError> {
        if !graph.contains(self.source) {
            return Err(SimError::InvalidConfig {
                field: "source",
                reason: format!("node {} does not exist (n = {})", self.source, graph.node_count()),
            });
        }
        if self.max_rounds == 0 {
            return Err(SimError::InvalidConfig {
                field: "max_rounds",
                reason: "must be at least 1".into(),
            });
        }
        graph.ensure_connected()?;
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimError {
    #[error("invalid run configuration `{field}`: {reason}")]
    InvalidConfig { field: &'static str, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}
