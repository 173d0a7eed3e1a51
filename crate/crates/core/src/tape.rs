//! Counter-based randomness.
//!
//! Every random decision of a run is a pure function of
//! `(seed, node, round, purpose, index)`. Two simulators that ask the same
//! question of the same tape get the same answer regardless of the order in
//! which they ask, which is what lets the classical and buffered models be
//! executed on one shared sequence of random choices.

use serde::{Deserialize, Serialize};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Order-sensitive hash of a sequence of words.
pub fn hash_words(words: &[u64]) -> u64 {
    words.iter().fold(GOLDEN, |acc, &w| {
        mix64(acc.wrapping_add(GOLDEN) ^ mix64(w.wrapping_add(GOLDEN)))
    })
}

/// What a draw is used for. Distinct purposes never share a tape cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Purpose {
    /// Neighbor (port) choice for a push or a pull request.
    Contact = 1,
    /// Which same-round arrival bypasses an empty buffer.
    DirectPick = 2,
    /// Permutation of same-round arrivals before they are appended.
    ArrivalOrder = 3,
    /// Direct pick among answers delivered late in the round.
    LateDirectPick = 4,
    /// Permutation of late arrivals.
    LateArrivalOrder = 5,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceTape {
    seed: u64,
}

impl ChoiceTape {
    pub fn new(seed: u64) -> Self {
        ChoiceTape { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Raw 64-bit cell at `(node, round, purpose, index)`.
    #[inline]
    pub fn word(&self, node: usize, round: u64, purpose: Purpose, index: u64) -> u64 {
        let mut h = mix64(self.seed ^ GOLDEN);
        h = mix64(h ^ (node as u64).wrapping_mul(GOLDEN));
        h = mix64(h ^ round.wrapping_mul(0xD6E8_FEB8_6659_FD93));
        mix64(h ^ ((purpose as u64) << 56) ^ index)
    }

    /// Uniform integer in `0..bound` (Lemire's method; rejected words are
    /// replaced by fresh cells further along the same index space).
    pub fn below(&self, bound: usize, node: usize, round: u64, purpose: Purpose, index: u64) -> usize {
        assert!(bound > 0, "empty range");
        let bound = bound as u64;
        let threshold = bound.wrapping_neg() % bound;
        let mut attempt = 0u64;
        loop {
            let x = self.word(node, round, purpose, index ^ (attempt << 40));
            let m = (x as u128) * (bound as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as usize;
            }
            attempt += 1;
        }
    }

    /// Fisher-Yates shuffle keyed by `(node, round, purpose)`.
    pub fn shuffle<T>(&self, items: &mut [T], node: usize, round: u64, purpose: Purpose) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1, node, round, purpose, i as u64);
            items.swap(i, j);
        }
    }
}

/// Sequential SplitMix64 stream, for generators that need an ordinary
/// stream of numbers rather than addressed cells.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0, "empty range");
        let bound = bound as u64;
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let m = (self.next_u64() as u128) * (bound as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as usize;
            }
        }
    }
}
