//! Preference keys and tie resolution.
//!
//! A learner's preference `σ(h'; h)` is only ever consumed through comparisons,
//! so it is represented as a lexicographic key rather than a real number.
//! Equal keys form a tie set; how a tie is resolved is a [`TieBreakPolicy`].

use serde::{Deserialize, Serialize};

/// Lexicographically compared `(tier, dist, subkey)`; lower is more preferred.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PreferenceKey {
    pub tier: u8,
    pub dist: u32,
    pub subkey: i64,
}

impl PreferenceKey {
    pub const fn new(tier: u8, dist: u32, subkey: i64) -> Self {
        PreferenceKey { tier, dist, subkey }
    }

    pub const fn tier(tier: u8) -> Self {
        PreferenceKey { tier, dist: 0, subkey: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum TieBreakPolicy {
    /// Ties are drawn uniformly with a seeded generator.
    SeededRandom { seed: u64 },
    /// Ties resolve to whichever branch maximizes the remaining teaching cost.
    /// Only the worst-case evaluators can honor this.
    Adversarial,
}
