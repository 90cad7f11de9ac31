//! The 2-Rec class: one rectangle, or two rectangles separated by at least one
//! empty row or column, on an `n`x`n` grid.

mod geometry;
pub mod scenario;
mod search;

pub use geometry::{all_rects, dist_e, enumerate_hypotheses, Rect, Subclass, TwoRecHypothesis};
pub use scenario::{sample_pair, sample_pair_seeded, strip_pair, ScenarioKind};
pub use search::Constraints;

use serde::{Deserialize, Serialize};

use crate::class::HypothesisClass;
use crate::example::{Cell, LabeledExample};
use crate::preference::PreferenceKey;

/// Largest side length whose class is enumerated by default.
pub const DEFAULT_ENUMERATION_CAP: usize = 8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoRecConfig {
    /// Break equal edge-move counts by total edge displacement.
    #[serde(default)]
    pub l1_secondary: bool,
    /// From a shortcut hypothesis, rank overlapping single rectangles ahead of
    /// other two-rectangle hypotheses.
    #[serde(default)]
    pub overlap_outranks_h2: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoRec {
    n: usize,
    config: TwoRecConfig,
    enumeration_cap: usize,
}

impl TwoRec {
    pub fn new(n: usize) -> Self {
        TwoRec { n, config: TwoRecConfig::default(), enumeration_cap: DEFAULT_ENUMERATION_CAP }
    }

    pub fn with_config(n: usize, config: TwoRecConfig) -> Self {
        TwoRec { n, config, enumeration_cap: DEFAULT_ENUMERATION_CAP }
    }

    pub fn with_enumeration_cap(mut self, cap: usize) -> Self {
        self.enumeration_cap = cap;
        self
    }

    pub fn config(&self) -> TwoRecConfig {
        self.config
    }

    fn subkey(&self, cand: &TwoRecHypothesis, cur: &TwoRecHypothesis) -> i64 {
        if self.config.l1_secondary {
            geometry::matched_displacement(cand, cur) as i64
        } else {
            0
        }
    }

    /// Tiers of the two-rectangle band and the overlapping-H¹ band when the
    /// current hypothesis is a shortcut.
    pub(crate) fn shortcut_tiers(&self) -> (u8, u8) {
        if self.config.overlap_outranks_h2 {
            (3, 2)
        } else {
            (2, 3)
        }
    }
}

impl HypothesisClass for TwoRec {
    type Hypothesis = TwoRecHypothesis;

    fn side(&self) -> usize {
        self.n
    }

    fn is_valid(&self, h: &TwoRecHypothesis) -> bool {
        h.is_valid(self.n)
    }

    fn label(&self, h: &TwoRecHypothesis, cell: Cell) -> bool {
        h.contains(cell)
    }

    fn preference_key(&self, cand: &TwoRecHypothesis, cur: &TwoRecHypothesis) -> PreferenceKey {
        use TwoRecHypothesis::{One, Two};
        let dist = |a: &TwoRecHypothesis, b: &TwoRecHypothesis| dist_e(a, b).expect("same subclass");
        match cur.subclass() {
            Subclass::H1 => match cand {
                One(_) => PreferenceKey::new(0, dist(cand, cur), self.subkey(cand, cur)),
                Two(..) if cand.is_s1() => PreferenceKey::tier(1),
                Two(..) => PreferenceKey::tier(2),
            },
            Subclass::S1 | Subclass::S2 => {
                if cand == cur {
                    return PreferenceKey::tier(0);
                }
                if cur.delete_targets().contains(cand) {
                    return PreferenceKey::new(1, 0, 0);
                }
                if cur.merge_target().as_ref() == Some(cand) {
                    return PreferenceKey::new(1, 0, 1);
                }
                let (h2_tier, overlap_tier) = self.shortcut_tiers();
                match cand {
                    Two(..) => PreferenceKey::new(h2_tier, dist(cand, cur), self.subkey(cand, cur)),
                    One(r) if cur.overlaps_rect(r) => PreferenceKey::tier(overlap_tier),
                    One(_) => PreferenceKey::tier(4),
                }
            }
            Subclass::H2Other => match cand {
                Two(..) => PreferenceKey::new(0, dist(cand, cur), self.subkey(cand, cur)),
                One(_) => PreferenceKey::tier(1),
            },
        }
    }

    fn enumerate(&self) -> Vec<TwoRecHypothesis> {
        enumerate_hypotheses(self.n)
    }

    fn enumeration_allowed(&self) -> bool {
        self.n <= self.enumeration_cap
    }

    fn structured_choice_set(&self, cur: &TwoRecHypothesis, examples: &[LabeledExample]) -> Vec<TwoRecHypothesis> {
        let cons = Constraints::new(self.n, examples);
        search::choice_set(self, cur, &cons)
    }

    fn count_preferred(
        &self,
        cur: &TwoRecHypothesis,
        examples: &[LabeledExample],
        threshold: PreferenceKey,
        cap: usize,
    ) -> usize {
        let cons = Constraints::new(self.n, examples);
        search::preferred(self, cur, &cons, threshold, cap).len()
    }
}

impl TwoRec {
    /// Consistent hypotheses with key at most `threshold`, or `None` once more
    /// than `limit` are found.
    pub fn preferred_list(
        &self,
        cur: &TwoRecHypothesis,
        examples: &[LabeledExample],
        threshold: PreferenceKey,
        limit: usize,
    ) -> Option<Vec<TwoRecHypothesis>> {
        let cons = Constraints::new(self.n, examples);
        let found = search::preferred(self, cur, &cons, threshold, limit.saturating_add(1));
        (found.len() <= limit).then_some(found)
    }
}
