//! The hypothesis-class contract shared by 2-Rec and Lattice, and the
//! enumerated class table that backs explicit version spaces.

use rustc_hash::FxHashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Result, TeachError};
use crate::example::{all_cells, Cell, LabeledExample};
use crate::preference::PreferenceKey;

/// Dense identifier of a hypothesis inside a [`ClassTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HypothesisId(pub u32);

impl HypothesisId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

pub trait HypothesisClass: Send + Sync + 'static {
    type Hypothesis: Clone
        + Eq
        + Ord
        + Hash
        + Debug
        + Send
        + Sync
        + Serialize
        + DeserializeOwned
        + 'static;

    /// Side length of the square ground set.
    fn side(&self) -> usize;

    fn is_valid(&self, h: &Self::Hypothesis) -> bool;

    /// Label of an in-bounds `cell` under `h`.
    fn label(&self, h: &Self::Hypothesis, cell: Cell) -> bool;

    /// `σ(candidate; current)` as a lexicographic key.
    fn preference_key(&self, candidate: &Self::Hypothesis, current: &Self::Hypothesis)
        -> PreferenceKey;

    /// Every hypothesis of the class in canonical (sorted) order.
    fn enumerate(&self) -> Vec<Self::Hypothesis>;

    /// Whether the default enumeration cap admits an explicit version space.
    fn enumeration_allowed(&self) -> bool;

    /// Minimal-key consistent hypotheses, found without enumerating the class.
    /// Empty when nothing is consistent with `examples`.
    fn structured_choice_set(
        &self,
        current: &Self::Hypothesis,
        examples: &[LabeledExample],
    ) -> Vec<Self::Hypothesis>;

    /// Number of hypotheses consistent with `examples` whose key relative to
    /// `current` is at most `threshold`, saturating at `cap`.
    fn count_preferred(
        &self,
        current: &Self::Hypothesis,
        examples: &[LabeledExample],
        threshold: PreferenceKey,
        cap: usize,
    ) -> usize;

    /// Whether a teacher may show this example at all (Lattice is positive-only).
    fn example_allowed(&self, _example: &LabeledExample) -> bool {
        true
    }

    /// Locations a teacher may draw examples from when teaching `target`.
    fn teachable_cells(&self, _target: &Self::Hypothesis) -> Vec<Cell> {
        all_cells(self.side())
    }
}

/// `h(x_z) = y_z`, with the location checked against the domain.
pub fn consistent<C: HypothesisClass>(
    class: &C,
    h: &C::Hypothesis,
    z: &LabeledExample,
) -> Result<bool> {
    check_bounds(class, z.cell)?;
    Ok(class.label(h, z.cell) == z.label)
}

pub fn check_bounds<C: HypothesisClass>(class: &C, cell: Cell) -> Result<()> {
    if cell.in_bounds(class.side()) {
        Ok(())
    } else {
        Err(TeachError::OutOfBounds { cell, n: class.side() })
    }
}

/// Labels `cell` with the target's label.
pub fn label_example<C: HypothesisClass>(
    class: &C,
    target: &C::Hypothesis,
    cell: Cell,
) -> LabeledExample {
    LabeledExample::new(cell, class.label(target, cell))
}

pub fn consistent_with_all<C: HypothesisClass>(
    class: &C,
    h: &C::Hypothesis,
    examples: &[LabeledExample],
) -> bool {
    examples.iter().all(|z| class.label(h, z.cell) == z.label)
}

/// The enumerated class: hypothesis list, reverse index, and for every cell the
/// set of hypotheses labeling it positive. Built once and shared read-only.
pub struct ClassTable<C: HypothesisClass> {
    class: Arc<C>,
    hypotheses: Vec<C::Hypothesis>,
    index: FxHashMap<C::Hypothesis, HypothesisId>,
    positive: Vec<FixedBitSet>,
}

impl<C: HypothesisClass> ClassTable<C> {
    pub fn build(class: Arc<C>) -> Self {
        let hypotheses = class.enumerate();
        let n = class.side();
        let index = hypotheses
            .iter()
            .enumerate()
            .map(|(i, h)| (h.clone(), HypothesisId(i as u32)))
            .collect();
        let mut positive = vec![FixedBitSet::with_capacity(hypotheses.len()); n * n];
        for (i, h) in hypotheses.iter().enumerate() {
            for (idx, bits) in positive.iter_mut().enumerate() {
                if class.label(h, Cell::from_index(idx, n)) {
                    bits.insert(i);
                }
            }
        }
        ClassTable { class, hypotheses, index, positive }
    }

    pub fn class(&self) -> &Arc<C> {
        &self.class
    }

    pub fn len(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hypotheses.is_empty()
    }

    pub fn hypotheses(&self) -> &[C::Hypothesis] {
        &self.hypotheses
    }

    pub fn get(&self, id: HypothesisId) -> &C::Hypothesis {
        &self.hypotheses[id.index()]
    }

    pub fn id_of(&self, h: &C::Hypothesis) -> Option<HypothesisId> {
        self.index.get(h).copied()
    }

    /// Hypotheses labeling `cell` positive.
    pub fn positive_set(&self, cell: Cell) -> &FixedBitSet {
        &self.positive[cell.index(self.class.side())]
    }

    /// `H({z})`: hypotheses consistent with `z`.
    pub fn consistent_set(&self, z: &LabeledExample) -> FixedBitSet {
        let pos = self.positive_set(z.cell);
        if z.label {
            pos.clone()
        } else {
            let mut all = FixedBitSet::with_capacity(self.len());
            all.insert_range(..);
            all.difference_with(pos);
            all
        }
    }

    pub fn full_set(&self) -> FixedBitSet {
        let mut all = FixedBitSet::with_capacity(self.len());
        all.insert_range(..);
        all
    }
}
