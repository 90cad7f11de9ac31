//! Small teaching instances given by explicit tables: hypotheses are indices,
//! every example is its consistent set, and the preference is a key matrix.
//! The exact evaluators and the condition checks operate on this form.

use fixedbitset::FixedBitSet;

use crate::class::{ClassTable, HypothesisClass};
use crate::error::{Result, TeachError};
use crate::example::LabeledExample;
use crate::preference::PreferenceKey;

#[derive(Clone, Debug)]
pub struct FiniteProblem {
    size: usize,
    /// `H({z})` for every available example, each containing the target.
    examples: Vec<FixedBitSet>,
    target: usize,
    /// `keys[cur * size + cand]`.
    keys: Vec<PreferenceKey>,
    state_independent: bool,
}

impl FiniteProblem {
    pub fn new(
        size: usize,
        examples: Vec<FixedBitSet>,
        target: usize,
        key: impl Fn(usize, usize) -> PreferenceKey,
    ) -> Result<Self> {
        if target >= size {
            return Err(TeachError::Domain(format!("target {target} outside a class of {size}")));
        }
        if let Some(i) = examples.iter().position(|e| !e.contains(target)) {
            return Err(TeachError::Domain(format!("example {i} is inconsistent with the target")));
        }
        let mut keys = Vec::with_capacity(size * size);
        for cur in 0..size {
            for cand in 0..size {
                keys.push(key(cand, cur));
            }
        }
        let state_independent = (0..size).all(|cand| (1..size).all(|cur| keys[cur * size + cand] == keys[cand]));
        Ok(FiniteProblem { size, examples, target, keys, state_independent })
    }

    /// A problem whose preference ignores the current hypothesis.
    pub fn global(size: usize, examples: Vec<FixedBitSet>, target: usize, key: impl Fn(usize) -> PreferenceKey) -> Result<Self> {
        Self::new(size, examples, target, |cand, _| key(cand))
    }

    /// The target-consistent examples of an enumerated class.
    pub fn from_table<C: HypothesisClass>(table: &ClassTable<C>, target: &C::Hypothesis) -> Result<Self> {
        let class = table.class();
        let t = table
            .id_of(target)
            .ok_or_else(|| TeachError::Domain(format!("{target:?} is not in the class")))?
            .index();
        let mut examples = Vec::new();
        for cell in class.teachable_cells(target) {
            let z = LabeledExample::new(cell, class.label(target, cell));
            if class.example_allowed(&z) {
                examples.push(table.consistent_set(&z));
            }
        }
        let hs = table.hypotheses();
        Self::new(hs.len(), examples, t, |cand, cur| class.preference_key(&hs[cand], &hs[cur]))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn examples(&self) -> &[FixedBitSet] {
        &self.examples
    }

    pub fn is_state_independent(&self) -> bool {
        self.state_independent
    }

    pub fn key(&self, cand: usize, cur: usize) -> PreferenceKey {
        self.keys[cur * self.size + cand]
    }

    pub fn full(&self) -> FixedBitSet {
        let mut all = FixedBitSet::with_capacity(self.size);
        all.insert_range(..);
        all
    }

    /// `H̄({z})` over the whole class.
    pub fn removed_by(&self, z: usize) -> FixedBitSet {
        let mut out = self.full();
        out.difference_with(&self.examples[z]);
        out
    }

    /// Minimal-key members of `vs` relative to `cur`, ascending.
    pub fn choice_set(&self, cur: usize, vs: &FixedBitSet) -> Vec<usize> {
        let best = vs.ones().map(|h| self.key(h, cur)).min();
        vs.ones().filter(|&h| Some(self.key(h, cur)) == best).collect()
    }

    /// `{h' ∈ vs : σ(h'; h) ≤ σ(h*; h)}`.
    pub fn preferred_set(&self, h: usize, vs: &FixedBitSet) -> FixedBitSet {
        let bound = self.key(self.target, h);
        let mut out = FixedBitSet::with_capacity(self.size);
        for g in vs.ones() {
            if self.key(g, h) <= bound {
                out.insert(g);
            }
        }
        out
    }

    /// The rank heuristic: size of the preferred version space.
    pub fn rank(&self, h: usize, vs: &FixedBitSet) -> Result<usize> {
        if !vs.contains(self.target) {
            return Err(TeachError::Domain("the target is not in the version space".into()));
        }
        Ok(self.preferred_set(h, vs).count_ones(..))
    }

    pub fn restrict(&self, vs: &FixedBitSet, z: usize) -> FixedBitSet {
        let mut out = vs.clone();
        out.intersect_with(&self.examples[z]);
        out
    }
}

/// Uniform preference: every hypothesis equally preferred.
pub fn uniform_key(_cand: usize) -> PreferenceKey {
    PreferenceKey::tier(0)
}

/// Consistent sets for the "remove any subset of at most `k` non-targets"
/// example structure.
pub fn subset_removal_examples(size: usize, target: usize, k: usize) -> Vec<FixedBitSet> {
    let others: Vec<usize> = (0..size).filter(|&h| h != target).collect();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << others.len()) {
        if mask.count_ones() as usize > k {
            continue;
        }
        let mut keep = FixedBitSet::with_capacity(size);
        keep.insert_range(..);
        for (bit, &h) in others.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                keep.remove(h);
            }
        }
        out.push(keep);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_structure_sizes() {
        // 4 non-targets, subsets of size 1 or 2: 4 + 6.
        assert_eq!(subset_removal_examples(5, 0, 2).len(), 10);
    }

    #[test]
    fn uniform_rank_is_version_space_size() {
        let p = FiniteProblem::global(6, subset_removal_examples(6, 2, 1), 2, uniform_key).unwrap();
        assert!(p.is_state_independent());
        assert_eq!(p.rank(0, &p.full()).unwrap(), 6);
    }
}
