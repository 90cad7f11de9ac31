//! Exact teaching costs for small instances.
//!
//! All costs are worst case over the learner's ties: whenever the learner has
//! several equally preferred options, the adversary picks.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TeachError};
use crate::finite::FiniteProblem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_hypotheses: usize,
    pub max_examples: usize,
    /// Largest cost searched before giving up.
    pub max_cost: usize,
}

impl Limits {
    pub const ADAPTIVE: Limits = Limits { max_hypotheses: 15, max_examples: usize::MAX, max_cost: 64 };
    pub const NONADAPTIVE: Limits = Limits { max_hypotheses: 12, max_examples: 12, max_cost: 64 };

    fn check(&self, p: &FiniteProblem, what: &str) -> Result<()> {
        if p.size() > self.max_hypotheses || p.examples().len() > self.max_examples {
            return Err(TeachError::Unsupported(format!(
                "{what} is limited to {} hypotheses and {} examples (got {} and {})",
                self.max_hypotheses,
                self.max_examples,
                p.size(),
                p.examples().len()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Default)]
struct Bounds {
    /// Known infeasible below this cost.
    lower: usize,
    /// Known feasible at this cost.
    upper: Option<usize>,
}

struct Minimax<'a> {
    p: &'a FiniteProblem,
    memo: HashMap<(usize, FixedBitSet), Bounds>,
}

impl Minimax<'_> {
    fn feasible(&mut self, h: usize, vs: &FixedBitSet, k: usize) -> bool {
        if h == self.p.target() {
            return true;
        }
        if k == 0 {
            return false;
        }
        let key = (h, vs.clone());
        let b = self.memo.get(&key).copied().unwrap_or_default();
        if b.upper.is_some_and(|u| u <= k) {
            return true;
        }
        if b.lower > k {
            return false;
        }
        let mut ok = false;
        for z in 0..self.p.examples().len() {
            let next = self.p.restrict(vs, z);
            let choices = self.p.choice_set(h, &next);
            if next == *vs && choices == [h] {
                continue;
            }
            if choices.iter().all(|&c| self.feasible(c, &next, k - 1)) {
                ok = true;
                break;
            }
        }
        let entry = self.memo.entry(key).or_default();
        if ok {
            entry.upper = Some(entry.upper.map_or(k, |u| u.min(k)));
        } else {
            entry.lower = entry.lower.max(k + 1);
        }
        ok
    }
}

/// Optimal adaptive teaching cost from `(h0, vs)`.
pub fn dstar(p: &FiniteProblem, h0: usize, vs: &FixedBitSet, limits: Limits) -> Result<usize> {
    limits.check(p, "the adaptive optimum")?;
    check_members(p, h0, vs)?;
    let mut m = Minimax { p, memo: HashMap::new() };
    (0..=limits.max_cost)
        .find(|&k| m.feasible(h0, vs, k))
        .ok_or_else(|| TeachError::Unsupported(format!("no teaching plan within {} examples", limits.max_cost)))
}

/// The example an optimal adaptive teacher shows from `(h, vs)`, lowest index
/// among optimal ones; `None` when `h` is the target.
pub fn optimal_example(p: &FiniteProblem, h: usize, vs: &FixedBitSet, limits: Limits) -> Result<Option<usize>> {
    limits.check(p, "the adaptive optimum")?;
    check_members(p, h, vs)?;
    if h == p.target() {
        return Ok(None);
    }
    let mut m = Minimax { p, memo: HashMap::new() };
    let k = (1..=limits.max_cost)
        .find(|&k| m.feasible(h, vs, k))
        .ok_or_else(|| TeachError::Unsupported(format!("no teaching plan within {} examples", limits.max_cost)))?;
    for z in 0..p.examples().len() {
        let next = p.restrict(vs, z);
        let choices = p.choice_set(h, &next);
        if next == *vs && choices == [h] {
            continue;
        }
        if choices.iter().all(|&c| m.feasible(c, &next, k - 1)) {
            return Ok(Some(z));
        }
    }
    unreachable!("a feasible plan starts with some example")
}

fn check_members(p: &FiniteProblem, h: usize, vs: &FixedBitSet) -> Result<()> {
    if !vs.contains(h) || !vs.contains(p.target()) {
        return Err(TeachError::Domain("current hypothesis and target must be in the version space".into()));
    }
    Ok(())
}

struct SequenceSearch<'a> {
    p: &'a FiniteProblem,
    /// Largest remaining length known to fail from a state.
    failed: HashMap<(FixedBitSet, FixedBitSet), usize>,
}

impl SequenceSearch<'_> {
    /// Learner positions that have not hit the target, after showing `z`.
    fn advance(&self, vs: &FixedBitSet, active: &FixedBitSet, z: usize) -> (FixedBitSet, FixedBitSet) {
        let next = self.p.restrict(vs, z);
        let mut moved = FixedBitSet::with_capacity(self.p.size());
        for a in active.ones() {
            for c in self.p.choice_set(a, &next) {
                moved.insert(c);
            }
        }
        moved.set(self.p.target(), false);
        (next, moved)
    }

    fn solvable(&mut self, vs: &FixedBitSet, active: &FixedBitSet, k: usize) -> bool {
        if active.is_clear() {
            return true;
        }
        if k == 0 {
            return false;
        }
        let key = (vs.clone(), active.clone());
        if self.failed.get(&key).is_some_and(|&f| f >= k) {
            return false;
        }
        for z in 0..self.p.examples().len() {
            let (next, moved) = self.advance(vs, active, z);
            if next == *vs && moved == *active {
                continue;
            }
            if self.solvable(&next, &moved, k - 1) {
                return true;
            }
        }
        let f = self.failed.entry(key).or_insert(0);
        *f = (*f).max(k);
        false
    }
}

/// Shortest fixed example sequence after which every tie resolution has
/// passed through the target.
pub fn nonadaptive_opt(p: &FiniteProblem, h0: usize, vs: &FixedBitSet, limits: Limits) -> Result<usize> {
    limits.check(p, "the non-adaptive optimum")?;
    check_members(p, h0, vs)?;
    let mut active = FixedBitSet::with_capacity(p.size());
    if h0 != p.target() {
        active.insert(h0);
    }
    let mut s = SequenceSearch { p, failed: HashMap::new() };
    (0..=limits.max_cost)
        .find(|&k| s.solvable(vs, &active, k))
        .ok_or_else(|| TeachError::Unsupported(format!("no sequence within {} examples", limits.max_cost)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub adaptive_opt: usize,
    pub nonadaptive_opt: usize,
    pub greedy: usize,
    pub notes: Vec<String>,
}

/// Exact adaptive and non-adaptive optima plus the myopic greedy cost.
pub fn cost_report(p: &FiniteProblem, h0: usize, adaptive: Limits, nonadaptive: Limits) -> Result<CostReport> {
    let vs = p.full();
    let adaptive_opt = dstar(p, h0, &vs, adaptive)?;
    let nonadaptive_opt = nonadaptive_opt(p, h0, &vs, nonadaptive)?;
    let greedy = crate::teachers::myopic::greedy_worst_case(p, h0, &vs)?;
    let mut notes = vec!["costs are worst case over learner ties".to_string()];
    if p.is_state_independent() {
        notes.push("preference is state-independent".to_string());
    }
    Ok(CostReport { adaptive_opt, nonadaptive_opt, greedy, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{subset_removal_examples, uniform_key};

    #[test]
    fn singleton_class_costs_nothing() {
        let p = FiniteProblem::global(1, subset_removal_examples(1, 0, 1), 0, uniform_key).unwrap();
        assert_eq!(dstar(&p, 0, &p.full(), Limits::ADAPTIVE).unwrap(), 0);
        assert_eq!(nonadaptive_opt(&p, 0, &p.full(), Limits::NONADAPTIVE).unwrap(), 0);
    }

    #[test]
    fn one_removal_per_example_costs_m_minus_one() {
        for m in 2..=7 {
            let p = FiniteProblem::global(m, subset_removal_examples(m, 0, 1), 0, uniform_key).unwrap();
            assert_eq!(dstar(&p, 1, &p.full(), Limits::ADAPTIVE).unwrap(), m - 1, "m = {m}");
        }
    }
}
