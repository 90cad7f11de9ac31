//! The myopic teacher: each round, the example minimizing the worst-case rank
//! of the target after the learner moves.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::class::HypothesisClass;
use crate::error::{Result, TeachError};
use crate::example::LabeledExample;
use crate::finite::FiniteProblem;
use crate::learner::LearnerState;
use crate::sim::TeachingContext;

use super::rank::rank_tilde_d;
use super::Teacher;

#[derive(Clone, Debug)]
pub struct MyopicTeacher;

impl MyopicTeacher {
    pub fn new<C: HypothesisClass>(ctx: &TeachingContext<C>) -> Result<Self> {
        if ctx.table.is_none() {
            return Err(TeachError::Unsupported("the myopic teacher needs an enumerated version space".into()));
        }
        Ok(MyopicTeacher)
    }
}

/// For every candidate example: the worst rank after the learner responds,
/// and whether the learner is guaranteed to stay put.
pub fn scored_candidates<C: HypothesisClass>(
    ctx: &TeachingContext<C>,
    state: &LearnerState<C>,
) -> Result<Vec<(LabeledExample, usize, bool)>> {
    let mut out = Vec::new();
    for cell in ctx.unshown_cells(state) {
        let z = ctx.label(cell);
        let (next, choices) = state.choice_set(z)?;
        if next.size() == state.version_space.size() && choices == [state.current.clone()] {
            continue;
        }
        let mut worst = 0;
        for h in &choices {
            worst = worst.max(rank_tilde_d(&next, h, &ctx.target)?);
        }
        let stays = choices == [state.current.clone()];
        out.push((z, worst, stays));
    }
    Ok(out)
}

/// Worst-case reduction of the rank for each candidate example.
pub fn worst_case_gains<C: HypothesisClass>(ctx: &TeachingContext<C>, state: &LearnerState<C>) -> Result<Vec<(LabeledExample, i64)>> {
    let now = rank_tilde_d(&state.version_space, &state.current, &ctx.target)? as i64;
    Ok(scored_candidates(ctx, state)?.into_iter().map(|(z, worst, _)| (z, now - worst as i64)).collect())
}

impl<C: HypothesisClass> Teacher<C> for MyopicTeacher {
    fn name(&self) -> &'static str {
        "myopic"
    }

    fn next_example(&mut self, ctx: &TeachingContext<C>, state: &LearnerState<C>) -> Result<Option<LabeledExample>> {
        let best = scored_candidates(ctx, state)?
            .into_iter()
            .min_by_key(|&(z, worst, stays)| (worst, !stays, z.cell));
        Ok(best.map(|(z, _, _)| z))
    }

    fn box_clone(&self) -> Box<dyn Teacher<C>> {
        Box::new(self.clone())
    }
}

/// The myopic choice on a finite instance; `None` when nothing changes the state.
pub fn greedy_choice(p: &FiniteProblem, h: usize, vs: &FixedBitSet) -> Option<usize> {
    let mut best: Option<((usize, bool), usize)> = None;
    for z in 0..p.examples().len() {
        let next = p.restrict(vs, z);
        let choices = p.choice_set(h, &next);
        let stays = choices == [h];
        if next == *vs && stays {
            continue;
        }
        let worst = choices.iter().map(|&c| p.preferred_set(c, &next).count_ones(..)).max().unwrap_or(0);
        let score = (worst, !stays);
        if best.is_none_or(|(s, _)| score < s) {
            best = Some((score, z));
        }
    }
    best.map(|(_, z)| z)
}

/// Worst-case number of examples the myopic teacher needs from `(h0, vs)`.
pub fn greedy_worst_case(p: &FiniteProblem, h0: usize, vs: &FixedBitSet) -> Result<usize> {
    fn go(p: &FiniteProblem, h: usize, vs: &FixedBitSet, depth: usize, memo: &mut HashMap<(usize, FixedBitSet), usize>) -> Result<usize> {
        if h == p.target() {
            return Ok(0);
        }
        if depth > 4 * p.size() + 8 {
            return Err(TeachError::Domain("the myopic teacher does not terminate on this instance".into()));
        }
        if let Some(&c) = memo.get(&(h, vs.clone())) {
            return Ok(c);
        }
        let z = greedy_choice(p, h, vs)
            .ok_or_else(|| TeachError::Domain("no example changes the learner state".into()))?;
        let next = p.restrict(vs, z);
        let mut worst = 0;
        for c in p.choice_set(h, &next) {
            worst = worst.max(go(p, c, &next, depth + 1, memo)?);
        }
        memo.insert((h, vs.clone()), worst + 1);
        Ok(worst + 1)
    }
    go(p, h0, vs, 0, &mut HashMap::new())
}
