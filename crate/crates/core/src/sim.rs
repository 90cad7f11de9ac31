//! Running a teacher against the simulated learner.

use rustc_hash::FxHashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::class::{ClassTable, HypothesisClass};
use crate::error::{Result, TeachError};
use crate::example::{Cell, LabeledExample};
use crate::learner::{derive_seed, Learner, LearnerState, NoiseModel};
use crate::teachers::Teacher;
use crate::trace::{Outcome, TeachingTrace, TraceStep};
use crate::version_space::VersionSpace;

/// Everything a teacher may know about an instance besides the learner state.
pub struct TeachingContext<C: HypothesisClass> {
    pub class: Arc<C>,
    pub table: Option<Arc<ClassTable<C>>>,
    pub h0: C::Hypothesis,
    pub target: C::Hypothesis,
}

impl<C: HypothesisClass> Clone for TeachingContext<C> {
    fn clone(&self) -> Self {
        TeachingContext {
            class: Arc::clone(&self.class),
            table: self.table.clone(),
            h0: self.h0.clone(),
            target: self.target.clone(),
        }
    }
}

impl<C: HypothesisClass> TeachingContext<C> {
    /// Validates both endpoints. Pass a table to get an explicit version space.
    pub fn new(class: Arc<C>, table: Option<Arc<ClassTable<C>>>, h0: C::Hypothesis, target: C::Hypothesis) -> Result<Self> {
        for h in [&h0, &target] {
            if !class.is_valid(h) {
                return Err(TeachError::Domain(format!("{h:?} is not a valid hypothesis")));
            }
        }
        Ok(TeachingContext { class, table, h0, target })
    }

    /// Builds the class table when the class allows enumeration.
    pub fn auto(class: Arc<C>, h0: C::Hypothesis, target: C::Hypothesis) -> Result<Self> {
        let table = class.enumeration_allowed().then(|| Arc::new(ClassTable::build(Arc::clone(&class))));
        Self::new(class, table, h0, target)
    }

    pub fn initial_state(&self) -> Result<LearnerState<C>> {
        let vs = match &self.table {
            Some(t) => VersionSpace::full(Arc::clone(t)),
            None => VersionSpace::implicit(Arc::clone(&self.class)),
        };
        LearnerState::new(self.h0.clone(), vs)
    }

    pub fn label(&self, cell: Cell) -> LabeledExample {
        LabeledExample::new(cell, self.class.label(&self.target, cell))
    }

    /// Teachable, allowed, not-yet-shown locations in lexicographic order.
    pub fn unshown_cells(&self, state: &LearnerState<C>) -> Vec<Cell> {
        self.class
            .teachable_cells(&self.target)
            .into_iter()
            .filter(|&c| !state.version_space.shown(c) && self.class.example_allowed(&self.label(c)))
            .collect()
    }

    /// Rejects examples a teacher must never emit.
    pub fn validate(&self, z: &LabeledExample) -> Result<()> {
        crate::class::check_bounds(&*self.class, z.cell)?;
        if self.class.label(&self.target, z.cell) != z.label {
            return Err(TeachError::TargetInconsistentExample { cell: z.cell });
        }
        if !self.class.example_allowed(z) {
            return Err(TeachError::ForbiddenExample { cell: z.cell, reason: "the class does not admit this label" });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub budget: usize,
    pub noise: NoiseModel,
    pub seed: u64,
}

/// Stream id of the learner's generator under a run seed.
pub const LEARNER_STREAM: u64 = 1;
/// Stream id of the teacher's generator under a run seed.
pub const TEACHER_STREAM: u64 = 2;
/// Stream id for sampling the `(h0, target)` pair under a run seed.
pub const SCENARIO_STREAM: u64 = 3;

/// Default budget for 2-Rec: 60% of the cells.
pub fn tworec_budget(n: usize) -> usize {
    n * n * 6 / 10
}

/// Default budget for Lattice: `2n²` examples.
pub fn lattice_budget(n: usize) -> usize {
    2 * n * n
}

/// One seeded run; ties and noise draw from the learner stream of `cfg.seed`.
pub fn run<C: HypothesisClass>(
    ctx: &TeachingContext<C>,
    teacher: &mut dyn Teacher<C>,
    cfg: &RunConfig,
) -> Result<TeachingTrace<C::Hypothesis>> {
    let mut learner = Learner::new(cfg.noise, derive_seed(cfg.seed, &[LEARNER_STREAM]));
    let mut state = ctx.initial_state()?;
    let mut steps = Vec::new();
    loop {
        if state.current == ctx.target {
            return Ok(TeachingTrace { steps, outcome: Outcome::Reached });
        }
        if steps.len() >= cfg.budget {
            return Ok(TeachingTrace { steps, outcome: Outcome::BudgetExhausted });
        }
        let Some(z) = teacher.next_example(ctx, &state)? else {
            return Ok(TeachingTrace { steps, outcome: Outcome::TeacherExhausted });
        };
        ctx.validate(&z)?;
        let next = learner.step(&state, z)?;
        debug_assert!(next.version_space.contains(&ctx.target));
        steps.push(TraceStep {
            t: state.t,
            example: z,
            learner: next.current.clone(),
            vs_size: next.version_space.size(),
        });
        state = next;
    }
}

/// The costliest trace over every resolution of the learner's ties.
/// Non-reaching traces count as costlier than any reaching one.
///
/// Teachers are assumed to act as a function of the step index and the
/// learner state, so branches meeting in the same state share one search.
pub fn worst_case_run<C: HypothesisClass>(
    ctx: &TeachingContext<C>,
    teacher: &dyn Teacher<C>,
    budget: usize,
) -> Result<TeachingTrace<C::Hypothesis>> {
    let state = ctx.initial_state()?;
    let mut memo = FxHashMap::default();
    let (mut steps, outcome) = worst_from(ctx, teacher.box_clone(), state, budget, &mut memo)?;
    steps.reverse();
    Ok(TeachingTrace { steps, outcome })
}

type MemoKey<H> = (usize, H, Vec<LabeledExample>);
/// Remaining steps in reverse order, and how the run ends.
type Suffix<H> = (Vec<TraceStep<H>>, Outcome);

fn worst_from<C: HypothesisClass>(
    ctx: &TeachingContext<C>,
    mut teacher: Box<dyn Teacher<C>>,
    state: LearnerState<C>,
    budget: usize,
    memo: &mut FxHashMap<MemoKey<C::Hypothesis>, Suffix<C::Hypothesis>>,
) -> Result<Suffix<C::Hypothesis>> {
    if state.current == ctx.target {
        return Ok((Vec::new(), Outcome::Reached));
    }
    if state.t >= budget {
        return Ok((Vec::new(), Outcome::BudgetExhausted));
    }
    let mut shown = state.version_space.examples().to_vec();
    shown.sort();
    let key = (state.t, state.current.clone(), shown);
    if let Some(hit) = memo.get(&key) {
        return Ok(hit.clone());
    }
    let Some(z) = teacher.next_example(ctx, &state)? else {
        return Ok((Vec::new(), Outcome::TeacherExhausted));
    };
    ctx.validate(&z)?;
    let (next_vs, choices) = state.choice_set(z)?;
    let mut worst: Option<Suffix<C::Hypothesis>> = None;
    for h in choices {
        let next = state.advance(next_vs.clone(), h.clone());
        let step = TraceStep { t: state.t, example: z, learner: h, vs_size: next.version_space.size() };
        let (mut rest, outcome) = worst_from(ctx, teacher.box_clone(), next, budget, memo)?;
        rest.push(step);
        let cost = |s: &Suffix<C::Hypothesis>| (s.1 != Outcome::Reached, s.0.len());
        let branch = (rest, outcome);
        if worst.as_ref().is_none_or(|w| cost(&branch) > cost(w)) {
            worst = Some(branch);
        }
    }
    let worst = worst.expect("choice sets are non-empty");
    memo.insert(key, worst.clone());
    Ok(worst)
}
