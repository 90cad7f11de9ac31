use crate::class::HypothesisClass;
use crate::error::{Result, TeachError};
use crate::example::LabeledExample;
use crate::learner::LearnerState;
use crate::sim::TeachingContext;

use super::Teacher;

/// Greedy set cover: show the example that removes the most hypotheses from
/// the version space, first in lexicographic order on ties.
#[derive(Clone, Debug)]
pub struct SetCoverTeacher;

impl SetCoverTeacher {
    pub fn new<C: HypothesisClass>(ctx: &TeachingContext<C>) -> Result<Self> {
        if ctx.table.is_none() {
            return Err(TeachError::Unsupported("set cover needs an enumerated version space".into()));
        }
        Ok(SetCoverTeacher)
    }
}

/// Hypotheses of the version space that `z` would remove.
pub fn removal_gain<C: HypothesisClass>(state: &LearnerState<C>, z: &LabeledExample) -> Result<usize> {
    let vs = &state.version_space;
    let (Some(members), Some(table)) = (vs.members(), vs.table()) else {
        return Err(TeachError::Unsupported("set cover needs an enumerated version space".into()));
    };
    let positive = members.intersection_count(table.positive_set(z.cell));
    Ok(if z.label { members.count_ones(..) - positive } else { positive })
}

impl<C: HypothesisClass> Teacher<C> for SetCoverTeacher {
    fn name(&self) -> &'static str {
        "sc"
    }

    fn next_example(&mut self, ctx: &TeachingContext<C>, state: &LearnerState<C>) -> Result<Option<LabeledExample>> {
        let mut best: Option<(usize, LabeledExample)> = None;
        for cell in ctx.unshown_cells(state) {
            let z = ctx.label(cell);
            let gain = removal_gain(state, &z)?;
            if best.is_none_or(|(g, _)| gain > g) {
                best = Some((gain, z));
            }
        }
        Ok(best.map(|(_, z)| z))
    }

    fn box_clone(&self) -> Box<dyn Teacher<C>> {
        Box::new(self.clone())
    }
}
