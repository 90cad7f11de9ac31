use crate::class::HypothesisClass;
use crate::error::{Result, TeachError};
use crate::example::{Cell, LabeledExample};
use crate::finite::FiniteProblem;
use crate::learner::LearnerState;
use crate::optimal::{optimal_example, Limits};
use crate::sim::TeachingContext;

use super::Teacher;

/// Largest class the optimal teacher accepts.
pub const MAX_HYPOTHESES: usize = 25;

/// Plays a minimax-optimal example every round. Tiny classes only.
#[derive(Clone, Debug)]
pub struct OptimalTeacher {
    problem: FiniteProblem,
    cells: Vec<Cell>,
}

impl OptimalTeacher {
    pub fn new<C: HypothesisClass>(ctx: &TeachingContext<C>) -> Result<Self> {
        let Some(table) = &ctx.table else {
            return Err(TeachError::Unsupported("the optimal teacher needs an enumerated class".into()));
        };
        if table.len() > MAX_HYPOTHESES {
            return Err(TeachError::Unsupported(format!(
                "the optimal teacher is limited to {MAX_HYPOTHESES} hypotheses, this class has {}",
                table.len()
            )));
        }
        let problem = FiniteProblem::from_table(table, &ctx.target)?;
        let cells = ctx
            .class
            .teachable_cells(&ctx.target)
            .into_iter()
            .filter(|&c| ctx.class.example_allowed(&ctx.label(c)))
            .collect();
        Ok(OptimalTeacher { problem, cells })
    }
}

impl<C: HypothesisClass> Teacher<C> for OptimalTeacher {
    fn name(&self) -> &'static str {
        "optimal"
    }

    fn next_example(&mut self, ctx: &TeachingContext<C>, state: &LearnerState<C>) -> Result<Option<LabeledExample>> {
        let vs = &state.version_space;
        let (Some(members), Some(table)) = (vs.members(), vs.table()) else {
            return Err(TeachError::Unsupported("the optimal teacher needs an enumerated version space".into()));
        };
        let h = table.id_of(&state.current).expect("current hypothesis is enumerated").index();
        let limits = Limits { max_hypotheses: MAX_HYPOTHESES, ..Limits::ADAPTIVE };
        Ok(optimal_example(&self.problem, h, members, limits)?.map(|z| ctx.label(self.cells[z])))
    }

    fn box_clone(&self) -> Box<dyn Teacher<C>> {
        Box::new(self.clone())
    }
}
