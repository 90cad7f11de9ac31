use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::class::HypothesisClass;
use crate::error::Result;
use crate::example::LabeledExample;
use crate::learner::LearnerState;
use crate::sim::TeachingContext;

use super::Teacher;

/// Uniform over the locations not shown yet.
#[derive(Clone, Debug)]
pub struct RandomTeacher {
    rng: ChaCha8Rng,
}

impl RandomTeacher {
    pub fn new(seed: u64) -> Self {
        RandomTeacher { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl<C: HypothesisClass> Teacher<C> for RandomTeacher {
    fn name(&self) -> &'static str {
        "rand"
    }

    fn next_example(&mut self, ctx: &TeachingContext<C>, state: &LearnerState<C>) -> Result<Option<LabeledExample>> {
        let cells = ctx.unshown_cells(state);
        if cells.is_empty() {
            return Ok(None);
        }
        let cell = cells[self.rng.gen_range(0..cells.len())];
        Ok(Some(ctx.label(cell)))
    }

    fn box_clone(&self) -> Box<dyn Teacher<C>> {
        Box::new(self.clone())
    }
}
