//! Teaching policies.
//!
//! Adaptive teachers observe the learner's current hypothesis every round;
//! non-adaptive ones commit to a sequence computed from `h0` alone and are
//! replayed through [`SequenceTeacher`].

pub mod ada_l;
pub mod ada_r;
pub mod conditions;
pub mod dimension;
pub mod myopic;
pub mod non_l;
pub mod non_r;
pub mod optimal;
pub mod random;
pub mod rank;
pub mod sc;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::class::HypothesisClass;
use crate::error::{Result, TeachError};
use crate::example::LabeledExample;
use crate::lattice::Lattice;
use crate::learner::{derive_seed, LearnerState};
use crate::sim::{TeachingContext, TEACHER_STREAM};
use crate::tworec::TwoRec;

pub trait Teacher<C: HypothesisClass>: Send {
    fn name(&self) -> &'static str;

    /// The next example, or `None` when the teacher has nothing left to show.
    fn next_example(&mut self, ctx: &TeachingContext<C>, state: &LearnerState<C>) -> Result<Option<LabeledExample>>;

    fn box_clone(&self) -> Box<dyn Teacher<C>>;
}

/// Intermediate targets proposed by an oracle, and the one it settles on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult<H> {
    pub candidates: Vec<H>,
    pub selected: H,
}

/// Replays a precomputed sequence.
#[derive(Clone, Debug)]
pub struct SequenceTeacher {
    name: &'static str,
    sequence: Vec<LabeledExample>,
    next: usize,
}

impl SequenceTeacher {
    pub fn new(name: &'static str, sequence: Vec<LabeledExample>) -> Self {
        SequenceTeacher { name, sequence, next: 0 }
    }

    pub fn sequence(&self) -> &[LabeledExample] {
        &self.sequence
    }
}

impl<C: HypothesisClass> Teacher<C> for SequenceTeacher {
    fn name(&self) -> &'static str {
        self.name
    }

    fn next_example(&mut self, _ctx: &TeachingContext<C>, _state: &LearnerState<C>) -> Result<Option<LabeledExample>> {
        let z = self.sequence.get(self.next).copied();
        self.next += 1;
        Ok(z)
    }

    fn box_clone(&self) -> Box<dyn Teacher<C>> {
        Box::new(self.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TeacherKind {
    Sc,
    Rand,
    Myopic,
    AdaR,
    NonR,
    AdaL,
    NonL,
    Optimal,
}

impl TeacherKind {
    pub const ALL: [TeacherKind; 8] = [
        TeacherKind::Sc,
        TeacherKind::Rand,
        TeacherKind::Myopic,
        TeacherKind::AdaR,
        TeacherKind::NonR,
        TeacherKind::AdaL,
        TeacherKind::NonL,
        TeacherKind::Optimal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TeacherKind::Sc => "sc",
            TeacherKind::Rand => "rand",
            TeacherKind::Myopic => "myopic",
            TeacherKind::AdaR => "ada-r",
            TeacherKind::NonR => "non-r",
            TeacherKind::AdaL => "ada-l",
            TeacherKind::NonL => "non-l",
            TeacherKind::Optimal => "optimal",
        }
    }
}

impl fmt::Display for TeacherKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TeacherKind {
    type Err = TeachError;

    fn from_str(s: &str) -> Result<Self> {
        TeacherKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| TeachError::Config(format!("unknown teacher {s:?}")))
    }
}

fn generic_teacher<C: HypothesisClass>(kind: TeacherKind, ctx: &TeachingContext<C>, seed: u64) -> Result<Box<dyn Teacher<C>>> {
    match kind {
        TeacherKind::Sc => Ok(Box::new(sc::SetCoverTeacher::new(ctx)?)),
        TeacherKind::Rand => Ok(Box::new(random::RandomTeacher::new(derive_seed(seed, &[TEACHER_STREAM])))),
        TeacherKind::Myopic => Ok(Box::new(myopic::MyopicTeacher::new(ctx)?)),
        TeacherKind::Optimal => Ok(Box::new(optimal::OptimalTeacher::new(ctx)?)),
        other => Err(TeachError::Config(format!("teacher {other} does not apply to this class"))),
    }
}

/// Builds a 2-Rec teacher; `seed` is the run seed.
pub fn tworec_teacher(kind: TeacherKind, ctx: &TeachingContext<TwoRec>, seed: u64) -> Result<Box<dyn Teacher<TwoRec>>> {
    match kind {
        TeacherKind::AdaR => Ok(Box::new(ada_r::AdaR::new())),
        TeacherKind::NonR => Ok(Box::new(SequenceTeacher::new("non-r", non_r::build_non_r(ctx.class.side(), &ctx.h0, &ctx.target)?))),
        _ => generic_teacher(kind, ctx, seed),
    }
}

/// Builds a Lattice teacher; `seed` is the run seed.
pub fn lattice_teacher(kind: TeacherKind, ctx: &TeachingContext<Lattice>, seed: u64) -> Result<Box<dyn Teacher<Lattice>>> {
    match kind {
        TeacherKind::AdaL => Ok(Box::new(ada_l::AdaL)),
        TeacherKind::NonL => Ok(Box::new(SequenceTeacher::new("non-l", non_l::build_non_l(&ctx.class, ctx.h0, ctx.target)?))),
        _ => generic_teacher(kind, ctx, seed),
    }
}
