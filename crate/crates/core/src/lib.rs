//! Machine teaching of preference-based learners.
//!
//! A learner keeps a current hypothesis and, after each labeled example, moves
//! to the most preferred hypothesis still consistent with everything it has
//! seen. Teachers choose the examples. This crate holds the two grid classes
//! (2-Rec and Lattice), the learner, the teaching policies, and exact
//! evaluators for small instances.

pub mod class;
pub mod error;
pub mod example;
pub mod finite;
pub mod lattice;
pub mod learner;
pub mod optimal;
pub mod preference;
pub mod sim;
pub mod teachers;
pub mod trace;
pub mod tworec;
pub mod version_space;

pub use class::{ClassTable, HypothesisClass, HypothesisId};
pub use error::{Result, TeachError};
pub use example::{Cell, LabeledExample};
pub use lattice::{Lattice, LatticeNode, TieRule};
pub use learner::{Learner, LearnerState, NoiseModel};
pub use preference::{PreferenceKey, TieBreakPolicy};
pub use sim::{RunConfig, TeachingContext};
pub use teachers::{Teacher, TeacherKind};
pub use trace::{Outcome, TeachingTrace, TraceStep};
pub use tworec::{Rect, ScenarioKind, TwoRec, TwoRecHypothesis};
pub use version_space::VersionSpace;
