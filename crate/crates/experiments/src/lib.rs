//! Seeded simulation sweeps over grid sizes, teachers and noise levels.

pub mod runner;
pub mod spec;
pub mod stats;

pub use runner::{
    csv_string, detached_area, lattice_pair, run_experiment, sample_tworec, strip_phase_cost, trial_seed, write_csv, ExperimentOutput,
    ResultRow, SkippedCell,
};
pub use spec::{BudgetRule, ClassName, ExperimentSpec, ScenarioSpec, TieBreakMode};
