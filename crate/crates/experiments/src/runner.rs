use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use teachlab_core::learner::derive_seed;
use teachlab_core::sim::{run, worst_case_run};
use teachlab_core::teachers::{lattice_teacher, tworec_teacher, Teacher};
use teachlab_core::tworec::{sample_pair_seeded, strip_pair};
use teachlab_core::{
    ClassTable, HypothesisClass, Lattice, LatticeNode, NoiseModel, Result, RunConfig, TeachError, TeacherKind, TeachingContext,
    TwoRec, TwoRecHypothesis,
};

use crate::spec::{ClassName, ExperimentSpec, ScenarioSpec, TieBreakMode};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub class: String,
    pub scenario: String,
    pub grid_size: usize,
    pub algorithm: TeacherKind,
    pub epsilon: f64,
    pub trial: usize,
    pub seed: u64,
    pub examples_used: usize,
    pub reached: bool,
}

/// A sweep cell that produced no rows for some trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkippedCell {
    pub grid_size: usize,
    pub algorithm: TeacherKind,
    pub epsilon: f64,
    pub trials: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExperimentOutput {
    pub rows: Vec<ResultRow>,
    pub skipped: Vec<SkippedCell>,
}

/// The seed shared by every algorithm and noise level of one trial.
pub fn trial_seed(master: u64, grid: usize, trial: usize) -> u64 {
    derive_seed(master, &[grid as u64, trial as u64])
}

/// The `(h0, target)` pair of a 2-Rec trial.
pub fn sample_tworec(scenario: &ScenarioSpec, grid: usize, seed: u64) -> Result<(TwoRecHypothesis, TwoRecHypothesis)> {
    match scenario {
        ScenarioSpec::Random(kind) => sample_pair_seeded(*kind, grid, seed),
        ScenarioSpec::Strip => strip_pair(grid),
        ScenarioSpec::Diagonal { .. } => Err(TeachError::Config("diagonal scenarios are for the lattice".into())),
    }
}

/// The `(h0, target)` pair of a lattice scenario.
pub fn lattice_pair(scenario: &ScenarioSpec, grid: usize) -> Result<(LatticeNode, LatticeNode)> {
    let ScenarioSpec::Diagonal { a, margin } = *scenario else {
        return Err(TeachError::Config("the lattice only has diagonal scenarios".into()));
    };
    if margin == 0 || margin > grid || grid - margin <= a {
        return Err(TeachError::Config(format!("no diagonal from ({a}, {a}) with margin {margin} on a {grid}x{grid} lattice")));
    }
    Ok((LatticeNode::new(a, a), LatticeNode::new(grid - margin, grid - margin)))
}

/// Total area of the initial rectangles that miss the target.
pub fn detached_area(h0: &TwoRecHypothesis, target: &TwoRecHypothesis) -> usize {
    h0.rects().iter().filter(|r| !target.overlaps_rect(r)).map(|r| r.area()).sum()
}

type TeacherFactory<C> = fn(TeacherKind, &TeachingContext<C>, u64) -> Result<Box<dyn Teacher<C>>>;

struct Sweep<'a, C: HypothesisClass> {
    spec: &'a ExperimentSpec,
    grid: usize,
    class: Arc<C>,
    table: Option<Arc<ClassTable<C>>>,
    factory: TeacherFactory<C>,
}

impl<C> Sweep<'_, C>
where
    C: HypothesisClass + Send + Sync,
    C::Hypothesis: Send + Sync,
{
    fn cell(&self, ctx: &TeachingContext<C>, kind: TeacherKind, epsilon: f64, seed: u64) -> Result<(usize, bool)> {
        let budget = self.spec.budget_for(self.grid);
        let mut teacher = (self.factory)(kind, ctx, seed)?;
        let trace = match self.spec.tiebreak {
            TieBreakMode::Seeded => run(ctx, &mut *teacher, &RunConfig { budget, noise: NoiseModel::new(epsilon)?, seed })?,
            TieBreakMode::Adversarial => {
                if kind == TeacherKind::Rand {
                    return Err(TeachError::Unsupported("adversarial evaluation needs a deterministic teacher".into()));
                }
                worst_case_run(ctx, &*teacher, budget)?
            }
        };
        Ok((trace.examples_used(), trace.reached()))
    }

    /// Results of one trial in (algorithm, noise level) order.
    fn trial(&self, seed: u64, pair: Result<(C::Hypothesis, C::Hypothesis)>) -> Vec<Result<(usize, bool)>> {
        let cells = self.spec.algorithms.len() * self.spec.epsilons.len();
        let ctx = pair.and_then(|(h0, target)| TeachingContext::new(Arc::clone(&self.class), self.table.clone(), h0, target));
        let ctx = match ctx {
            Ok(ctx) => ctx,
            Err(e) => return vec![Err(e); cells],
        };
        let mut out = Vec::with_capacity(cells);
        for &kind in &self.spec.algorithms {
            for &eps in &self.spec.epsilons {
                out.push(self.cell(&ctx, kind, eps, seed));
            }
        }
        out
    }

    fn run(&self, pair: impl Fn(u64) -> Result<(C::Hypothesis, C::Hypothesis)> + Sync, out: &mut ExperimentOutput) {
        let spec = self.spec;
        let results: Vec<Vec<Result<(usize, bool)>>> = (0..spec.trials)
            .into_par_iter()
            .map(|trial| {
                let seed = trial_seed(spec.seed, self.grid, trial);
                self.trial(seed, pair(seed))
            })
            .collect();
        let mut cell = 0;
        for &algorithm in &spec.algorithms {
            for &epsilon in &spec.epsilons {
                let mut failed: Option<SkippedCell> = None;
                for (trial, per_trial) in results.iter().enumerate() {
                    match &per_trial[cell] {
                        Ok((examples_used, reached)) => out.rows.push(ResultRow {
                            class: spec.class.as_str().to_string(),
                            scenario: spec.scenario.label(),
                            grid_size: self.grid,
                            algorithm,
                            epsilon,
                            trial,
                            seed: trial_seed(spec.seed, self.grid, trial),
                            examples_used: *examples_used,
                            reached: *reached,
                        }),
                        Err(e) => {
                            let skip = failed.get_or_insert_with(|| SkippedCell {
                                grid_size: self.grid,
                                algorithm,
                                epsilon,
                                trials: 0,
                                reason: e.to_string(),
                            });
                            skip.trials += 1;
                        }
                    }
                }
                out.skipped.extend(failed);
                cell += 1;
            }
        }
    }
}

fn needs_table(spec: &ExperimentSpec) -> bool {
    spec.epsilons.iter().any(|&e| e > 0.0)
        || spec.algorithms.iter().any(|k| matches!(k, TeacherKind::Sc | TeacherKind::Myopic | TeacherKind::Optimal))
}

fn table_for<C: HypothesisClass>(spec: &ExperimentSpec, class: &Arc<C>) -> Option<Arc<ClassTable<C>>> {
    (needs_table(spec) && class.enumeration_allowed()).then(|| Arc::new(ClassTable::build(Arc::clone(class))))
}

/// The full sweep: grid sizes, then algorithms, then noise levels, then
/// trials, in spec order. Cells that cannot run are listed in `skipped`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    spec.validate()?;
    let mut out = ExperimentOutput::default();
    for &grid in &spec.grid_sizes {
        match spec.class {
            ClassName::Tworec => {
                let class = Arc::new(TwoRec::new(grid));
                let sweep = Sweep { spec, grid, table: table_for(spec, &class), class, factory: tworec_teacher };
                sweep.run(|seed| sample_tworec(&spec.scenario, grid, seed), &mut out);
            }
            ClassName::Lattice => {
                let class = Arc::new(Lattice::new(grid));
                let sweep = Sweep { spec, grid, table: table_for(spec, &class), class, factory: lattice_teacher };
                sweep.run(|_| lattice_pair(&spec.scenario, grid), &mut out);
            }
        }
    }
    Ok(out)
}

pub fn write_csv<W: Write>(rows: &[ResultRow], w: W) -> Result<()> {
    let io = |e: csv::Error| TeachError::Config(format!("writing CSV: {e}"));
    let mut writer = csv::Writer::from_writer(w);
    for row in rows {
        writer.serialize(row).map_err(io)?;
    }
    writer.flush().map_err(|e| TeachError::Config(format!("writing CSV: {e}")))
}

pub fn csv_string(rows: &[ResultRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
}

/// Negatives shown inside the strip before the learner drops it, under the
/// costliest tie resolution.
pub fn strip_phase_cost(len: usize, kind: TeacherKind) -> Result<usize> {
    let (h0, target) = strip_pair(len)?;
    let strip = h0.rects().into_iter().find(|r| !target.overlaps_rect(r)).expect("the strip misses the target");
    let ctx = TeachingContext::new(Arc::new(TwoRec::new(len)), None, h0, target)?;
    let teacher = tworec_teacher(kind, &ctx, 0)?;
    let trace = worst_case_run(&ctx, &*teacher, teachlab_core::sim::tworec_budget(len))?;
    if !trace.reached() {
        return Err(TeachError::Domain(format!("{kind} did not finish the strip of {len}")));
    }
    Ok(trace.examples().filter(|z| !z.label && strip.contains(z.cell)).count())
}
