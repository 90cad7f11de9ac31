use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use teachlab_core::finite::FiniteProblem;
use teachlab_core::optimal::{cost_report, Limits};
use teachlab_core::sim::{lattice_budget, run, tworec_budget, worst_case_run};
use teachlab_core::teachers::conditions::{check_thm2_conditions, DEFAULT_SUBSET_CAP};
use teachlab_core::teachers::{lattice_teacher, tworec_teacher, Teacher};
use teachlab_core::tworec::sample_pair_seeded;
use teachlab_core::{
    ClassTable, HypothesisClass, Lattice, LatticeNode, NoiseModel, RunConfig, ScenarioKind, TeachError, TeacherKind,
    TeachingContext, TwoRec, TwoRecHypothesis,
};
use teachlab_experiments::{csv_string, lattice_pair, run_experiment, ExperimentSpec, ScenarioSpec};
use teachlab_service::store::Store;
use teachlab_service::{AppState, DATA_DIR_ENV};

#[derive(Parser)]
#[command(name = "teachlab", about = "Teaching preference-based learners on grid hypothesis classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Tworec,
    Lattice,
}

#[derive(clap::Args)]
struct Instance {
    #[arg(long, value_enum)]
    class: ClassArg,
    #[arg(long)]
    grid: usize,
    /// Initial hypothesis as JSON; sampled or defaulted when absent.
    #[arg(long)]
    h0: Option<String>,
    /// Target hypothesis as JSON.
    #[arg(long)]
    target: Option<String>,
    /// 2-Rec subclasses to sample from when no hypotheses are given.
    #[arg(long, default_value = "H2to1")]
    scenario: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment spec and write one CSV row per run.
    Simulate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact adaptive and non-adaptive optima for a small instance.
    Optimal {
        #[command(flatten)]
        instance: Instance,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Check the two sufficient conditions for the myopic teacher.
    CheckConditions {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
        subset_cap: usize,
    },
    /// Run one teacher and print the trace as JSON lines.
    Trace {
        #[command(flatten)]
        instance: Instance,
        #[arg(long)]
        teacher: String,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        /// Follow the costliest tie resolution instead of seeded draws.
        #[arg(long)]
        adversarial: bool,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serve interactive sessions over HTTP.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Session store; defaults to $TEACHLAB_DATA_DIR, else memory only.
        #[arg(long)]
        data_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

type CliResult<T> = Result<T, String>;

fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| format!("malformed {what}: {e}"))
}

fn tworec_instance(inst: &Instance) -> CliResult<(TwoRecHypothesis, TwoRecHypothesis)> {
    match (&inst.h0, &inst.target) {
        (Some(h0), Some(t)) => Ok((parse_json(h0, "h0")?, parse_json(t, "target")?)),
        (None, None) => {
            let kind: ScenarioKind = inst.scenario.parse().map_err(|e: TeachError| e.to_string())?;
            sample_pair_seeded(kind, inst.grid, inst.seed).map_err(|e| e.to_string())
        }
        _ => Err("give both --h0 and --target, or neither".into()),
    }
}

fn lattice_instance(inst: &Instance) -> CliResult<(LatticeNode, LatticeNode)> {
    match (&inst.h0, &inst.target) {
        (Some(h0), Some(t)) => Ok((parse_json(h0, "h0")?, parse_json(t, "target")?)),
        (None, None) => lattice_pair(&ScenarioSpec::Diagonal { a: 2, margin: 2 }, inst.grid).map_err(|e| e.to_string()),
        _ => Err("give both --h0 and --target, or neither".into()),
    }
}

fn finite<C: HypothesisClass>(class: C, h0: &C::Hypothesis, target: &C::Hypothesis) -> CliResult<(FiniteProblem, usize)> {
    let class = Arc::new(class);
    if !class.enumeration_allowed() {
        return Err("the class is too large to enumerate".into());
    }
    let table = ClassTable::build(class);
    let p = FiniteProblem::from_table(&table, target).map_err(|e| e.to_string())?;
    let h = table.id_of(h0).ok_or_else(|| format!("{h0:?} is not in the class"))?.index();
    Ok((p, h))
}

fn problem(inst: &Instance) -> CliResult<(FiniteProblem, usize)> {
    match inst.class {
        ClassArg::Tworec => {
            let (h0, t) = tworec_instance(inst)?;
            finite(TwoRec::new(inst.grid), &h0, &t)
        }
        ClassArg::Lattice => {
            let (h0, t) = lattice_instance(inst)?;
            finite(Lattice::new(inst.grid), &h0, &t)
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn trace_jsonl<C: HypothesisClass>(
    ctx: TeachingContext<C>,
    make: fn(TeacherKind, &TeachingContext<C>, u64) -> teachlab_core::Result<Box<dyn Teacher<C>>>,
    kind: TeacherKind,
    cfg: RunConfig,
    adversarial: bool,
) -> CliResult<String> {
    let mut teacher = make(kind, &ctx, cfg.seed).map_err(|e| e.to_string())?;
    let trace = if adversarial {
        if cfg.noise.epsilon > 0.0 || kind == TeacherKind::Rand {
            return Err("adversarial traces need a deterministic teacher and a noise-free learner".into());
        }
        worst_case_run(&ctx, &*teacher, cfg.budget)
    } else {
        run(&ctx, &mut *teacher, &cfg)
    }
    .map_err(|e| e.to_string())?;
    Ok(trace.to_jsonl())
}

fn write_out(out: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("writing {}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn execute(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Simulate { spec, out } => {
            let text = fs::read_to_string(&spec).map_err(|e| format!("reading {}: {e}", spec.display()))?;
            let spec = ExperimentSpec::from_json(&text).map_err(|e| e.to_string())?;
            let result = run_experiment(&spec).map_err(|e| e.to_string())?;
            for skip in &result.skipped {
                eprintln!(
                    "skipped grid {} {} epsilon {} ({} trials): {}",
                    skip.grid_size, skip.algorithm, skip.epsilon, skip.trials, skip.reason
                );
            }
            write_out(Some(&out), &csv_string(&result.rows).map_err(|e| e.to_string())?)
        }
        Command::Optimal { instance, json } => {
            let (p, h0) = problem(&instance)?;
            let report = cost_report(&p, h0, Limits::ADAPTIVE, Limits::NONADAPTIVE).map_err(|e| e.to_string())?;
            if json {
                println!("{}", to_json(&report));
            } else {
                println!("adaptive optimum: {}", report.adaptive_opt);
                println!("non-adaptive optimum: {}", report.nonadaptive_opt);
                println!("myopic greedy: {}", report.greedy);
                for note in &report.notes {
                    println!("note: {note}");
                }
            }
            Ok(())
        }
        Command::CheckConditions { instance, subset_cap } => {
            let (p, _) = problem(&instance)?;
            let report = check_thm2_conditions(&p, subset_cap).map_err(|e| e.to_string())?;
            println!("{}", to_json(&report));
            Ok(())
        }
        Command::Trace { instance, teacher, epsilon, adversarial, budget, out } => {
            let kind: TeacherKind = teacher.parse().map_err(|e: TeachError| e.to_string())?;
            let noise = NoiseModel::new(epsilon).map_err(|e| e.to_string())?;
            let seed = instance.seed;
            let text = match instance.class {
                ClassArg::Tworec => {
                    let (h0, t) = tworec_instance(&instance)?;
                    let ctx = TeachingContext::auto(Arc::new(TwoRec::new(instance.grid)), h0, t).map_err(|e| e.to_string())?;
                    let budget = budget.unwrap_or(tworec_budget(instance.grid));
                    trace_jsonl(ctx, tworec_teacher, kind, RunConfig { budget, noise, seed }, adversarial)?
                }
                ClassArg::Lattice => {
                    let (h0, t) = lattice_instance(&instance)?;
                    let ctx = TeachingContext::auto(Arc::new(Lattice::new(instance.grid)), h0, t).map_err(|e| e.to_string())?;
                    let budget = budget.unwrap_or(lattice_budget(instance.grid));
                    trace_jsonl(ctx, lattice_teacher, kind, RunConfig { budget, noise, seed }, adversarial)?
                }
            };
            write_out(out.as_ref(), &text)
        }
        Command::Serve { port, data_dir, seed } => {
            let dir = data_dir.or_else(|| std::env::var_os(DATA_DIR_ENV).map(PathBuf::from));
            let store = match dir {
                Some(d) => Store::on_disk(d).map_err(|e| e.to_string())?,
                None => Store::memory(),
            };
            let app = AppState::open(store, seed).map_err(|e| e.to_string())?;
            let addr = SocketAddr::from(([127, 0, 0, 1], port));
            let rt = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
            eprintln!("listening on http://{addr}");
            rt.block_on(teachlab_service::serve(addr, app)).map_err(|e| e.to_string())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
