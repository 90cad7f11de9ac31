//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use teachlab_core::class::{label_example, ClassTable, HypothesisClass};
use teachlab_core::finite::{subset_removal_examples, uniform_key, FiniteProblem};
use teachlab_core::learner::brute_force_choice_set;
use teachlab_core::optimal::{dstar, nonadaptive_opt, Limits};
use teachlab_core::sim::{run, tworec_budget, worst_case_run};
use teachlab_core::teachers::conditions::{check_thm2_conditions, DEFAULT_SUBSET_CAP};
use teachlab_core::teachers::myopic::{greedy_worst_case, worst_case_gains};
use teachlab_core::teachers::non_l::build_non_l;
use teachlab_core::teachers::{lattice_teacher, tworec_teacher, TeacherKind};
use teachlab_core::tworec::TwoRecConfig;
use teachlab_core::{
    Lattice, LatticeNode, LearnerState, NoiseModel, PreferenceKey, RunConfig, TieRule, TwoRec, VersionSpace,
};
use teachlab_experiments::stats::{linear_fit, mean, mean_cost};
use teachlab_experiments::{
    detached_area, run_experiment, sample_tworec, strip_phase_cost, trial_seed, ExperimentSpec,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Runs a criterion, failing it as well when it exceeds its time limit.
fn criterion(name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = elapsed < limit;
    let pass = out.pass && in_time;
    let timing = if in_time { String::new() } else { format!("; over the {limit:?} limit") };
    println!("{} {name}: {} [{elapsed:.2?}{timing}]", if pass { "PASS" } else { "FAIL" }, out.detail);
    pass
}

fn lattice_gap() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for n in 6..=12 {
        let (a, b) = (2, n - 2);
        let class = Arc::new(Lattice::new(n));
        let ctx = teachlab_core::TeachingContext::new(class, None, LatticeNode::new(a, a), LatticeNode::new(b, b)).unwrap();
        let ada = lattice_teacher(TeacherKind::AdaL, &ctx, 0).unwrap();
        let trace = worst_case_run(&ctx, &*ada, teachlab_core::sim::lattice_budget(n)).unwrap();
        let non = build_non_l(&ctx.class, ctx.h0, ctx.target).unwrap().len();
        let gap = b - a;
        ok &= trace.reached() && trace.examples_used() <= 3 * gap && non >= 4 * gap;
        lines.push(format!("n={n}: ada-l {} <= {}, non-l {} >= {}", trace.examples_used(), 3 * gap, non, 4 * gap));
    }
    check(ok, lines.join("; "))
}

fn strip_gap() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for len in [4usize, 8, 16, 32] {
        let bound = (len as f64).log2().ceil() as usize + 1;
        let ada = strip_phase_cost(len, TeacherKind::AdaR).unwrap();
        let non = strip_phase_cost(len, TeacherKind::NonR).unwrap();
        ok &= ada <= bound && non == len;
        lines.push(format!("|r2|={len}: ada-r {ada} <= {bound}, non-r {non} = {len}"));
    }
    check(ok, lines.join("; "))
}

fn probe<C: HypothesisClass>(table: &Arc<ClassTable<C>>, rng: &mut ChaCha8Rng) -> bool {
    let class = table.class();
    let target = table.hypotheses().choose(rng).unwrap().clone();
    let mut cells = class.teachable_cells(&target);
    cells.shuffle(rng);
    let k = rng.gen_range(0..cells.len());
    let mut vs = VersionSpace::full(Arc::clone(table));
    for &c in &cells[..k] {
        vs = vs.update(label_example(class.as_ref(), &target, c)).unwrap();
    }
    let members: Vec<_> = vs.iter().cloned().collect();
    let current = members.choose(rng).unwrap().clone();
    let z = label_example(class.as_ref(), &target, cells[k]);
    let state = LearnerState::new(current.clone(), vs).unwrap();
    let (next, structured) = state.choice_set(z).unwrap();
    structured == brute_force_choice_set(class.as_ref(), &current, next.iter())
}

fn learner_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let configs = [
        TwoRecConfig::default(),
        TwoRecConfig { l1_secondary: true, overlap_outranks_h2: false },
        TwoRecConfig { l1_secondary: false, overlap_outranks_h2: true },
        TwoRecConfig { l1_secondary: true, overlap_outranks_h2: true },
    ];
    let tworec: Vec<_> = (2..=6)
        .flat_map(|n| configs.map(|c| Arc::new(ClassTable::build(Arc::new(TwoRec::with_config(n, c))))))
        .collect();
    let lattice: Vec<_> = (2..=6)
        .flat_map(|n| {
            [TieRule::CoordinateSum, TieRule::Lexicographic, TieRule::None]
                .map(|t| Arc::new(ClassTable::build(Arc::new(Lattice::with_tie_rule(n, t)))))
        })
        .collect();
    let mut bad = [0usize; 2];
    for _ in 0..1000 {
        let t = tworec.choose(&mut rng).unwrap();
        bad[0] += !probe(t, &mut rng) as usize;
        let l = lattice.choose(&mut rng).unwrap();
        bad[1] += !probe(l, &mut rng) as usize;
    }
    check(bad == [0, 0], format!("1000 probes each, mismatches 2-Rec {} lattice {}", bad[0], bad[1]))
}

/// Random state-independent instance of at most 10 hypotheses.
fn global_instance(rng: &mut ChaCha8Rng, uniform: bool) -> (FiniteProblem, usize) {
    let size = rng.gen_range(3..=10);
    let target = rng.gen_range(0..size);
    let mut examples: Vec<FixedBitSet> = (0..rng.gen_range(2..=8))
        .map(|_| {
            let mut e = FixedBitSet::with_capacity(size);
            for h in 0..size {
                if h == target || rng.gen_bool(0.6) {
                    e.insert(h);
                }
            }
            e
        })
        .collect();
    for h in (0..size).filter(|&h| h != target) {
        if examples.iter().all(|e| e.contains(h)) {
            examples.choose_mut(rng).unwrap().set(h, false);
        }
    }
    let ranks: Vec<u32> = (0..size).map(|_| rng.gen_range(0..4)).collect();
    let p = if uniform {
        FiniteProblem::global(size, examples, target, uniform_key).unwrap()
    } else {
        FiniteProblem::global(size, examples, target, |h| PreferenceKey::new(0, ranks[h], 0)).unwrap()
    };
    let h0 = rng.gen_range(0..size);
    (p, h0)
}

fn state_independent_optimum() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut costs = Vec::new();
    let mut ok = true;
    for i in 0..20 {
        let (p, h0) = global_instance(&mut rng, i % 2 == 0);
        let a = dstar(&p, h0, &p.full(), Limits::ADAPTIVE).unwrap();
        let b = nonadaptive_opt(&p, h0, &p.full(), Limits::NONADAPTIVE).unwrap();
        ok &= a == b;
        costs.push(format!("{a}/{b}"));
    }
    check(ok, format!("adaptive/non-adaptive optima on 20 instances: {}", costs.join(" ")))
}

/// Subset-removal instance of at most 12 hypotheses that passes both conditions.
fn condition_instance(rng: &mut ChaCha8Rng) -> FiniteProblem {
    loop {
        let size = rng.gen_range(4..=12);
        let target = rng.gen_range(0..size);
        let k = if size <= 8 { rng.gen_range(1..=2) } else { 1 };
        let examples = subset_removal_examples(size, target, k);
        let p = if rng.gen_bool(0.5) {
            let ranks: Vec<u32> = (0..size).map(|_| rng.gen_range(0..4)).collect();
            FiniteProblem::global(size, examples, target, |h| PreferenceKey::new(0, ranks[h], 0)).unwrap()
        } else {
            let ranks: Vec<u32> = (0..size * size).map(|_| rng.gen_range(0..3)).collect();
            FiniteProblem::new(size, examples, target, |cand, cur| PreferenceKey::new(0, ranks[cur * size + cand], 0)).unwrap()
        };
        let report = check_thm2_conditions(&p, DEFAULT_SUBSET_CAP).unwrap();
        if report.cond1 && report.cond2 {
            return p;
        }
    }
}

fn myopic_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut ok = true;
    let mut lines = Vec::new();
    for _ in 0..20 {
        let p = condition_instance(&mut rng);
        let h0 = rng.gen_range(0..p.size());
        let full = p.full();
        let opt = dstar(&p, h0, &full, Limits::ADAPTIVE).unwrap();
        let greedy = greedy_worst_case(&p, h0, &full).unwrap();
        let rank = p.rank(h0, &full).unwrap() as f64;
        let bound = 2.0 * (rank.log2() + 1.0) * opt as f64;
        ok &= greedy as f64 <= bound;
        lines.push(format!("{greedy}<={bound:.1}"));
    }
    check(ok, format!("greedy vs bound on 20 instances: {}", lines.join(" ")))
}

fn myopic_failure() -> Outcome {
    let class = Arc::new(Lattice::with_tie_rule(4, TieRule::None));
    let ctx = teachlab_core::TeachingContext::auto(class, LatticeNode::new(1, 1), LatticeNode::new(3, 3)).unwrap();
    let state = ctx.initial_state().unwrap();
    let gains = worst_case_gains(&ctx, &state).unwrap();
    let best = gains.iter().map(|g| g.1).max().unwrap();
    let ada = lattice_teacher(TeacherKind::AdaL, &ctx, 0).unwrap();
    let trace = worst_case_run(&ctx, &*ada, teachlab_core::sim::lattice_budget(4)).unwrap();
    let dist = ctx.h0.l1(ctx.target);
    let ok = best <= 1 && trace.reached() && trace.examples_used() <= 3 * dist;
    check(ok, format!("largest worst-case gain {best} over {} examples; ada-l {} <= {}", gains.len(), trace.examples_used(), 3 * dist))
}

fn simulation_trends() -> Outcome {
    let spec = ExperimentSpec::from_json(
        r#"{"class":"tworec","scenario":{"random":"H2to1"},"algorithms":["ada-r","non-r","sc"],"trials":50,"seed":0,"grid_sizes":[5,6,7,8]}"#,
    )
    .unwrap();
    let out = run_experiment(&spec).unwrap();
    if !out.skipped.is_empty() {
        return check(false, format!("skipped cells: {:?}", out.skipped));
    }
    let mut ok = true;
    let mut lines = Vec::new();
    let (mut area, mut ada, mut non) = (Vec::new(), Vec::new(), Vec::new());
    for n in spec.grid_sizes.clone() {
        let a = mean_cost(&out.rows, n, TeacherKind::AdaR, 0.0).unwrap();
        let b = mean_cost(&out.rows, n, TeacherKind::NonR, 0.0).unwrap();
        let c = mean_cost(&out.rows, n, TeacherKind::Sc, 0.0).unwrap();
        let r2: Vec<f64> = (0..spec.trials)
            .map(|t| {
                let (h0, target) = sample_tworec(&spec.scenario, n, trial_seed(spec.seed, n, t)).unwrap();
                detached_area(&h0, &target) as f64
            })
            .collect();
        ok &= a < b && b < c;
        lines.push(format!("{n}x{n}: |r2| {:.2}, ada-r {a:.2} < non-r {b:.2} < sc {c:.2}", mean(&r2)));
        area.push(mean(&r2));
        ada.push(a);
        non.push(b);
    }
    let non_fit = linear_fit(&area, &non);
    let ada_lin = linear_fit(&area, &ada);
    let ada_log = linear_fit(&area.iter().map(|x| x.log2()).collect::<Vec<_>>(), &ada);
    ok &= non_fit.slope >= 1.0 && ada_lin.slope < 1.0 && ada_log.r2 > 0.9;
    lines.push(format!(
        "non-r slope vs |r2| {:.2} >= 1; ada-r slope vs |r2| {:.2} < 1; ada-r log fit R2 {:.3} > 0.9",
        non_fit.slope, ada_lin.slope, ada_log.r2
    ));
    check(ok, lines.join("; "))
}

fn noise_robustness() -> Outcome {
    let spec = ExperimentSpec::from_json(
        r#"{"class":"tworec","scenario":{"random":"H2to1"},"algorithms":["ada-r","sc"],"trials":50,"seed":0,"epsilons":[0.0,0.3,0.6,0.9],"grid_sizes":[6]}"#,
    )
    .unwrap();
    let out = run_experiment(&spec).unwrap();
    if !out.skipped.is_empty() {
        return check(false, format!("skipped cells: {:?}", out.skipped));
    }
    let mut ok = true;
    let mut lines = Vec::new();
    for &eps in &spec.epsilons {
        let a = mean_cost(&out.rows, 6, TeacherKind::AdaR, eps).unwrap();
        let s = mean_cost(&out.rows, 6, TeacherKind::Sc, eps).unwrap();
        ok &= a <= s;
        lines.push(format!("eps {eps}: ada-r {a:.2} {} sc {s:.2}", if a <= s { "<=" } else { ">" }));
    }
    // Noise level zero must match the noise-free simulator run for run.
    let class = Arc::new(TwoRec::new(6));
    let table = Arc::new(ClassTable::build(Arc::clone(&class)));
    let mut same = true;
    for row in out.rows.iter().filter(|r| r.epsilon == 0.0) {
        let (h0, target) = sample_tworec(&spec.scenario, 6, row.seed).unwrap();
        let ctx = teachlab_core::TeachingContext::new(Arc::clone(&class), Some(Arc::clone(&table)), h0, target).unwrap();
        let mut teacher = tworec_teacher(row.algorithm, &ctx, row.seed).unwrap();
        let cfg = RunConfig { budget: tworec_budget(6), noise: NoiseModel::none(), seed: row.seed };
        let trace = run(&ctx, &mut *teacher, &cfg).unwrap();
        same &= trace.examples_used() == row.examples_used && trace.reached() == row.reached;
    }
    ok &= same;
    lines.push(format!("noise level 0 matches noise-free runs: {same}"));
    check(ok, lines.join("; "))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(
        &spec,
        r#"{"class":"tworec","scenario":{"random":"H2to1"},"algorithms":["ada-r","non-r","sc","rand"],"trials":4,"seed":9,"epsilons":[0.0,0.5],"grid_sizes":[4,5]}"#,
    )
    .unwrap();
    let lattice_spec = dir.path().join("lattice.json");
    std::fs::write(
        &lattice_spec,
        r#"{"class":"lattice","scenario":{"diagonal":{"a":1,"margin":1}},"algorithms":["ada-l","non-l","rand"],"trials":3,"seed":2,"epsilons":[0.0,0.4],"grid_sizes":[4,5]}"#,
    )
    .unwrap();
    let bin = env!("CARGO_BIN_EXE_teachlab");
    let commands: Vec<(String, Vec<String>, Option<&str>)> = vec![
        ("simulate tworec".into(), vec!["simulate".into(), "--spec".into(), spec.display().to_string(), "--out".into()], Some("csv")),
        ("simulate lattice".into(), vec!["simulate".into(), "--spec".into(), lattice_spec.display().to_string(), "--out".into()], Some("csv")),
        ("trace ada-r".into(), args("trace --class tworec --grid 6 --teacher ada-r --seed 5 --epsilon 0.3"), None),
        ("trace rand".into(), args("trace --class tworec --grid 5 --teacher rand --seed 8 --scenario H1to2"), None),
        ("trace ada-l".into(), args("trace --class lattice --grid 8 --teacher ada-l --adversarial"), None),
        ("optimal".into(), args(r#"optimal --class lattice --grid 3 --h0 {"node":[0,0]} --target {"node":[2,2]} --json"#), None),
        ("check-conditions".into(), args(r#"check-conditions --class lattice --grid 3 --h0 {"node":[0,0]} --target {"node":[2,2]}"#), None),
    ];
    let mut ok = true;
    let mut lines = Vec::new();
    for (name, argv, out_ext) in commands {
        let mut outputs = Vec::new();
        for i in 0..2 {
            let mut argv = argv.clone();
            let out_path = out_ext.map(|ext| dir.path().join(format!("{}-{i}.{ext}", name.replace(' ', "-"))));
            if let Some(p) = &out_path {
                argv.push(p.display().to_string());
            }
            let res = Command::new(bin).args(&argv).output().unwrap();
            if !res.status.success() {
                return check(false, format!("{name} failed: {}", String::from_utf8_lossy(&res.stderr)));
            }
            outputs.push(match out_path {
                Some(p) => std::fs::read(p).unwrap(),
                None => res.stdout,
            });
        }
        let same = outputs[0] == outputs[1] && !outputs[0].is_empty();
        ok &= same;
        lines.push(format!("{name} {}", if same { "identical" } else { "differs" }));
    }
    check(ok, lines.join("; "))
}

fn args(s: &str) -> Vec<String> {
    s.split(' ').map(String::from).collect()
}

fn main() {
    let results = [
        criterion("lattice adaptivity gap", Duration::from_secs(1), lattice_gap),
        criterion("2-Rec strip adaptivity gap", Duration::from_secs(5), strip_gap),
        criterion("learner structured search equals brute force", Duration::from_secs(60), learner_equivalence),
        criterion("state-independent optima coincide", Duration::from_secs(120), state_independent_optimum),
        criterion("myopic teacher within the log bound", Duration::from_secs(120), myopic_bound),
        criterion("myopic failure instance", Duration::from_secs(60), myopic_failure),
        criterion("simulation trends over grid size", Duration::from_secs(600), simulation_trends),
        criterion("noise robustness", Duration::from_secs(600), noise_robustness),
        criterion("CLI determinism", Duration::from_secs(600), determinism),
    ];
    let failed = results.iter().filter(|&&p| !p).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
