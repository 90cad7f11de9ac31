use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use teachlab_core::tworec::{all_rects, sample_pair, scenario::sample_hypothesis};
use teachlab_core::{ScenarioKind, TeacherKind, TwoRecHypothesis};
use teachlab_experiments::stats::{linear_fit, mean_cost};
use teachlab_experiments::{csv_string, run_experiment, sample_tworec, strip_phase_cost, trial_seed, ExperimentSpec, ScenarioSpec};

fn spec(text: &str) -> ExperimentSpec {
    ExperimentSpec::from_json(text).unwrap()
}

#[test]
fn seeded_scenarios_reproduce() {
    let s = ScenarioSpec::Random(ScenarioKind::H2to1);
    let a = sample_tworec(&s, 5, trial_seed(1, 5, 0)).unwrap();
    let b = sample_tworec(&s, 5, trial_seed(1, 5, 0)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, sample_tworec(&s, 5, trial_seed(1, 5, 1)).unwrap());
}

#[test]
fn two_rectangle_samples_keep_a_gap() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2000 {
        let (h0, t) = sample_pair(ScenarioKind::H2to2, 5, &mut rng).unwrap();
        for h in [h0, t] {
            let TwoRecHypothesis::Two(a, b) = h else { panic!("{h:?}") };
            assert!(a.x2 + 1 < b.x1 || b.x2 + 1 < a.x1 || a.y2 + 1 < b.y1 || b.y2 + 1 < a.y1);
        }
    }
}

#[test]
fn one_rectangle_samples_are_uniform() {
    // 100 rectangles on 4x4; chi-square with 99 degrees of freedom, mean 99 and
    // standard deviation sqrt(198), must stay within three deviations.
    let rects = all_rects(4);
    assert_eq!(rects.len(), 100);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut counts: HashMap<TwoRecHypothesis, usize> = HashMap::new();
    let draws = 10_000;
    for _ in 0..draws {
        *counts.entry(sample_hypothesis(4, false, &mut rng).unwrap()).or_default() += 1;
    }
    assert_eq!(counts.len(), 100);
    let expected = draws as f64 / 100.0;
    let chi2: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    assert!(chi2 < 99.0 + 3.0 * 198f64.sqrt(), "chi-square {chi2}");
}

#[test]
fn impossible_pairs_are_configuration_errors() {
    let s = ScenarioSpec::Random(ScenarioKind::H2to2);
    assert!(sample_tworec(&s, 2, 0).is_err());
}

#[test]
fn sweep_rows_follow_the_spec_order_and_repeat() {
    let s = spec(r#"{"class":"tworec","scenario":{"random":"H1to2"},"algorithms":["ada-r","rand"],"trials":3,"seed":4,"epsilons":[0.0,0.5],"grid_sizes":[4,5]}"#);
    let out = run_experiment(&s).unwrap();
    assert_eq!(out.rows.len(), 2 * 2 * 2 * 3);
    assert!(out.skipped.is_empty());
    let keys: Vec<_> = out.rows.iter().map(|r| (r.grid_size, r.algorithm, r.epsilon.to_bits(), r.trial)).collect();
    let mut sorted = keys.clone();
    sorted.sort_by_key(|&(g, a, e, t)| (g, a != TeacherKind::AdaR, e, t));
    assert_eq!(keys, sorted);
    for r in &out.rows {
        assert!(r.examples_used <= s.budget_for(r.grid_size));
    }
    assert_eq!(csv_string(&out.rows).unwrap(), csv_string(&run_experiment(&s).unwrap().rows).unwrap());
}

#[test]
fn csv_header_is_fixed() {
    let s = spec(r#"{"class":"lattice","scenario":{"diagonal":{"a":1,"margin":1}},"algorithms":["ada-l"],"trials":1,"grid_sizes":[4]}"#);
    let text = csv_string(&run_experiment(&s).unwrap().rows).unwrap();
    assert_eq!(text.lines().next().unwrap(), "class,scenario,grid_size,algorithm,epsilon,trial,seed,examples_used,reached");
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn cap_violations_skip_cells_and_the_run_continues() {
    let s = spec(r#"{"class":"tworec","scenario":{"random":"H1to1"},"algorithms":["sc","ada-r"],"trials":2,"grid_sizes":[9]}"#);
    let out = run_experiment(&s).unwrap();
    assert_eq!(out.rows.len(), 2);
    assert_eq!(out.skipped.len(), 1);
    assert_eq!(out.skipped[0].algorithm, TeacherKind::Sc);
    assert_eq!(out.skipped[0].trials, 2);
}

#[test]
fn lattice_gap_sweep_separates_the_teachers() {
    let s = spec(
        r#"{"class":"lattice","scenario":{"diagonal":{"a":2,"margin":2}},"algorithms":["ada-l","non-l"],"trials":1,"grid_sizes":[6,7,8,9,10,11,12],"tiebreak":"adversarial"}"#,
    );
    let out = run_experiment(&s).unwrap();
    for n in 6..=12 {
        let ada = mean_cost(&out.rows, n, TeacherKind::AdaL, 0.0).unwrap();
        let non = mean_cost(&out.rows, n, TeacherKind::NonL, 0.0).unwrap();
        assert!(non - ada >= (n - 4) as f64, "n = {n}: {ada} vs {non}");
    }
    assert!(out.rows.iter().all(|r| r.reached));
}

#[test]
fn strip_phase_is_logarithmic_for_the_adaptive_teacher_and_linear_otherwise() {
    let lens = [4usize, 8, 16, 32];
    let ada: Vec<f64> = lens.iter().map(|&n| strip_phase_cost(n, TeacherKind::AdaR).unwrap() as f64).collect();
    let fit = linear_fit(&lens.map(|n| (n as f64).log2()), &ada);
    assert!(fit.r2 > 0.95, "{fit:?} {ada:?}");
    for n in lens {
        assert_eq!(strip_phase_cost(n, TeacherKind::NonR).unwrap(), n);
    }
}

#[test]
fn strip_sweep_reaches_the_target() {
    let s = spec(r#"{"class":"tworec","scenario":"strip","algorithms":["ada-r","non-r"],"trials":1,"grid_sizes":[4,8,16],"tiebreak":"adversarial"}"#);
    let out = run_experiment(&s).unwrap();
    assert_eq!(out.rows.len(), 6);
    assert!(out.rows.iter().all(|r| r.reached), "{:?}", out.rows);
}
