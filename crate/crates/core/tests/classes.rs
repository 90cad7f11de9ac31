use std::sync::Arc;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use teachlab_core::learner::brute_force_choice_set;
use teachlab_core::sim::TeachingContext;
use teachlab_core::tworec::{enumerate_hypotheses, Subclass, TwoRecConfig};
use teachlab_core::{
    Cell, ClassTable, HypothesisClass, LabeledExample, Lattice, LatticeNode, Learner, LearnerState, NoiseModel, Rect,
    TeachError, TwoRec, TwoRecHypothesis, VersionSpace,
};

fn r(x1: usize, y1: usize, x2: usize, y2: usize) -> Rect {
    Rect::new(x1, y1, x2, y2)
}

#[test]
fn current_hypothesis_is_the_unique_minimum() {
    for n in 3..=4 {
        let class = TwoRec::new(n);
        let all = enumerate_hypotheses(n);
        for h in &all {
            let own = class.preference_key(h, h);
            assert!(all.iter().filter(|g| *g != h).all(|g| class.preference_key(g, h) > own), "{h:?}");
        }
    }
}

#[test]
fn delete_target_outranks_moves_within_two_rectangles() {
    let class = TwoRec::new(6);
    let h = TwoRecHypothesis::two(r(0, 0, 2, 2), r(4, 4, 4, 4));
    let delete = TwoRecHypothesis::one(r(0, 0, 2, 2));
    let key = class.preference_key(&delete, &h);
    assert_eq!(key.tier, 1);
    for g in enumerate_hypotheses(6).into_iter().filter(|g| !g.is_one() && *g != h) {
        assert!(class.preference_key(&g, &h) > key, "{g:?}");
    }
}

#[test]
fn merge_target_of_a_split_is_second_tier() {
    let class = TwoRec::new(5);
    let h = TwoRecHypothesis::two(r(0, 0, 1, 3), r(3, 0, 4, 3));
    assert_eq!(h.subclass(), Subclass::S2);
    assert_eq!(class.preference_key(&TwoRecHypothesis::one(r(0, 0, 4, 3)), &h).tier, 1);
}

fn strip_choices(class: TwoRec) -> Vec<TwoRecHypothesis> {
    // A negative in the middle of the lower rectangle of the strip layout.
    let ctx = TeachingContext::auto(
        Arc::new(class),
        TwoRecHypothesis::two(r(0, 0, 6, 0), r(0, 3, 6, 3)),
        TwoRecHypothesis::one(r(0, 3, 6, 3)),
    )
    .unwrap();
    let state = ctx.initial_state().unwrap();
    let (vs, choices) = state.choice_set(LabeledExample::new(Cell::new(3, 0), false)).unwrap();
    assert_eq!(choices, brute_force_choice_set(&*ctx.class, &state.current, vs.iter()));
    choices
}

#[test]
fn negative_in_a_strip_ties_every_shrink() {
    assert_eq!(strip_choices(TwoRec::new(7)).len(), 6);
}

#[test]
fn displacement_tie_break_cuts_the_strip_in_half() {
    let class = TwoRec::with_config(7, TwoRecConfig { l1_secondary: true, ..Default::default() });
    assert_eq!(
        strip_choices(class),
        vec![TwoRecHypothesis::two(r(0, 0, 2, 0), r(0, 3, 6, 3)), TwoRecHypothesis::two(r(0, 3, 6, 3), r(4, 0, 6, 0))]
    );
}

#[test]
fn consistent_example_keeps_the_hypothesis() {
    let ctx = TeachingContext::auto(
        Arc::new(TwoRec::new(5)),
        TwoRecHypothesis::one(r(1, 1, 2, 2)),
        TwoRecHypothesis::one(r(1, 1, 3, 3)),
    )
    .unwrap();
    let state = ctx.initial_state().unwrap();
    let (_, choices) = state.choice_set(LabeledExample::new(Cell::new(1, 1), true)).unwrap();
    assert_eq!(choices, vec![ctx.h0]);
    let next = Learner::new(NoiseModel::new(0.0).unwrap(), 1).step(&state, LabeledExample::new(Cell::new(1, 2), true)).unwrap();
    assert_eq!(next.current, ctx.h0);
}

#[test]
fn contradictory_examples_are_reported() {
    let class = Arc::new(TwoRec::new(4));
    let state = LearnerState::new(TwoRecHypothesis::one(r(0, 0, 1, 1)), VersionSpace::implicit(Arc::clone(&class))).unwrap();
    let (vs, choices) = state.choice_set(LabeledExample::new(Cell::new(3, 3), true)).unwrap();
    let state = state.advance(vs, choices[0]);
    let err = state.choice_set(LabeledExample::new(Cell::new(3, 3), false)).unwrap_err();
    assert!(matches!(err, TeachError::InconsistentTeaching { .. }));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn one_rectangle_learners_stay_one_rectangle(seed in any::<u64>(), n in 3usize..6) {
        let class = Arc::new(TwoRec::new(n));
        let all = enumerate_hypotheses(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ones: Vec<&TwoRecHypothesis> = all.iter().filter(|h| h.is_one()).collect();
        let h = **ones.choose(&mut rng).unwrap();
        let target = *all.choose(&mut rng).unwrap();
        let cell = Cell::new(rng.gen_range(0..n), rng.gen_range(0..n));
        let z = LabeledExample::new(cell, target.contains(cell));
        let state = LearnerState::new(h, VersionSpace::implicit(Arc::clone(&class))).unwrap();
        let (_, choices) = state.choice_set(z).unwrap();
        let one_survives = ones.iter().any(|g| g.contains(cell) == z.label);
        if one_survives {
            prop_assert!(choices.iter().all(|c| c.is_one()));
        }
    }
}

// ---- lattice ----

fn node(i: usize, j: usize) -> LatticeNode {
    LatticeNode::new(i, j)
}

#[test]
fn lattice_keys_follow_distance_then_coordinate_sum() {
    let class = Lattice::new(9);
    let h = node(2, 2);
    assert_eq!(class.preference_key(&node(3, 2), &h).dist, 1);
    assert_eq!(class.preference_key(&node(4, 2), &h).dist, 2);
    assert!(class.preference_key(&node(3, 2), &h) < class.preference_key(&node(4, 2), &h));
    assert_eq!(class.preference_key(&node(3, 2), &h), class.preference_key(&node(2, 3), &h));
    assert!(class.preference_key(&node(1, 2), &h) > class.preference_key(&node(2, 3), &h));
    let h = node(7, 3);
    assert_eq!(class.preference_key(&node(8, 3), &h), class.preference_key(&node(7, 4), &h));
}

#[test]
fn flagging_a_node_removes_only_that_node() {
    let table = Arc::new(ClassTable::build(Arc::new(Lattice::new(3))));
    let vs = VersionSpace::full(Arc::clone(&table));
    let z = Lattice::new(3).positive_example_at(node(0, 0));
    let next = vs.update(z).unwrap();
    assert_eq!(next.size(), Some(8));
    assert!(!next.contains(&node(0, 0)));
}

#[test]
fn flagging_the_target_is_forbidden() {
    let ctx = TeachingContext::auto(Arc::new(Lattice::new(3)), node(0, 0), node(2, 2)).unwrap();
    assert!(ctx.validate(&ctx.class.positive_example_at(node(2, 2))).is_err());
    assert!(ctx.validate(&LabeledExample::new(Cell::new(1, 1), false)).is_err());
    assert!(ctx.validate(&ctx.class.positive_example_at(node(1, 1))).is_ok());
}

#[test]
fn flagging_every_other_node_isolates_the_target() {
    let table = Arc::new(ClassTable::build(Arc::new(Lattice::new(3))));
    let mut vs = VersionSpace::full(Arc::clone(&table));
    for v in table.hypotheses().to_vec() {
        if v != node(1, 2) {
            vs = vs.update(LabeledExample::new(v.cell(), true)).unwrap();
        }
    }
    assert_eq!(vs.iter().copied().collect::<Vec<_>>(), vec![node(1, 2)]);
}

#[test]
fn flagged_start_moves_to_a_larger_neighbor() {
    let ctx = TeachingContext::auto(Arc::new(Lattice::new(9)), node(2, 2), node(7, 7)).unwrap();
    let state = ctx.initial_state().unwrap();
    let z = LabeledExample::new(Cell::new(2, 2), true);
    let (vs, choices) = state.choice_set(z).unwrap();
    assert_eq!(choices, vec![node(2, 3), node(3, 2)]);
    assert_eq!(brute_force_choice_set(&*ctx.class, &node(2, 2), vs.iter()), choices);
    let a = Learner::new(NoiseModel::none(), 5).step(&state, z).unwrap();
    let b = Learner::new(NoiseModel::none(), 5).step(&state, z).unwrap();
    assert_eq!(a.current, b.current);
    assert!(choices.contains(&a.current));
}

#[test]
fn singleton_version_space_chooses_the_target() {
    let table = Arc::new(ClassTable::build(Arc::new(Lattice::new(2))));
    let mut vs = VersionSpace::full(Arc::clone(&table));
    for v in [node(0, 0), node(0, 1)] {
        vs = vs.update(LabeledExample::new(v.cell(), true)).unwrap();
    }
    let state = LearnerState::new(node(1, 0), vs).unwrap();
    let (_, choices) = state.choice_set(LabeledExample::new(Cell::new(1, 0), true)).unwrap();
    assert_eq!(choices, vec![node(1, 1)]);
}

#[test]
fn noise_needs_an_enumerated_version_space() {
    let class = Arc::new(TwoRec::new(12));
    let state = LearnerState::new(TwoRecHypothesis::one(r(0, 0, 1, 1)), VersionSpace::implicit(class)).unwrap();
    let err = Learner::new(NoiseModel::new(1.0).unwrap(), 0).step(&state, LabeledExample::new(Cell::new(5, 5), true)).unwrap_err();
    assert!(matches!(err, TeachError::Unsupported(_)));
    assert!(NoiseModel::new(1.5).is_err());
}
