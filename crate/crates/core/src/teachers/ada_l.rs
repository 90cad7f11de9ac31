//! Adaptive lattice teaching: aim the learner at the nearest closer nodes and
//! block every node it could reach first that is not one of them.

use crate::class::HypothesisClass;
use crate::error::Result;
use crate::example::LabeledExample;
use crate::lattice::{Lattice, LatticeNode};
use crate::learner::LearnerState;
use crate::sim::TeachingContext;
use crate::teachers::rank::rank_tilde_d;

use super::{OracleResult, Teacher};

/// Surviving nodes at L1 distance `d` from `h_t`, in ascending key order.
fn alive_ring(state: &LearnerState<Lattice>, d: usize) -> Vec<LatticeNode> {
    let class = state.class();
    let h = state.current;
    let mut ring: Vec<LatticeNode> = class.ring(h, d).into_iter().filter(|v| state.version_space.contains(v)).collect();
    ring.sort_by_key(|v| (class.preference_key(v, &h), *v));
    ring
}

/// Nodes strictly closer to the target than `h_t` such that everything the
/// learner ranks at least as high is either equally close or no closer than
/// `h_t`.
pub fn oracle_candidates(state: &LearnerState<Lattice>, target: LatticeNode) -> Vec<LatticeNode> {
    let class = state.class();
    let h = state.current;
    let dt = h.l1(target);
    let mut out = Vec::new();
    let mut closer_dists: Vec<usize> = Vec::new();
    'rings: for d in 0..=2 * class.side() {
        let order = alive_ring(state, d);
        let mut i = 0;
        while i < order.len() {
            let key = class.preference_key(&order[i], &h);
            let group_end = order[i..].iter().position(|v| class.preference_key(v, &h) != key).map_or(order.len(), |p| i + p);
            let group = &order[i..group_end];
            for v in group {
                let d = v.l1(target);
                if d < dt && !closer_dists.contains(&d) {
                    closer_dists.push(d);
                }
            }
            if closer_dists.len() > 1 {
                break 'rings;
            }
            out.extend(group.iter().filter(|v| v.l1(target) < dt));
            i = group_end;
        }
    }
    out.sort();
    out
}

pub fn oracle_ada_l(state: &LearnerState<Lattice>, target: LatticeNode) -> Result<OracleResult<LatticeNode>> {
    let candidates = oracle_candidates(state, target);
    let mut selected = None;
    for c in &candidates {
        let r = rank_tilde_d(&state.version_space, c, &target)?;
        if selected.is_none_or(|(best, _)| r < best) {
            selected = Some((r, *c));
        }
    }
    let selected = selected.map(|(_, c)| c).unwrap_or(target);
    Ok(OracleResult { candidates, selected })
}

#[derive(Clone, Copy, Debug)]
pub struct AdaL;

impl AdaL {
    /// Surviving non-candidate nodes the learner would rank at least as high
    /// as the best candidate once `h_t` is flagged, most preferred first.
    pub fn bad_neighbors(state: &LearnerState<Lattice>, candidates: &[LatticeNode]) -> Vec<LatticeNode> {
        let class = state.class();
        let h = state.current;
        let Some(bound) = candidates.iter().map(|c| class.preference_key(c, &h)).min() else {
            return Vec::new();
        };
        (0..=bound.dist as usize)
            .flat_map(|d| alive_ring(state, d))
            .filter(|v| *v != h && !candidates.contains(v) && class.preference_key(v, &h) <= bound)
            .collect()
    }
}

impl Teacher<Lattice> for AdaL {
    fn name(&self) -> &'static str {
        "ada-l"
    }

    fn next_example(&mut self, ctx: &TeachingContext<Lattice>, state: &LearnerState<Lattice>) -> Result<Option<LabeledExample>> {
        if state.current == ctx.target {
            return Ok(None);
        }
        let candidates = oracle_candidates(state, ctx.target);
        let bad = AdaL::bad_neighbors(state, &candidates);
        let node = bad.first().copied().unwrap_or(state.current);
        Ok(Some(ctx.class.positive_example_at(node)))
    }

    fn box_clone(&self) -> Box<dyn Teacher<Lattice>> {
        Box::new(*self)
    }
}
