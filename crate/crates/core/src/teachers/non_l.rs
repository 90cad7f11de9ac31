use std::collections::BTreeSet;

use crate::error::{Result, TeachError};
use crate::example::LabeledExample;
use crate::lattice::{Lattice, LatticeNode};
use crate::class::HypothesisClass;

/// Shortest staircase from `from` to `to`: first along `i`, then along `j`.
pub fn staircase_path(from: LatticeNode, to: LatticeNode) -> Vec<LatticeNode> {
    let mut path = vec![from];
    let mut cur = from;
    while cur.i != to.i {
        cur.i = if cur.i < to.i { cur.i + 1 } else { cur.i - 1 };
        path.push(cur);
    }
    while cur.j != to.j {
        cur.j = if cur.j < to.j { cur.j + 1 } else { cur.j - 1 };
        path.push(cur);
    }
    path
}

/// Blocks every neighbor of the path that is not on it (lexicographic), then
/// flags the path nodes in walking order, so that every tie resolution walks
/// the same staircase.
pub fn build_non_l(class: &Lattice, h0: LatticeNode, target: LatticeNode) -> Result<Vec<LabeledExample>> {
    if h0 == target {
        return Ok(Vec::new());
    }
    if !class.is_valid(&h0) || !class.is_valid(&target) {
        return Err(TeachError::Domain("lattice endpoints out of bounds".into()));
    }
    let path = staircase_path(h0, target);
    let walk = &path[..path.len() - 1];
    let on_path: BTreeSet<LatticeNode> = path.iter().copied().collect();
    let blockers: BTreeSet<LatticeNode> = walk
        .iter()
        .flat_map(|v| v.neighbors(class.side()))
        .filter(|v| !on_path.contains(v))
        .collect();
    let mut seq: Vec<LabeledExample> = blockers.into_iter().map(|v| class.positive_example_at(v)).collect();
    seq.extend(walk.iter().map(|&v| class.positive_example_at(v)));
    Ok(seq)
}
