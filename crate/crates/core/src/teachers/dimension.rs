//! Teaching dimension and its preference-based variant on finite instances.

use fixedbitset::FixedBitSet;

use crate::error::{Result, TeachError};
use crate::finite::FiniteProblem;

/// Largest class the exhaustive dimension searches accept.
pub const MAX_HYPOTHESES: usize = 20;

fn smallest_cover(p: &FiniteProblem, done: impl Fn(&FixedBitSet) -> bool) -> Result<usize> {
    if p.size() > MAX_HYPOTHESES {
        return Err(TeachError::Unsupported(format!("teaching dimension search is limited to {MAX_HYPOTHESES} hypotheses")));
    }
    fn search(p: &FiniteProblem, vs: &FixedBitSet, from: usize, left: usize, done: &dyn Fn(&FixedBitSet) -> bool) -> bool {
        if done(vs) {
            return true;
        }
        if left == 0 {
            return false;
        }
        (from..p.examples().len()).any(|z| {
            let next = p.restrict(vs, z);
            next != *vs && search(p, &next, z + 1, left - 1, done)
        })
    }
    let full = p.full();
    (0..=p.examples().len())
        .find(|&k| search(p, &full, 0, k, &done))
        .ok_or_else(|| TeachError::Domain("the examples cannot single out the target".into()))
}

/// Fewest examples leaving exactly the target.
pub fn compute_td(p: &FiniteProblem) -> Result<usize> {
    let t = p.target();
    smallest_cover(p, |vs| vs.count_ones(..) == 1 && vs.contains(t))
}

/// Fewest examples after which every other survivor is strictly less
/// preferred than the target under a global preference.
pub fn compute_pbtd(p: &FiniteProblem) -> Result<usize> {
    if !p.is_state_independent() {
        return Err(TeachError::Domain("the preference-based dimension needs a state-independent preference".into()));
    }
    let t = p.target();
    let bound = p.key(t, t);
    smallest_cover(p, |vs| vs.ones().all(|h| h == t || p.key(h, h) > bound))
}
