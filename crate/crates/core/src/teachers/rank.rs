//! The rank heuristic: how many surviving hypotheses the learner ranks at
//! least as high as the target, seen from a given hypothesis.

use crate::class::HypothesisClass;
use crate::error::{Result, TeachError};
use crate::version_space::VersionSpace;

/// `|{h' ∈ vs : σ(h'; h) ≤ σ(h*; h)}|`.
pub fn rank_tilde_d<C: HypothesisClass>(vs: &VersionSpace<C>, h: &C::Hypothesis, target: &C::Hypothesis) -> Result<usize> {
    if !vs.contains(target) {
        return Err(TeachError::Domain("the target is not in the version space".into()));
    }
    let class = vs.class();
    let bound = class.preference_key(target, h);
    if vs.is_explicit() {
        Ok(vs.iter().filter(|g| class.preference_key(g, h) <= bound).count())
    } else {
        Ok(class.count_preferred(h, vs.examples(), bound, usize::MAX))
    }
}

/// The preferred version space itself; needs an enumerated version space.
pub fn preferred_version_space<C: HypothesisClass>(
    vs: &VersionSpace<C>,
    h: &C::Hypothesis,
    target: &C::Hypothesis,
) -> Result<Vec<C::Hypothesis>> {
    if !vs.is_explicit() {
        return Err(TeachError::Unsupported("listing the preferred version space needs enumeration".into()));
    }
    if !vs.contains(target) {
        return Err(TeachError::Domain("the target is not in the version space".into()));
    }
    let class = vs.class();
    let bound = class.preference_key(target, h);
    Ok(vs.iter().filter(|g| class.preference_key(g, h) <= bound).cloned().collect())
}
