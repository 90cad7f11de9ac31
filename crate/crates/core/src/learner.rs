//! The preference-based learner: `h_{t+1} ∈ argmin_{h ∈ H_{t+1}} σ(h; h_t)`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::class::HypothesisClass;
use crate::error::{Result, TeachError};
use crate::example::LabeledExample;
use crate::preference::PreferenceKey;
use crate::version_space::VersionSpace;

pub struct LearnerState<C: HypothesisClass> {
    pub current: C::Hypothesis,
    pub version_space: VersionSpace<C>,
    /// Number of examples processed.
    pub t: usize,
}

impl<C: HypothesisClass> Clone for LearnerState<C> {
    fn clone(&self) -> Self {
        LearnerState {
            current: self.current.clone(),
            version_space: self.version_space.clone(),
            t: self.t,
        }
    }
}

impl<C: HypothesisClass> std::fmt::Debug for LearnerState<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LearnerState")
            .field("current", &self.current)
            .field("t", &self.t)
            .field("version_space", &self.version_space)
            .finish()
    }
}

impl<C: HypothesisClass> LearnerState<C> {
    pub fn new(h0: C::Hypothesis, version_space: VersionSpace<C>) -> Result<Self> {
        if !version_space.class().is_valid(&h0) || !version_space.contains(&h0) {
            return Err(TeachError::Domain(format!("initial hypothesis {h0:?} is not in the version space")));
        }
        Ok(LearnerState { current: h0, version_space, t: 0 })
    }

    pub fn class(&self) -> &C {
        self.version_space.class()
    }

    /// The updated version space and the tie set the learner picks from after `z`.
    pub fn choice_set(&self, z: LabeledExample) -> Result<(VersionSpace<C>, Vec<C::Hypothesis>)> {
        let next = self.version_space.update(z)?;
        let choices = if next.is_explicit() {
            brute_force_choice_set(next.class().as_ref(), &self.current, next.iter())
        } else {
            next.class().structured_choice_set(&self.current, next.examples())
        };
        if choices.is_empty() {
            return Err(TeachError::InconsistentTeaching { cell: z.cell });
        }
        Ok((next, choices))
    }

    /// Moves to `chosen`, which must be a member of `next`.
    pub fn advance(&self, next: VersionSpace<C>, chosen: C::Hypothesis) -> Self {
        LearnerState { current: chosen, version_space: next, t: self.t + 1 }
    }
}

/// Minimal-key members of `members` relative to `current`, in canonical order.
pub fn brute_force_choice_set<'a, C, I>(class: &C, current: &C::Hypothesis, members: I) -> Vec<C::Hypothesis>
where
    C: HypothesisClass,
    I: IntoIterator<Item = &'a C::Hypothesis>,
{
    let mut best: Option<PreferenceKey> = None;
    let mut out = Vec::new();
    for h in members {
        let key = class.preference_key(h, current);
        match best {
            Some(b) if key > b => {}
            Some(b) if key == b => out.push(h.clone()),
            _ => {
                best = Some(key);
                out.clear();
                out.push(h.clone());
            }
        }
    }
    out.sort();
    out
}

/// With probability `epsilon` the learner ignores its preference and jumps to
/// a uniformly random member of the updated version space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub epsilon: f64,
}

impl NoiseModel {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(TeachError::Config(format!("noise level {epsilon} outside [0, 1]")));
        }
        Ok(NoiseModel { epsilon })
    }

    pub fn none() -> Self {
        NoiseModel { epsilon: 0.0 }
    }
}

/// A learner with a seeded stream for tie draws and noise.
#[derive(Clone, Debug)]
pub struct Learner {
    noise: NoiseModel,
    rng: ChaCha8Rng,
}

impl Learner {
    pub fn new(noise: NoiseModel, seed: u64) -> Self {
        Learner { noise, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn step<C: HypothesisClass>(&mut self, state: &LearnerState<C>, z: LabeledExample) -> Result<LearnerState<C>> {
        let (next, choices) = state.choice_set(z)?;
        if self.noise.epsilon > 0.0 && self.rng.gen_bool(self.noise.epsilon) {
            let Some(members) = next.members() else {
                return Err(TeachError::Unsupported(
                    "noisy learners need an enumerated version space".into(),
                ));
            };
            let count = members.count_ones(..);
            let k = self.rng.gen_range(0..count);
            let id = members.ones().nth(k).expect("k < count");
            let h = next.table().expect("explicit").hypotheses()[id].clone();
            return Ok(state.advance(next, h));
        }
        let pick = if choices.len() == 1 { 0 } else { self.rng.gen_range(0..choices.len()) };
        let h = choices[pick].clone();
        Ok(state.advance(next, h))
    }
}

/// Mixes a master seed with stream identifiers into an independent seed.
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    let mut s = splitmix(master);
    for &p in parts {
        s = splitmix(s ^ splitmix(p.wrapping_add(0x9e37_79b9_7f4a_7c15)));
    }
    s
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
