use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TeachError};
use crate::learner::derive_seed;
use crate::sim::SCENARIO_STREAM;

use super::geometry::{Rect, TwoRecHypothesis};

/// Subclasses of the initial hypothesis and of the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ScenarioKind {
    H1to1,
    H1to2,
    H2to1,
    H2to2,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 4] = [ScenarioKind::H1to1, ScenarioKind::H1to2, ScenarioKind::H2to1, ScenarioKind::H2to2];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::H1to1 => "H1to1",
            ScenarioKind::H1to2 => "H1to2",
            ScenarioKind::H2to1 => "H2to1",
            ScenarioKind::H2to2 => "H2to2",
        }
    }

    /// Whether the initial and target hypotheses have two rectangles.
    pub fn two_rects(self) -> (bool, bool) {
        match self {
            ScenarioKind::H1to1 => (false, false),
            ScenarioKind::H1to2 => (false, true),
            ScenarioKind::H2to1 => (true, false),
            ScenarioKind::H2to2 => (true, true),
        }
    }

    pub fn matches(self, h0: &TwoRecHypothesis, target: &TwoRecHypothesis) -> bool {
        self.two_rects() == (!h0.is_one(), !target.is_one())
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioKind {
    type Err = TeachError;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| TeachError::Config(format!("unknown scenario {s:?}")))
    }
}

const MAX_ATTEMPTS: usize = 100_000;

/// Uniform over the `(n(n+1)/2)²` rectangles of an `n`x`n` grid.
pub fn sample_rect<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Rect {
    let span = |rng: &mut R| loop {
        let a = rng.gen_range(0..=n);
        let b = rng.gen_range(0..=n);
        if a != b {
            return (a.min(b), a.max(b) - 1);
        }
    };
    let (x1, x2) = span(rng);
    let (y1, y2) = span(rng);
    Rect::new(x1, y1, x2, y2)
}

/// Uniform over H¹ or over H², the latter by rejection of non-separated pairs.
pub fn sample_hypothesis<R: Rng + ?Sized>(n: usize, two: bool, rng: &mut R) -> Result<TwoRecHypothesis> {
    if n == 0 || (two && n < 3) {
        return Err(TeachError::Config(format!("no {} hypothesis fits a {n}x{n} grid", if two { "two-rectangle" } else { "one-rectangle" })));
    }
    if !two {
        return Ok(TwoRecHypothesis::one(sample_rect(n, rng)));
    }
    for _ in 0..MAX_ATTEMPTS {
        let a = sample_rect(n, rng);
        let b = sample_rect(n, rng);
        if a.separated(&b) {
            return Ok(TwoRecHypothesis::two(a, b));
        }
    }
    Err(TeachError::Config(format!("could not sample a two-rectangle hypothesis on a {n}x{n} grid")))
}

/// A uniformly random pair of distinct hypotheses from the scenario's subclasses.
pub fn sample_pair<R: Rng + ?Sized>(kind: ScenarioKind, n: usize, rng: &mut R) -> Result<(TwoRecHypothesis, TwoRecHypothesis)> {
    let (two0, two1) = kind.two_rects();
    if n < 2 && !two0 && !two1 {
        return Err(TeachError::Config(format!("{kind} needs two distinct rectangles, impossible on a {n}x{n} grid")));
    }
    for _ in 0..MAX_ATTEMPTS {
        let h0 = sample_hypothesis(n, two0, rng)?;
        let target = sample_hypothesis(n, two1, rng)?;
        if h0 != target {
            return Ok((h0, target));
        }
    }
    Err(TeachError::Config(format!("could not sample a {kind} pair on a {n}x{n} grid")))
}

/// [`sample_pair`] drawing from the scenario stream of a run seed.
pub fn sample_pair_seeded(kind: ScenarioKind, n: usize, seed: u64) -> Result<(TwoRecHypothesis, TwoRecHypothesis)> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[SCENARIO_STREAM]));
    sample_pair(kind, n, &mut rng)
}

/// The strip instance: the target is the full top row, the initial hypothesis
/// adds a full-width strip three rows below it.
pub fn strip_pair(len: usize) -> Result<(TwoRecHypothesis, TwoRecHypothesis)> {
    if len < 4 {
        return Err(TeachError::Config(format!("a strip needs a grid of at least 4, got {len}")));
    }
    let keep = Rect::new(0, 3, len - 1, 3);
    let strip = Rect::new(0, 0, len - 1, 0);
    Ok((TwoRecHypothesis::two(strip, keep), TwoRecHypothesis::one(keep)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_match_their_scenario() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for kind in ScenarioKind::ALL {
            for _ in 0..200 {
                let (h0, t) = sample_pair(kind, 5, &mut rng).unwrap();
                assert!(kind.matches(&h0, &t));
                assert!(h0.is_valid(5) && t.is_valid(5) && h0 != t);
            }
        }
    }

    #[test]
    fn impossible_grids_are_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(sample_pair(ScenarioKind::H2to2, 2, &mut rng).is_err());
        assert!(sample_pair(ScenarioKind::H1to1, 1, &mut rng).is_err());
        assert!(sample_pair(ScenarioKind::H1to2, 3, &mut rng).is_ok());
    }
}
