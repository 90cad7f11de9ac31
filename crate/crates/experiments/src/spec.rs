use serde::{Deserialize, Serialize};

use teachlab_core::{Result, ScenarioKind, TeachError, TeacherKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassName {
    Tworec,
    Lattice,
}

impl ClassName {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassName::Tworec => "tworec",
            ClassName::Lattice => "lattice",
        }
    }
}

/// Where each trial's `(h0, target)` pair comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioSpec {
    /// 2-Rec: a uniformly random pair from the given subclasses.
    Random(ScenarioKind),
    /// 2-Rec: a full-width strip to remove, the grid side being its length.
    Strip,
    /// Lattice: from `(a, a)` to `(n - margin, n - margin)`.
    Diagonal { a: usize, margin: usize },
}

impl ScenarioSpec {
    pub fn label(&self) -> String {
        match self {
            ScenarioSpec::Random(kind) => kind.to_string(),
            ScenarioSpec::Strip => "strip".to_string(),
            ScenarioSpec::Diagonal { a, margin } => format!("diagonal-a{a}-m{margin}"),
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, ScenarioSpec::Random(_))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetRule {
    /// 60% of the cells for 2-Rec, `2n²` for Lattice.
    #[default]
    Default,
    Fixed(usize),
}

/// How the learner's ties are resolved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreakMode {
    /// Seeded uniform draws.
    #[default]
    Seeded,
    /// The costliest resolution; deterministic teachers and noise-free learners only.
    Adversarial,
}

fn default_trials() -> usize {
    50
}

fn default_epsilons() -> Vec<f64> {
    vec![0.0]
}

fn default_grid_sizes() -> Vec<usize> {
    vec![4, 5, 6, 7, 8]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub class: ClassName,
    pub scenario: ScenarioSpec,
    pub algorithms: Vec<TeacherKind>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Master seed.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_epsilons")]
    pub epsilons: Vec<f64>,
    #[serde(default = "default_grid_sizes")]
    pub grid_sizes: Vec<usize>,
    #[serde(default)]
    pub budget: BudgetRule,
    #[serde(default)]
    pub tiebreak: TieBreakMode,
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ExperimentSpec = serde_json::from_str(text).map_err(|e| TeachError::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(TeachError::Config(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.algorithms.is_empty() || self.grid_sizes.is_empty() || self.epsilons.is_empty() {
            return bad("algorithms, grid sizes and noise levels must be non-empty".into());
        }
        if let Some(e) = self.epsilons.iter().find(|e| !(0.0..=1.0).contains(*e)) {
            return bad(format!("noise level {e} outside [0, 1]"));
        }
        let fits = match (self.class, self.scenario) {
            (ClassName::Tworec, ScenarioSpec::Random(_) | ScenarioSpec::Strip) => true,
            (ClassName::Lattice, ScenarioSpec::Diagonal { .. }) => true,
            _ => false,
        };
        if !fits {
            return bad(format!("scenario {} does not apply to {}", self.scenario.label(), self.class.as_str()));
        }
        if self.tiebreak == TieBreakMode::Adversarial && self.epsilons.iter().any(|&e| e > 0.0) {
            return bad("adversarial tie-breaking needs a noise-free learner".into());
        }
        Ok(())
    }

    pub fn budget_for(&self, grid: usize) -> usize {
        match self.budget {
            BudgetRule::Fixed(b) => b,
            BudgetRule::Default => match self.class {
                ClassName::Tworec => teachlab_core::sim::tworec_budget(grid),
                ClassName::Lattice => teachlab_core::sim::lattice_budget(grid),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_in() {
        let spec = ExperimentSpec::from_json(r#"{"class":"tworec","scenario":{"random":"H2to1"},"algorithms":["ada-r","sc"]}"#).unwrap();
        assert_eq!(spec.trials, 50);
        assert_eq!(spec.grid_sizes, vec![4, 5, 6, 7, 8]);
        assert_eq!(spec.epsilons, vec![0.0]);
        assert_eq!(spec.budget_for(5), 15);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        for text in [
            r#"{"class":"tworec","scenario":"strip","algorithms":["ada-r"],"trials":0}"#,
            r#"{"class":"tworec","scenario":"strip","algorithms":["ada-r"],"epsilons":[1.5]}"#,
            r#"{"class":"lattice","scenario":"strip","algorithms":["ada-l"]}"#,
            r#"{"class":"lattice","scenario":{"diagonal":{"a":2,"margin":2}},"algorithms":["ada-l"],"epsilons":[0.3],"tiebreak":"adversarial"}"#,
            r#"{"class":"tworec","scenario":"strip","algorithms":["ada-x"]}"#,
        ] {
            assert!(ExperimentSpec::from_json(text).is_err(), "{text}");
        }
    }
}
