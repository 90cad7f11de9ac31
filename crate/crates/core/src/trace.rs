use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::example::LabeledExample;

/// One line of a teaching trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep<H> {
    pub t: usize,
    pub example: LabeledExample,
    pub learner: H,
    pub vs_size: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Reached,
    BudgetExhausted,
    /// The teacher had nothing left to show before the learner arrived.
    TeacherExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TeachingTrace<H> {
    pub steps: Vec<TraceStep<H>>,
    pub outcome: Outcome,
}

impl<H> TeachingTrace<H> {
    pub fn examples_used(&self) -> usize {
        self.steps.len()
    }

    pub fn reached(&self) -> bool {
        self.outcome == Outcome::Reached
    }

    pub fn examples(&self) -> impl Iterator<Item = LabeledExample> + '_ {
        self.steps.iter().map(|s| s.example)
    }
}

impl<H: Serialize> TeachingTrace<H> {
    /// One JSON object per line, newline-terminated.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            out.push_str(&serde_json::to_string(step).expect("trace steps serialize"));
            out.push('\n');
        }
        out
    }
}

pub fn parse_jsonl<H: DeserializeOwned>(text: &str) -> serde_json::Result<Vec<TraceStep<H>>> {
    text.lines().filter(|l| !l.trim().is_empty()).map(serde_json::from_str).collect()
}
