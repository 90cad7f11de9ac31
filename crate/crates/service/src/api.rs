//! Request and response bodies.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use teachlab_core::{LabeledExample, ScenarioKind, TeacherKind, TraceStep};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassChoice {
    Tworec,
    Lattice,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// A teacher reveals one cell per round until the learner names the target.
    #[default]
    Teach,
    /// Two rounds of revealed cells, no teacher; records how people redraw.
    Elicit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Active,
    Reached,
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateRequest {
    pub class: ClassChoice,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub teacher: Option<TeacherKind>,
    pub grid: usize,
    /// 2-Rec: subclasses of the sampled pair when `h0`/`target` are absent.
    #[serde(default)]
    pub scenario: Option<ScenarioKind>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub h0: Option<Value>,
    #[serde(default)]
    pub target: Option<Value>,
    /// Elicit mode: cells revealed before the first drawing.
    #[serde(default)]
    pub reveal: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubmitRequest {
    pub hypothesis: Value,
    /// Index of this submission; a repeat of an earlier one with the same
    /// hypothesis returns the earlier reply.
    #[serde(default)]
    pub step: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub limit: usize,
    /// Distinct cells revealed so far.
    pub used: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionView<H> {
    pub id: String,
    pub mode: Mode,
    pub class: ClassChoice,
    pub grid: usize,
    pub teacher: Option<TeacherKind>,
    pub status: Status,
    pub h0: Option<H>,
    pub current: Option<H>,
    /// Every revealed cell in reveal order, including `pending`.
    pub revealed: Vec<LabeledExample>,
    /// Cells revealed since the last accepted hypothesis.
    pub pending: Vec<LabeledExample>,
    pub hypotheses: Vec<H>,
    pub budget: Budget,
    /// Present only once the session is over.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<H>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accepted,
    Reached,
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubmitReply<H> {
    pub verdict: Verdict,
    /// Teach mode: the next example, absent once the session is over.
    pub next_example: Option<LabeledExample>,
    pub session: SessionView<H>,
}

/// One elicitation round: the cells shown, then the drawing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Round<H> {
    pub revealed: Vec<LabeledExample>,
    pub hypothesis: H,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceView<H> {
    pub id: String,
    pub mode: Mode,
    pub status: Status,
    pub h0: Option<H>,
    /// Teach mode: one step per revealed example and declared hypothesis.
    pub steps: Vec<TraceStep<H>>,
    /// Elicit mode.
    pub rounds: Vec<Round<H>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<H>,
}
