//! Session state machines, independent of HTTP.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use teachlab_core::example::all_cells;
use teachlab_core::learner::derive_seed;
use teachlab_core::sim::tworec_budget;
use teachlab_core::teachers::{lattice_teacher, tworec_teacher, Teacher};
use teachlab_core::tworec::sample_pair_seeded;
use teachlab_core::{
    ClassTable, HypothesisClass, LabeledExample, Lattice, LatticeNode, LearnerState, ScenarioKind, TeacherKind, TeachingContext,
    TraceStep, TwoRec, VersionSpace,
};

use crate::api::{Budget, ClassChoice, CreateRequest, Mode, Round, SessionView, Status, SubmitReply, SubmitRequest, TraceView, Verdict};
use crate::error::ApiError;

/// Largest grid side a session may use.
pub const MAX_GRID: usize = 32;
/// Cells revealed before the first drawing in elicit mode.
pub const DEFAULT_REVEAL: usize = 6;
/// Cells added before the second drawing in elicit mode.
pub const ELICIT_UPDATE: usize = 2;

/// Stream id for the cells an elicit session reveals.
const ELICIT_STREAM: u64 = 4;

/// Class tables shared by every session on the same grid.
#[derive(Default)]
pub struct Tables {
    tworec: Mutex<HashMap<usize, Arc<ClassTable<TwoRec>>>>,
    lattice: Mutex<HashMap<usize, Arc<ClassTable<Lattice>>>>,
}

fn cached<C: HypothesisClass>(
    map: &Mutex<HashMap<usize, Arc<ClassTable<C>>>>,
    class: &Arc<C>,
) -> Option<Arc<ClassTable<C>>> {
    if !class.enumeration_allowed() {
        return None;
    }
    let mut map = map.lock().expect("table cache poisoned");
    Some(Arc::clone(map.entry(class.side()).or_insert_with(|| Arc::new(ClassTable::build(Arc::clone(class))))))
}

enum Flow<C: HypothesisClass> {
    Teach { kind: TeacherKind, teacher: Box<dyn Teacher<C>> },
    Elicit { rng: ChaCha8Rng },
}

pub struct Engine<C: HypothesisClass> {
    id: String,
    grid: usize,
    class_choice: ClassChoice,
    ctx: TeachingContext<C>,
    flow: Flow<C>,
    h0: Option<C::Hypothesis>,
    current: Option<C::Hypothesis>,
    /// Holds every answered example.
    vs: VersionSpace<C>,
    t: usize,
    pending: Vec<LabeledExample>,
    revealed: Vec<LabeledExample>,
    hypotheses: Vec<C::Hypothesis>,
    steps: Vec<TraceStep<C::Hypothesis>>,
    rounds: Vec<Round<C::Hypothesis>>,
    replies: Vec<Value>,
    status: Status,
    budget: usize,
}

fn parse<H: DeserializeOwned>(v: &Value, what: &str) -> Result<H, ApiError> {
    serde_json::from_value(v.clone()).map_err(|e| ApiError::BadRequest(format!("malformed {what}: {e}")))
}

impl<C: HypothesisClass> Engine<C> {
    fn new(
        id: String,
        req: &CreateRequest,
        ctx: TeachingContext<C>,
        teacher: Option<Box<dyn Teacher<C>>>,
        seed: u64,
    ) -> Result<Self, ApiError> {
        let vs = match &ctx.table {
            Some(t) => VersionSpace::full(Arc::clone(t)),
            None => VersionSpace::implicit(Arc::clone(&ctx.class)),
        };
        let flow = match (req.mode, teacher) {
            (Mode::Teach, Some(teacher)) => Flow::Teach { kind: req.teacher.expect("teach mode has a teacher"), teacher },
            (Mode::Elicit, None) => Flow::Elicit { rng: ChaCha8Rng::seed_from_u64(derive_seed(seed, &[ELICIT_STREAM])) },
            _ => unreachable!("mode and teacher are checked by the caller"),
        };
        let teach = matches!(flow, Flow::Teach { .. });
        let mut engine = Engine {
            id,
            grid: req.grid,
            class_choice: req.class,
            h0: teach.then(|| ctx.h0.clone()),
            current: teach.then(|| ctx.h0.clone()),
            ctx,
            flow,
            vs,
            t: 0,
            pending: Vec::new(),
            revealed: Vec::new(),
            hypotheses: Vec::new(),
            steps: Vec::new(),
            rounds: Vec::new(),
            replies: Vec::new(),
            status: Status::Active,
            budget: tworec_budget(req.grid),
        };
        if teach {
            if engine.ctx.h0 == engine.ctx.target {
                engine.status = Status::Reached;
            } else {
                engine.ask_teacher()?;
            }
        } else {
            let count = req.reveal.unwrap_or(DEFAULT_REVEAL).min(req.grid * req.grid);
            let Flow::Elicit { rng } = &mut engine.flow else { unreachable!() };
            let mut cells = all_cells(req.grid);
            cells.shuffle(rng);
            cells.truncate(count);
            cells.sort();
            for c in cells {
                engine.reveal(engine.ctx.label(c));
            }
        }
        Ok(engine)
    }

    fn reveal(&mut self, z: LabeledExample) {
        self.pending.push(z);
        self.revealed.push(z);
    }

    fn distinct_revealed(&self) -> usize {
        self.revealed.iter().map(|z| z.cell).collect::<HashSet<_>>().len()
    }

    fn ask_teacher(&mut self) -> Result<(), ApiError> {
        let state = LearnerState {
            current: self.current.clone().expect("teach sessions track the learner"),
            version_space: self.vs.clone(),
            t: self.t,
        };
        let Flow::Teach { teacher, .. } = &mut self.flow else { unreachable!() };
        match teacher.next_example(&self.ctx, &state)? {
            Some(z) => {
                self.ctx.validate(&z)?;
                self.reveal(z);
            }
            None => self.status = Status::Exhausted,
        }
        Ok(())
    }

    fn view(&self) -> SessionView<C::Hypothesis> {
        SessionView {
            id: self.id.clone(),
            mode: self.mode(),
            class: self.class_choice,
            grid: self.grid,
            teacher: match &self.flow {
                Flow::Teach { kind, .. } => Some(*kind),
                Flow::Elicit { .. } => None,
            },
            status: self.status,
            h0: self.h0.clone(),
            current: self.current.clone(),
            revealed: self.revealed.clone(),
            pending: self.pending.clone(),
            hypotheses: self.hypotheses.clone(),
            budget: Budget { limit: self.budget, used: self.distinct_revealed() },
            target: (self.status != Status::Active).then(|| self.ctx.target.clone()),
        }
    }

    fn mode(&self) -> Mode {
        match self.flow {
            Flow::Teach { .. } => Mode::Teach,
            Flow::Elicit { .. } => Mode::Elicit,
        }
    }

    fn trace(&self) -> TraceView<C::Hypothesis> {
        TraceView {
            id: self.id.clone(),
            mode: self.mode(),
            status: self.status,
            h0: self.h0.clone(),
            steps: self.steps.clone(),
            rounds: self.rounds.clone(),
            target: (self.status != Status::Active).then(|| self.ctx.target.clone()),
        }
    }

    fn submit(&mut self, req: &SubmitRequest) -> Result<Value, ApiError> {
        let h: C::Hypothesis = parse(&req.hypothesis, "hypothesis")?;
        if let Some(step) = req.step {
            if step < self.hypotheses.len() {
                return if self.hypotheses[step] == h {
                    Ok(self.replies[step].clone())
                } else {
                    Err(ApiError::Conflict(format!("step {step} was already answered differently")))
                };
            }
            if step > self.hypotheses.len() {
                return Err(ApiError::Conflict(format!("expected step {}, got {step}", self.hypotheses.len())));
            }
        }
        if self.status != Status::Active {
            return Err(ApiError::Inactive(self.id.clone()));
        }
        if !self.ctx.class.is_valid(&h) {
            return Err(ApiError::BadRequest(format!("{h:?} is not a valid hypothesis on this grid")));
        }
        let mut violating: Vec<_> = self
            .revealed
            .iter()
            .filter(|z| self.ctx.class.label(&h, z.cell) != z.label)
            .map(|z| z.cell)
            .collect();
        violating.sort();
        violating.dedup();
        if !violating.is_empty() {
            return Err(ApiError::Inconsistent(violating));
        }
        let shown = std::mem::take(&mut self.pending);
        for &z in &shown {
            self.vs = self.vs.update(z)?;
        }
        self.hypotheses.push(h.clone());
        self.current = Some(h.clone());
        let verdict = match self.flow {
            Flow::Teach { .. } => {
                let z = *shown.first().expect("teach sessions have one example outstanding");
                self.steps.push(TraceStep { t: self.t, example: z, learner: h.clone(), vs_size: self.vs.size() });
                self.t += 1;
                if h == self.ctx.target {
                    self.status = Status::Reached;
                } else if self.distinct_revealed() >= self.budget {
                    self.status = Status::Exhausted;
                } else {
                    self.ask_teacher()?;
                }
                self.verdict()
            }
            Flow::Elicit { .. } => {
                self.rounds.push(Round { revealed: shown, hypothesis: h.clone() });
                self.t += 1;
                if h == self.ctx.target {
                    self.status = Status::Reached;
                } else if self.rounds.len() >= 2 {
                    self.status = Status::Exhausted;
                } else {
                    self.reveal_disagreements(&h);
                }
                self.verdict()
            }
        };
        let reply = SubmitReply {
            verdict,
            next_example: match (&self.flow, self.status) {
                (Flow::Teach { .. }, Status::Active) => self.pending.first().copied(),
                _ => None,
            },
            session: self.view(),
        };
        let reply = serde_json::to_value(reply).map_err(|e| ApiError::Internal(e.to_string()))?;
        self.replies.push(reply.clone());
        Ok(reply)
    }

    fn verdict(&self) -> Verdict {
        match self.status {
            Status::Active => Verdict::Accepted,
            Status::Reached => Verdict::Reached,
            Status::Exhausted => Verdict::Exhausted,
        }
    }

    /// Second elicitation round: cells where the drawing and the target disagree.
    fn reveal_disagreements(&mut self, h: &C::Hypothesis) {
        let mut cells: Vec<_> = all_cells(self.grid)
            .into_iter()
            .filter(|&c| self.ctx.class.label(h, c) != self.ctx.class.label(&self.ctx.target, c))
            .collect();
        let Flow::Elicit { rng } = &mut self.flow else { unreachable!() };
        cells.shuffle(rng);
        cells.truncate(ELICIT_UPDATE);
        cells.sort();
        for c in cells {
            let z = self.ctx.label(c);
            self.reveal(z);
        }
    }
}

/// A session of either class.
pub enum Session {
    TwoRec(Engine<TwoRec>),
    Lattice(Engine<Lattice>),
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("session views serialize")
}

impl Session {
    /// Builds a session; the returned request has the seed and both
    /// hypotheses filled in, so replaying it rebuilds the same session.
    pub fn create(id: String, req: &CreateRequest, master_seed: u64, tables: &Tables) -> Result<(Session, CreateRequest), ApiError> {
        if req.grid == 0 || req.grid > MAX_GRID {
            return Err(ApiError::BadRequest(format!("grid must be between 1 and {MAX_GRID}")));
        }
        match (req.mode, req.teacher) {
            (Mode::Teach, None) => return Err(ApiError::BadRequest("teach mode needs a teacher".into())),
            (Mode::Elicit, Some(_)) => return Err(ApiError::BadRequest("elicit mode has no teacher".into())),
            _ => {}
        }
        if req.h0.is_some() != req.target.is_some() && req.mode == Mode::Teach {
            return Err(ApiError::BadRequest("give both h0 and target, or neither".into()));
        }
        let seed = req.seed.unwrap_or_else(|| session_seed(master_seed, &id));
        let mut resolved = req.clone();
        resolved.seed = Some(seed);
        match req.class {
            ClassChoice::Tworec => {
                let class = Arc::new(TwoRec::new(req.grid));
                let kind = req.scenario.unwrap_or(ScenarioKind::H2to1);
                let (h0, target) = match (&req.h0, &req.target) {
                    (Some(h0), Some(t)) => (parse(h0, "h0")?, parse(t, "target")?),
                    (None, Some(t)) => (parse(t, "target")?, parse(t, "target")?),
                    _ => {
                        let (h0, t) = sample_pair_seeded(kind, req.grid, seed)?;
                        if req.mode == Mode::Elicit {
                            (t, t)
                        } else {
                            (h0, t)
                        }
                    }
                };
                let ctx = TeachingContext::new(Arc::clone(&class), cached(&tables.tworec, &class), h0, target)?;
                if req.mode == Mode::Teach {
                    resolved.h0 = Some(to_value(&ctx.h0));
                }
                resolved.target = Some(to_value(&ctx.target));
                let teacher = req.teacher.map(|k| tworec_teacher(k, &ctx, seed)).transpose()?;
                Ok((Session::TwoRec(Engine::new(id, &resolved, ctx, teacher, seed)?), resolved))
            }
            ClassChoice::Lattice => {
                if req.mode == Mode::Elicit {
                    return Err(ApiError::BadRequest("elicit mode is only defined for 2-Rec".into()));
                }
                let class = Arc::new(Lattice::new(req.grid));
                let (h0, target) = match (&req.h0, &req.target) {
                    (Some(h0), Some(t)) => (parse(h0, "h0")?, parse(t, "target")?),
                    _ => (LatticeNode::new(0, 0), LatticeNode::new(req.grid - 1, req.grid - 1)),
                };
                let ctx = TeachingContext::new(Arc::clone(&class), cached(&tables.lattice, &class), h0, target)?;
                resolved.h0 = Some(to_value(&ctx.h0));
                resolved.target = Some(to_value(&ctx.target));
                let teacher = req.teacher.map(|k| lattice_teacher(k, &ctx, seed)).transpose()?;
                Ok((Session::Lattice(Engine::new(id, &resolved, ctx, teacher, seed)?), resolved))
            }
        }
    }

    pub fn view(&self) -> Value {
        match self {
            Session::TwoRec(e) => to_value(&e.view()),
            Session::Lattice(e) => to_value(&e.view()),
        }
    }

    pub fn trace(&self) -> Value {
        match self {
            Session::TwoRec(e) => to_value(&e.trace()),
            Session::Lattice(e) => to_value(&e.trace()),
        }
    }

    pub fn submit(&mut self, req: &SubmitRequest) -> Result<Value, ApiError> {
        match self {
            Session::TwoRec(e) => e.submit(req),
            Session::Lattice(e) => e.submit(req),
        }
    }

    /// Whether a submission would be a replay of an answered step.
    pub fn is_repeat(&self, req: &SubmitRequest) -> bool {
        let answered = match self {
            Session::TwoRec(e) => e.hypotheses.len(),
            Session::Lattice(e) => e.hypotheses.len(),
        };
        req.step.is_some_and(|s| s < answered)
    }
}

/// Per-session seed when the request does not fix one.
pub fn session_seed(master: u64, id: &str) -> u64 {
    let parts: Vec<u64> = id.bytes().map(u64::from).collect();
    derive_seed(master, &parts)
}
