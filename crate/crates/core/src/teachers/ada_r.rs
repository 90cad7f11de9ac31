//! Adaptive 2-Rec teaching.
//!
//! An oracle maps the learner's state to intermediate targets; the teacher
//! then shows corner examples of a target when the move is a plain edge
//! adjustment, and otherwise picks the example minimizing the rank of the
//! nearest intermediate target after the learner responds.

use std::collections::HashMap;

use crate::class::HypothesisClass;
use crate::error::Result;
use crate::example::{Cell, LabeledExample};
use crate::learner::LearnerState;
use crate::preference::PreferenceKey;
use crate::sim::TeachingContext;
use crate::tworec::{dist_e, Constraints, Rect, TwoRec, TwoRecHypothesis};

use super::non_r::{hypothesis_all_corners, hypothesis_diagonal_corners};
use super::{OracleResult, Teacher};

/// Saturation point of the rank counts used to choose among candidates.
pub const SELECTION_RANK_CAP: usize = 1024;
/// Saturation point of the rank counts scored by the greedy step.
pub const GREEDY_COUNT_CAP: usize = 4096;
/// Largest preferred set materialized once and filtered per example.
pub const PREFERRED_LIST_LIMIT: usize = 50_000;

/// Two-rectangle hypotheses that split `r` with one empty full-length row or
/// column.
pub fn splits_of(r: &Rect) -> Vec<TwoRecHypothesis> {
    let mut out = Vec::new();
    for c in r.x1 + 1..r.x2 {
        out.push(TwoRecHypothesis::two(Rect::new(r.x1, r.y1, c - 1, r.y2), Rect::new(c + 1, r.y1, r.x2, r.y2)));
    }
    for c in r.y1 + 1..r.y2 {
        out.push(TwoRecHypothesis::two(Rect::new(r.x1, r.y1, r.x2, c - 1), Rect::new(r.x1, c + 1, r.x2, r.y2)));
    }
    out.sort();
    out
}

/// Splits of `r` whose two rectangles each overlap exactly one rectangle of
/// `current`, a different one each.
pub fn valid_splits(r: &Rect, current: &TwoRecHypothesis) -> Vec<TwoRecHypothesis> {
    let cur = current.rects();
    splits_of(r)
        .into_iter()
        .filter(|g| {
            let hits: Vec<Vec<usize>> = g
                .rects()
                .iter()
                .map(|p| (0..cur.len()).filter(|&i| cur[i].overlaps(p)).collect())
                .collect();
            hits.iter().all(|h| h.len() == 1) && hits[0] != hits[1]
        })
        .collect()
}

fn covered_by(h: &TwoRecHypothesis, target: &TwoRecHypothesis) -> bool {
    h.rects().iter().all(|r| target.rects().iter().any(|t| t.contains_rect(r)))
}

/// Candidate intermediate targets for the learner at `h`, restricted to those
/// consistent with the examples so far.
pub fn oracle_candidates(n: usize, h: &TwoRecHypothesis, cons: &Constraints, target: &TwoRecHypothesis) -> Vec<TwoRecHypothesis> {
    use TwoRecHypothesis::{One, Two};
    let mut out = match (h, target) {
        (One(_), One(_)) | (Two(..), Two(..)) => vec![*target],
        (One(r), Two(t1, t2)) => {
            if r == t1 || r == t2 {
                (0..n * n)
                    .map(|i| Rect::cell(Cell::from_index(i, n)))
                    .filter(|s| s.separated(r))
                    .map(|s| TwoRecHypothesis::two(*r, s))
                    .collect()
            } else {
                vec![One(*t1)]
            }
        }
        (Two(a, b), One(t)) => {
            if a.overlaps(t) && b.overlaps(t) {
                if h.is_split() && h.enclosing() == *t {
                    vec![*target]
                } else {
                    valid_splits(t, h)
                }
            } else if h.is_s1() {
                h.delete_targets()
            } else {
                let mut v = Vec::new();
                for (keep, drop) in [(a, b), (b, a)] {
                    if drop.overlaps(t) {
                        continue;
                    }
                    v.extend(drop.cells().map(Rect::cell).filter(|s| s.separated(keep)).map(|s| TwoRecHypothesis::two(*keep, s)));
                }
                v
            }
        }
    };
    out.retain(|g| g.is_valid(n) && cons.hypothesis_ok(g));
    out.sort();
    out.dedup();
    if out.is_empty() {
        out.push(*target);
    }
    out
}

/// Candidates plus the one from which the target ranks highest; rank ties go
/// to candidates lying inside the target, then canonical order.
pub fn oracle_ada_r(class: &TwoRec, state: &LearnerState<TwoRec>, target: &TwoRecHypothesis) -> OracleResult<TwoRecHypothesis> {
    let examples = state.version_space.examples();
    let cons = Constraints::new(class.side(), examples);
    let candidates = oracle_candidates(class.side(), &state.current, &cons, target);
    let selected = if candidates.len() == 1 {
        candidates[0]
    } else {
        *candidates
            .iter()
            .min_by_key(|c| {
                let bound = class.preference_key(target, c);
                (class.count_preferred(c, examples, bound, SELECTION_RANK_CAP), !covered_by(c, target), **c)
            })
            .expect("candidates are non-empty")
    };
    OracleResult { candidates, selected }
}

#[derive(Clone, Debug, Default)]
pub struct AdaR {
    fallbacks: usize,
}

impl AdaR {
    pub fn new() -> Self {
        AdaR::default()
    }

    /// Rounds in which the corner examples ran out and the greedy step took over.
    pub fn fallbacks(&self) -> usize {
        self.fallbacks
    }

    fn first_unshown(ctx: &TeachingContext<TwoRec>, state: &LearnerState<TwoRec>, cells: Vec<Cell>) -> Option<LabeledExample> {
        cells.into_iter().find(|c| !state.version_space.shown(*c)).map(|c| ctx.label(c))
    }

    /// The example minimizing, over the learner's possible responses, the
    /// smallest rank of an intermediate target that survives it.
    pub fn greedy(
        ctx: &TeachingContext<TwoRec>,
        state: &LearnerState<TwoRec>,
        candidates: &[TwoRecHypothesis],
    ) -> Result<Option<LabeledExample>> {
        let class = &*ctx.class;
        let h = state.current;
        let examples = state.version_space.examples();
        let mut lists: HashMap<PreferenceKey, Option<Vec<TwoRecHypothesis>>> = HashMap::new();
        let mut best: Option<((usize, bool, Cell), LabeledExample)> = None;
        for cell in ctx.unshown_cells(state) {
            let z = ctx.label(cell);
            let alive: Vec<&TwoRecHypothesis> = candidates.iter().filter(|t| t.contains(cell) == z.label).collect();
            let stays = h.contains(cell) == z.label;
            // Rank counts grow with the threshold, so the nearest surviving
            // target is the one with the smallest key.
            let nearest = |from: &TwoRecHypothesis| alive.iter().map(|t| class.preference_key(t, from)).min();
            let cap = best.as_ref().map_or(GREEDY_COUNT_CAP, |(b, _)| b.0.saturating_add(1).min(GREEDY_COUNT_CAP));
            let score = if alive.is_empty() {
                usize::MAX
            } else if stays {
                let bound = nearest(&h).expect("non-empty");
                let list = lists
                    .entry(bound)
                    .or_insert_with(|| class.preferred_list(&h, examples, bound, PREFERRED_LIST_LIMIT));
                match list {
                    Some(l) => l.iter().filter(|g| g.contains(cell) == z.label).count(),
                    None => {
                        let mut extended = examples.to_vec();
                        extended.push(z);
                        class.count_preferred(&h, &extended, bound, cap)
                    }
                }
            } else {
                let (next, choices) = state.choice_set(z)?;
                let mut worst = 0;
                for hz in &choices {
                    let bound = nearest(hz).expect("non-empty");
                    worst = worst.max(class.count_preferred(hz, next.examples(), bound, cap));
                    if worst >= cap {
                        break;
                    }
                }
                worst
            };
            let rank = (score, !stays, cell);
            if best.as_ref().is_none_or(|(b, _)| rank < *b) {
                best = Some((rank, z));
            }
        }
        Ok(best.map(|(_, z)| z))
    }
}

impl Teacher<TwoRec> for AdaR {
    fn name(&self) -> &'static str {
        "ada-r"
    }

    fn next_example(&mut self, ctx: &TeachingContext<TwoRec>, state: &LearnerState<TwoRec>) -> Result<Option<LabeledExample>> {
        let h = state.current;
        if h == ctx.target {
            return Ok(None);
        }
        let n = ctx.class.side();
        let oracle = oracle_ada_r(&ctx.class, state, &ctx.target);
        let two_to_one = ctx.target.is_one() && !h.is_one();
        let corners = if two_to_one {
            let sel = oracle.selected;
            let split_of_target = sel.is_split() && sel.enclosing() == ctx.target.enclosing();
            if split_of_target && dist_e(&h, &sel)? > 1 {
                Some(hypothesis_all_corners(&ctx.target, n))
            } else {
                None
            }
        } else {
            Some(hypothesis_diagonal_corners(&oracle.selected, n))
        };
        if let Some(cells) = corners {
            if let Some(z) = Self::first_unshown(ctx, state, cells) {
                return Ok(Some(z));
            }
            self.fallbacks += 1;
        }
        Self::greedy(ctx, state, &oracle.candidates)
    }

    fn box_clone(&self) -> Box<dyn Teacher<TwoRec>> {
        Box::new(self.clone())
    }
}
