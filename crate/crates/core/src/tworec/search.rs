//! Learner updates for 2-Rec without enumerating the class.
//!
//! Candidates are generated band by band in ascending `(tier, dist)` order;
//! every band only produces hypotheses consistent with the examples, checked
//! in O(1) per rectangle through prefix sums of positive and negative labels.

use std::collections::HashMap;

use crate::class::HypothesisClass;
use crate::example::{Cell, LabeledExample};
use crate::preference::PreferenceKey;

use super::geometry::{Rect, Subclass, TwoRecHypothesis};
use super::TwoRec;

/// Label counts over the shown examples, queryable per rectangle.
#[derive(Clone, Debug)]
pub struct Constraints {
    n: usize,
    neg: Vec<u32>,
    pos: Vec<u32>,
    total_pos: u32,
    positives: Vec<Cell>,
    negatives: Vec<Cell>,
    contradictory: bool,
}

impl Constraints {
    pub fn new(n: usize, examples: &[LabeledExample]) -> Self {
        let mut grid: Vec<Option<bool>> = vec![None; n * n];
        let mut contradictory = false;
        for z in examples {
            let slot = &mut grid[z.cell.index(n)];
            match *slot {
                Some(l) if l != z.label => contradictory = true,
                _ => *slot = Some(z.label),
            }
        }
        let w = n + 1;
        let mut neg = vec![0u32; w * w];
        let mut pos = vec![0u32; w * w];
        let mut positives = Vec::new();
        let mut negatives = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let (p, q) = match grid[Cell::new(x, y).index(n)] {
                    Some(true) => {
                        positives.push(Cell::new(x, y));
                        (1, 0)
                    }
                    Some(false) => {
                        negatives.push(Cell::new(x, y));
                        (0, 1)
                    }
                    None => (0, 0),
                };
                let i = (x + 1) * w + (y + 1);
                pos[i] = p + pos[x * w + y + 1] + pos[(x + 1) * w + y] - pos[x * w + y];
                neg[i] = q + neg[x * w + y + 1] + neg[(x + 1) * w + y] - neg[x * w + y];
            }
        }
        let total_pos = positives.len() as u32;
        Constraints { n, neg, pos, total_pos, positives, negatives, contradictory }
    }

    pub fn side(&self) -> usize {
        self.n
    }

    fn sum(&self, table: &[u32], r: &Rect) -> u32 {
        let w = self.n + 1;
        table[(r.x2 + 1) * w + r.y2 + 1] + table[r.x1 * w + r.y1]
            - table[r.x1 * w + r.y2 + 1]
            - table[(r.x2 + 1) * w + r.y1]
    }

    pub fn negatives_in(&self, r: &Rect) -> u32 {
        self.sum(&self.neg, r)
    }

    pub fn positives_in(&self, r: &Rect) -> u32 {
        self.sum(&self.pos, r)
    }

    pub fn total_positives(&self) -> u32 {
        self.total_pos
    }

    pub fn positives(&self) -> &[Cell] {
        &self.positives
    }

    pub fn negatives(&self) -> &[Cell] {
        &self.negatives
    }

    pub fn is_negative(&self, c: Cell) -> bool {
        self.negatives_in(&Rect::cell(c)) > 0
    }

    pub fn is_positive(&self, c: Cell) -> bool {
        self.positives_in(&Rect::cell(c)) > 0
    }

    /// `One(r)` labels every example correctly.
    pub fn one_ok(&self, r: &Rect) -> bool {
        !self.contradictory && self.negatives_in(r) == 0 && self.positives_in(r) == self.total_pos
    }

    /// `Two(a, b)` labels every example correctly; the pair must be separated.
    pub fn two_ok(&self, a: &Rect, b: &Rect) -> bool {
        !self.contradictory
            && self.negatives_in(a) == 0
            && self.negatives_in(b) == 0
            && self.positives_in(a) + self.positives_in(b) == self.total_pos
    }

    pub fn hypothesis_ok(&self, h: &TwoRecHypothesis) -> bool {
        match h {
            TwoRecHypothesis::One(r) => self.one_ok(r),
            TwoRecHypothesis::Two(a, b) => self.two_ok(a, b),
        }
    }

    fn bbox(cells: impl Iterator<Item = Cell>) -> Option<Rect> {
        cells.fold(None, |acc: Option<Rect>, c| {
            let r = Rect::cell(c);
            Some(acc.map_or(r, |a| a.enclosing(&r)))
        })
    }

    pub fn positive_bbox(&self) -> Option<Rect> {
        Self::bbox(self.positives.iter().copied())
    }

    /// Some single rectangle is consistent.
    pub fn any_one(&self) -> bool {
        if self.contradictory {
            return false;
        }
        match self.positive_bbox() {
            Some(b) => self.negatives_in(&b) == 0,
            None => self.negatives.len() < self.n * self.n,
        }
    }

    /// Some separated pair of rectangles is consistent.
    pub fn any_two(&self) -> bool {
        if self.contradictory {
            return false;
        }
        let n = self.n;
        let Some(b) = self.positive_bbox() else {
            let free = (0..n * n).map(|i| Cell::from_index(i, n)).filter(|&c| !self.is_negative(c));
            let (mut x0, mut x1, mut y0, mut y1) = (usize::MAX, 0, usize::MAX, 0);
            for c in free {
                x0 = x0.min(c.x);
                x1 = x1.max(c.x);
                y0 = y0.min(c.y);
                y1 = y1.max(c.y);
            }
            return x0 != usize::MAX && (x1 - x0 >= 2 || y1 - y0 >= 2);
        };
        if self.negatives_in(&b) == 0 {
            let lone = (0..n * n)
                .map(|i| Cell::from_index(i, n))
                .any(|c| !self.is_negative(c) && Rect::cell(c).separated(&b));
            if lone {
                return true;
            }
        }
        for axis in [0, 1] {
            let key = |c: &Cell| if axis == 0 { c.x } else { c.y };
            for k in 0..n.saturating_sub(2) {
                if self.positives.iter().any(|c| key(c) == k + 1) {
                    continue;
                }
                let lo = Self::bbox(self.positives.iter().copied().filter(|c| key(c) <= k));
                let hi = Self::bbox(self.positives.iter().copied().filter(|c| key(c) >= k + 2));
                if let (Some(lo), Some(hi)) = (lo, hi) {
                    if self.negatives_in(&lo) == 0 && self.negatives_in(&hi) == 0 {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Negative-free rectangles containing `core` (every rectangle when `core`
    /// is `None`).
    fn rects_containing(&self, core: Option<Rect>, mut f: impl FnMut(Rect)) {
        let n = self.n;
        let (bx1, by1, bx2, by2) = match core {
            Some(b) => (b.x1, b.y1, b.x2, b.y2),
            None => (n - 1, n - 1, 0, 0),
        };
        for x1 in 0..=bx1 {
            for y1 in 0..=by1 {
                for x2 in bx2.max(x1)..n {
                    for y2 in by2.max(y1)..n {
                        let r = Rect::new(x1, y1, x2, y2);
                        if self.negatives_in(&r) > 0 {
                            break;
                        }
                        f(r);
                    }
                }
            }
        }
    }

    /// Consistent single rectangles, canonical order.
    pub fn consistent_ones(&self) -> Vec<Rect> {
        if !self.any_one() {
            return Vec::new();
        }
        let mut out = Vec::new();
        self.rects_containing(self.positive_bbox(), |r| out.push(r));
        out.sort();
        out
    }
}

/// Negative-free rectangles exactly `d` edge moves from `base`, optionally
/// forced to contain `core`.
fn ring(cons: &Constraints, base: &Rect, d: u32, core: Option<Rect>) -> Vec<Rect> {
    let n = cons.n;
    let b = base.coords();
    let mut out = Vec::new();
    for mask in 0u32..16 {
        if mask.count_ones() != d {
            continue;
        }
        let opts: Vec<Vec<usize>> = (0..4)
            .map(|k| {
                let allowed = |v: usize| match (core, k) {
                    (None, _) => true,
                    (Some(c), 0) => v <= c.x1,
                    (Some(c), 1) => v <= c.y1,
                    (Some(c), 2) => v >= c.x2,
                    (Some(c), _) => v >= c.y2,
                };
                if mask & (1 << k) != 0 {
                    (0..n).filter(|&v| v != b[k] && allowed(v)).collect()
                } else if allowed(b[k]) {
                    vec![b[k]]
                } else {
                    Vec::new()
                }
            })
            .collect();
        for &x1 in &opts[0] {
            for &x2 in opts[2].iter().filter(|&&v| v >= x1) {
                for &y1 in &opts[1] {
                    for &y2 in opts[3].iter().filter(|&&v| v >= y1) {
                        let r = Rect::new(x1, y1, x2, y2);
                        if cons.negatives_in(&r) == 0 {
                            out.push(r);
                        }
                    }
                }
            }
        }
    }
    out
}

enum Group {
    Exact(Vec<TwoRecHypothesis>),
    /// Single rectangles exactly `d` moves from the base.
    Ring1(Rect, u32),
    /// Pairs exactly `d` moves (cheaper matching) from the current pair.
    Ring2(u32),
    /// Consistent single rectangles, filtered by overlap with the current
    /// hypothesis (`None` keeps all), minus an exclusion list.
    Ones(Option<bool>, Vec<TwoRecHypothesis>),
    S1All,
    H2NonS1All,
}

struct Band {
    tier: u8,
    d: u32,
    group: Group,
}

fn bands(class: &TwoRec, cur: &TwoRecHypothesis) -> Vec<Band> {
    let band = |tier, d, group| Band { tier, d, group };
    let mut out = Vec::new();
    match cur.subclass() {
        Subclass::H1 => {
            let TwoRecHypothesis::One(base) = *cur else { unreachable!() };
            for d in 0..=4 {
                out.push(band(0, d, Group::Ring1(base, d)));
            }
            out.push(band(1, 0, Group::S1All));
            out.push(band(2, 0, Group::H2NonS1All));
        }
        Subclass::S1 | Subclass::S2 => {
            let mut special = cur.delete_targets();
            special.extend(cur.merge_target());
            let (h2, ov) = class.shortcut_tiers();
            out.push(band(0, 0, Group::Exact(vec![*cur])));
            out.push(band(1, 0, Group::Exact(special.clone())));
            for d in 1..=8 {
                out.push(band(h2, d, Group::Ring2(d)));
            }
            out.push(band(ov, 0, Group::Ones(Some(true), special.clone())));
            out.push(band(4, 0, Group::Ones(Some(false), special)));
        }
        Subclass::H2Other => {
            for d in 0..=8 {
                out.push(band(0, d, Group::Ring2(d)));
            }
            out.push(band(1, 0, Group::Ones(None, Vec::new())));
        }
    }
    out.sort_by_key(|b| (b.tier, b.d));
    out
}

struct Search<'a> {
    cons: &'a Constraints,
    cur: TwoRecHypothesis,
    any_one: bool,
    any_two: bool,
    near: HashMap<(usize, u32), Vec<Rect>>,
}

impl<'a> Search<'a> {
    fn new(cons: &'a Constraints, cur: TwoRecHypothesis) -> Self {
        Search { cons, cur, any_one: cons.any_one(), any_two: cons.any_two(), near: HashMap::new() }
    }

    fn near(&mut self, which: usize, d: u32) -> &Vec<Rect> {
        let base = self.cur.rects()[which];
        let cons = self.cons;
        self.near.entry((which, d)).or_insert_with(|| ring(cons, &base, d, None))
    }

    fn emit(&mut self, group: &Group) -> Vec<TwoRecHypothesis> {
        let cons = self.cons;
        match group {
            Group::Exact(list) => list.iter().copied().filter(|h| cons.hypothesis_ok(h)).collect(),
            Group::Ring1(base, d) => {
                if !self.any_one {
                    return Vec::new();
                }
                ring(cons, base, *d, cons.positive_bbox()).into_iter().map(TwoRecHypothesis::One).collect()
            }
            Group::Ring2(d) => {
                if !self.any_two {
                    return Vec::new();
                }
                self.ring2(*d)
            }
            Group::Ones(overlap, exclude) => {
                if !self.any_one {
                    return Vec::new();
                }
                cons.consistent_ones()
                    .into_iter()
                    .filter(|r| overlap.is_none_or(|o| self.cur.overlaps_rect(r) == o))
                    .map(TwoRecHypothesis::One)
                    .filter(|h| !exclude.contains(h))
                    .collect()
            }
            Group::S1All => {
                if !self.any_two {
                    return Vec::new();
                }
                s1_all(cons)
            }
            Group::H2NonS1All => {
                if !self.any_two {
                    return Vec::new();
                }
                h2_non_s1_all(cons)
            }
        }
    }

    fn ring2(&mut self, d: u32) -> Vec<TwoRecHypothesis> {
        let TwoRecHypothesis::Two(a, b) = self.cur else { return Vec::new() };
        let total = self.cons.total_positives();
        let mut out = Vec::new();
        for d1 in d.saturating_sub(4)..=d.min(4) {
            let d2 = d - d1;
            let xs = self.near(0, d1).clone();
            let cons = self.cons;
            let mut buckets: HashMap<u32, Vec<Rect>> = HashMap::new();
            for y in self.near(1, d2) {
                buckets.entry(cons.positives_in(y)).or_default().push(*y);
            }
            for x in &xs {
                let px = self.cons.positives_in(x);
                if px > total {
                    continue;
                }
                let Some(ys) = buckets.get(&(total - px)) else { continue };
                for y in ys {
                    if !x.separated(y) {
                        continue;
                    }
                    let swapped = a.edge_moves(y) + b.edge_moves(x);
                    if swapped < d {
                        continue;
                    }
                    out.push(TwoRecHypothesis::two(*x, *y));
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Consistent pairs with at least one singleton rectangle.
fn s1_all(cons: &Constraints) -> Vec<TwoRecHypothesis> {
    let n = cons.n;
    let total = cons.total_positives();
    let mut out = Vec::new();
    for i in 0..n * n {
        let s = Cell::from_index(i, n);
        if cons.is_negative(s) {
            continue;
        }
        let single = Rect::cell(s);
        let ps = cons.positives_in(&single);
        let core = Constraints::bbox(cons.positives.iter().copied().filter(|&c| c != s));
        cons.rects_containing(core, |r| {
            if r.separated(&single) && cons.positives_in(&r) + ps == total {
                out.push(TwoRecHypothesis::two(r, single));
            }
        });
    }
    out.sort();
    out.dedup();
    out
}

/// Consistent pairs of non-singleton rectangles.
fn h2_non_s1_all(cons: &Constraints) -> Vec<TwoRecHypothesis> {
    let total = cons.total_positives();
    let mut free = Vec::new();
    cons.rects_containing(None, |r| {
        if !r.is_singleton() {
            free.push(r)
        }
    });
    let mut buckets: HashMap<u32, Vec<Rect>> = HashMap::new();
    for r in &free {
        buckets.entry(cons.positives_in(r)).or_default().push(*r);
    }
    let mut out = Vec::new();
    for x in &free {
        let px = cons.positives_in(x);
        if px > total {
            continue;
        }
        let Some(ys) = buckets.get(&(total - px)) else { continue };
        for y in ys {
            if x < y && x.separated(y) {
                out.push(TwoRecHypothesis::Two(*x, *y));
            }
        }
    }
    out.sort();
    out
}

pub(crate) fn choice_set(class: &TwoRec, cur: &TwoRecHypothesis, cons: &Constraints) -> Vec<TwoRecHypothesis> {
    let mut search = Search::new(cons, *cur);
    for band in bands(class, cur) {
        let found = search.emit(&band.group);
        if found.is_empty() {
            continue;
        }
        let keyed: Vec<(PreferenceKey, TwoRecHypothesis)> =
            found.into_iter().map(|h| (class.preference_key(&h, cur), h)).collect();
        let best = keyed.iter().map(|(k, _)| *k).min().expect("non-empty");
        let mut out: Vec<_> = keyed.into_iter().filter(|(k, _)| *k == best).map(|(_, h)| h).collect();
        out.sort();
        return out;
    }
    Vec::new()
}

/// Consistent hypotheses with key at most `threshold`, stopping once `cap`
/// are collected.
pub(crate) fn preferred(
    class: &TwoRec,
    cur: &TwoRecHypothesis,
    cons: &Constraints,
    threshold: PreferenceKey,
    cap: usize,
) -> Vec<TwoRecHypothesis> {
    let mut search = Search::new(cons, *cur);
    let mut out = Vec::new();
    for band in bands(class, cur) {
        if (band.tier, band.d) > (threshold.tier, threshold.dist) {
            break;
        }
        for h in search.emit(&band.group) {
            if class.preference_key(&h, cur) <= threshold {
                out.push(h);
                if out.len() >= cap {
                    return out;
                }
            }
        }
    }
    out
}
