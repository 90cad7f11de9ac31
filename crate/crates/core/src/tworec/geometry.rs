use serde::{Deserialize, Serialize};

use crate::error::{Result, TeachError};
use crate::example::Cell;

/// Axis-aligned rectangle with inclusive 0-based cell bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x1: usize,
    pub y1: usize,
    pub x2: usize,
    pub y2: usize,
}

impl Rect {
    pub const fn new(x1: usize, y1: usize, x2: usize, y2: usize) -> Self {
        Rect { x1, y1, x2, y2 }
    }

    pub const fn cell(c: Cell) -> Self {
        Rect { x1: c.x, y1: c.y, x2: c.x, y2: c.y }
    }

    pub fn is_valid(&self, n: usize) -> bool {
        self.x1 <= self.x2 && self.y1 <= self.y2 && self.x2 < n && self.y2 < n
    }

    pub fn width(&self) -> usize {
        self.x2 - self.x1 + 1
    }

    pub fn height(&self) -> usize {
        self.y2 - self.y1 + 1
    }

    pub fn area(&self) -> usize {
        self.width() * self.height()
    }

    pub fn is_singleton(&self) -> bool {
        self.x1 == self.x2 && self.y1 == self.y2
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.x1 <= c.x && c.x <= self.x2 && self.y1 <= c.y && c.y <= self.y2
    }

    pub fn contains_rect(&self, o: &Rect) -> bool {
        self.x1 <= o.x1 && o.x2 <= self.x2 && self.y1 <= o.y1 && o.y2 <= self.y2
    }

    pub fn overlaps(&self, o: &Rect) -> bool {
        self.x1 <= o.x2 && o.x1 <= self.x2 && self.y1 <= o.y2 && o.y1 <= self.y2
    }

    /// Cell-disjoint with at least one empty row or column between the two.
    pub fn separated(&self, o: &Rect) -> bool {
        self.x2 + 1 < o.x1 || o.x2 + 1 < self.x1 || self.y2 + 1 < o.y1 || o.y2 + 1 < self.y1
    }

    pub fn enclosing(&self, o: &Rect) -> Rect {
        Rect {
            x1: self.x1.min(o.x1),
            y1: self.y1.min(o.y1),
            x2: self.x2.max(o.x2),
            y2: self.y2.max(o.y2),
        }
    }

    pub fn coords(&self) -> [usize; 4] {
        [self.x1, self.y1, self.x2, self.y2]
    }

    pub fn from_coords(c: [usize; 4]) -> Rect {
        Rect { x1: c[0], y1: c[1], x2: c[2], y2: c[3] }
    }

    /// Number of edge coordinates that differ.
    pub fn edge_moves(&self, o: &Rect) -> u32 {
        self.coords().iter().zip(o.coords()).filter(|(a, b)| **a != *b).count() as u32
    }

    /// Total displacement of the edges, in cells.
    pub fn edge_displacement(&self, o: &Rect) -> u32 {
        self.coords().iter().zip(o.coords()).map(|(a, b)| a.abs_diff(b) as u32).sum()
    }

    /// The four corner cells, lexicographic.
    pub fn corners(&self) -> Vec<Cell> {
        let mut v = vec![
            Cell::new(self.x1, self.y1),
            Cell::new(self.x1, self.y2),
            Cell::new(self.x2, self.y1),
            Cell::new(self.x2, self.y2),
        ];
        v.sort();
        v.dedup();
        v
    }

    /// Cells in lexicographic `(x, y)` order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (self.x1..=self.x2).flat_map(move |x| (self.y1..=self.y2).map(move |y| Cell::new(x, y)))
    }

    /// Longest side.
    pub fn max_side(&self) -> usize {
        self.width().max(self.height())
    }
}

/// One rectangle (H¹) or two separated rectangles (H²), the pair stored in
/// canonical lexicographic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TwoRecHypothesis {
    One(Rect),
    Two(Rect, Rect),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subclass {
    H1,
    S1,
    S2,
    H2Other,
}

impl TwoRecHypothesis {
    pub fn one(r: Rect) -> Self {
        TwoRecHypothesis::One(r)
    }

    pub fn two(a: Rect, b: Rect) -> Self {
        if a <= b {
            TwoRecHypothesis::Two(a, b)
        } else {
            TwoRecHypothesis::Two(b, a)
        }
    }

    pub fn rects(&self) -> Vec<Rect> {
        match *self {
            TwoRecHypothesis::One(r) => vec![r],
            TwoRecHypothesis::Two(a, b) => vec![a, b],
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, TwoRecHypothesis::One(_))
    }

    pub fn is_valid(&self, n: usize) -> bool {
        match self {
            TwoRecHypothesis::One(r) => r.is_valid(n),
            TwoRecHypothesis::Two(a, b) => a.is_valid(n) && b.is_valid(n) && a < b && a.separated(b),
        }
    }

    pub fn contains(&self, c: Cell) -> bool {
        match self {
            TwoRecHypothesis::One(r) => r.contains(c),
            TwoRecHypothesis::Two(a, b) => a.contains(c) || b.contains(c),
        }
    }

    pub fn area(&self) -> usize {
        self.rects().iter().map(Rect::area).sum()
    }

    pub fn enclosing(&self) -> Rect {
        match *self {
            TwoRecHypothesis::One(r) => r,
            TwoRecHypothesis::Two(a, b) => a.enclosing(&b),
        }
    }

    pub fn overlaps_rect(&self, r: &Rect) -> bool {
        self.rects().iter().any(|q| q.overlaps(r))
    }

    pub fn is_s1(&self) -> bool {
        matches!(self, TwoRecHypothesis::Two(a, b) if a.is_singleton() || b.is_singleton())
    }

    /// Two rectangles spanning their enclosing rectangle with a single empty
    /// full-length row or column between them.
    pub fn is_split(&self) -> bool {
        let TwoRecHypothesis::Two(a, b) = *self else { return false };
        let vertical = a.y1 == b.y1 && a.y2 == b.y2 && (a.x2 + 2 == b.x1 || b.x2 + 2 == a.x1);
        let horizontal = a.x1 == b.x1 && a.x2 == b.x2 && (a.y2 + 2 == b.y1 || b.y2 + 2 == a.y1);
        vertical || horizontal
    }

    pub fn subclass(&self) -> Subclass {
        if self.is_one() {
            Subclass::H1
        } else if self.is_s1() {
            Subclass::S1
        } else if self.is_split() {
            Subclass::S2
        } else {
            Subclass::H2Other
        }
    }

    /// The H¹ hypotheses reached by dropping a singleton rectangle.
    pub fn delete_targets(&self) -> Vec<TwoRecHypothesis> {
        let TwoRecHypothesis::Two(a, b) = *self else { return Vec::new() };
        let mut out = Vec::new();
        if b.is_singleton() {
            out.push(TwoRecHypothesis::One(a));
        }
        if a.is_singleton() {
            out.push(TwoRecHypothesis::One(b));
        }
        out.sort();
        out
    }

    /// The enclosing rectangle of a split pair.
    pub fn merge_target(&self) -> Option<TwoRecHypothesis> {
        self.is_split().then(|| TwoRecHypothesis::One(self.enclosing()))
    }
}

/// Edge-move distance within a subclass; H² pairs take the cheaper matching.
pub fn dist_e(h: &TwoRecHypothesis, g: &TwoRecHypothesis) -> Result<u32> {
    match (h, g) {
        (TwoRecHypothesis::One(a), TwoRecHypothesis::One(b)) => Ok(a.edge_moves(b)),
        (TwoRecHypothesis::Two(a1, a2), TwoRecHypothesis::Two(b1, b2)) => {
            Ok((a1.edge_moves(b1) + a2.edge_moves(b2)).min(a1.edge_moves(b2) + a2.edge_moves(b1)))
        }
        _ => Err(TeachError::Domain("edge distance is only defined within H1 or within H2".into())),
    }
}

/// Edge displacement of the matching that realizes [`dist_e`], breaking
/// matching ties toward the smaller displacement.
pub(crate) fn matched_displacement(h: &TwoRecHypothesis, g: &TwoRecHypothesis) -> u32 {
    match (h, g) {
        (TwoRecHypothesis::One(a), TwoRecHypothesis::One(b)) => a.edge_displacement(b),
        (TwoRecHypothesis::Two(a1, a2), TwoRecHypothesis::Two(b1, b2)) => {
            let id = (a1.edge_moves(b1) + a2.edge_moves(b2), a1.edge_displacement(b1) + a2.edge_displacement(b2));
            let sw = (a1.edge_moves(b2) + a2.edge_moves(b1), a1.edge_displacement(b2) + a2.edge_displacement(b1));
            id.min(sw).1
        }
        _ => 0,
    }
}

/// Every rectangle on an `n`x`n` grid, in canonical order.
pub fn all_rects(n: usize) -> Vec<Rect> {
    let mut out = Vec::with_capacity((n * (n + 1) / 2).pow(2));
    for x1 in 0..n {
        for y1 in 0..n {
            for x2 in x1..n {
                for y2 in y1..n {
                    out.push(Rect::new(x1, y1, x2, y2));
                }
            }
        }
    }
    out
}

/// H¹ followed by H², each in canonical order.
pub fn enumerate_hypotheses(n: usize) -> Vec<TwoRecHypothesis> {
    let rects = all_rects(n);
    let mut out: Vec<TwoRecHypothesis> = rects.iter().map(|&r| TwoRecHypothesis::One(r)).collect();
    for (i, a) in rects.iter().enumerate() {
        for b in &rects[i + 1..] {
            if a.separated(b) {
                out.push(TwoRecHypothesis::Two(*a, *b));
            }
        }
    }
    out.sort();
    out
}

#[derive(Serialize, Deserialize)]
struct HypothesisWire {
    rects: Vec<Rect>,
}

impl Serialize for TwoRecHypothesis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HypothesisWire { rects: self.rects() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TwoRecHypothesis {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = HypothesisWire::deserialize(d)?;
        for r in &w.rects {
            if r.x1 > r.x2 || r.y1 > r.y2 {
                return Err(serde::de::Error::custom("rectangle corners out of order"));
            }
        }
        match w.rects.as_slice() {
            [r] => Ok(TwoRecHypothesis::One(*r)),
            [a, b] if a.separated(b) => Ok(TwoRecHypothesis::two(*a, *b)),
            [_, _] => Err(serde::de::Error::custom("rectangles must be separated by an empty row or column")),
            _ => Err(serde::de::Error::custom("expected one or two rectangles")),
        }
    }
}
