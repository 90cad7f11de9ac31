//! The Lattice class: every node of an `n`x`n` grid is a hypothesis, and a
//! positive example at a node asserts that node is not the target.


use serde::{Deserialize, Serialize};

use crate::class::HypothesisClass;
use crate::example::{Cell, LabeledExample};
use crate::preference::PreferenceKey;

/// Largest side length whose class is enumerated by default.
pub const DEFAULT_ENUMERATION_CAP: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeNode {
    pub i: usize,
    pub j: usize,
}

impl LatticeNode {
    pub const fn new(i: usize, j: usize) -> Self {
        LatticeNode { i, j }
    }

    pub fn cell(self) -> Cell {
        Cell::new(self.i, self.j)
    }

    pub fn from_cell(c: Cell) -> Self {
        LatticeNode { i: c.x, j: c.y }
    }

    pub fn l1(self, o: LatticeNode) -> usize {
        self.i.abs_diff(o.i) + self.j.abs_diff(o.j)
    }

    /// In-bounds axis neighbors, lexicographic.
    pub fn neighbors(self, n: usize) -> Vec<LatticeNode> {
        let mut v = Vec::with_capacity(4);
        if self.i > 0 {
            v.push(LatticeNode::new(self.i - 1, self.j));
        }
        if self.j > 0 {
            v.push(LatticeNode::new(self.i, self.j - 1));
        }
        if self.j + 1 < n {
            v.push(LatticeNode::new(self.i, self.j + 1));
        }
        if self.i + 1 < n {
            v.push(LatticeNode::new(self.i + 1, self.j));
        }
        v
    }
}

#[derive(Serialize, Deserialize)]
struct NodeWire {
    node: [usize; 2],
}

impl Serialize for LatticeNode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        NodeWire { node: [self.i, self.j] }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticeNode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = NodeWire::deserialize(d)?;
        Ok(LatticeNode::new(w.node[0], w.node[1]))
    }
}

/// How equal-distance nodes are ordered before they become genuine ties.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieRule {
    /// Larger `i + j` preferred.
    #[default]
    CoordinateSum,
    /// Larger `(i, j)` preferred lexicographically.
    Lexicographic,
    /// Pure L1 distance.
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    n: usize,
    tie: TieRule,
    enumeration_cap: usize,
}

impl Lattice {
    pub fn new(n: usize) -> Self {
        Lattice { n, tie: TieRule::default(), enumeration_cap: DEFAULT_ENUMERATION_CAP }
    }

    pub fn with_tie_rule(n: usize, tie: TieRule) -> Self {
        Lattice { n, tie, enumeration_cap: DEFAULT_ENUMERATION_CAP }
    }

    pub fn tie_rule(&self) -> TieRule {
        self.tie
    }

    pub fn positive_example_at(&self, v: LatticeNode) -> LabeledExample {
        LabeledExample::new(v.cell(), true)
    }

    fn subkey(&self, v: LatticeNode) -> i64 {
        match self.tie {
            TieRule::CoordinateSum => -((v.i + v.j) as i64),
            TieRule::Lexicographic => -((v.i * self.n + v.j) as i64),
            TieRule::None => 0,
        }
    }

    /// In-bounds nodes at exactly L1 distance `d` from `h`, lexicographic.
    pub fn ring(&self, h: LatticeNode, d: usize) -> Vec<LatticeNode> {
        let n = self.n as isize;
        let (hi, hj, d) = (h.i as isize, h.j as isize, d as isize);
        let mut out = Vec::with_capacity(4 * d as usize + 1);
        for di in -d..=d {
            let rest = d - di.abs();
            for dj in [-rest, rest] {
                let (i, j) = (hi + di, hj + dj);
                if (0..n).contains(&i) && (0..n).contains(&j) {
                    out.push(LatticeNode::new(i as usize, j as usize));
                }
                if rest == 0 {
                    break;
                }
            }
        }
        out.sort();
        out
    }

    /// Surviving nodes in ascending key order from `h`, visited ring by ring
    /// until `visit` returns false.
    fn walk(&self, h: LatticeNode, examples: &[LabeledExample], mut visit: impl FnMut(usize, &[LatticeNode]) -> bool) {
        let mut flagged = vec![false; self.n * self.n];
        for z in examples.iter().filter(|z| z.label) {
            flagged[z.cell.index(self.n)] = true;
        }
        let pinned: Vec<Cell> = examples.iter().filter(|z| !z.label).map(|z| z.cell).collect();
        let alive = |v: &LatticeNode| !flagged[v.cell().index(self.n)] && pinned.iter().all(|c| *c == v.cell());
        for d in 0..=2 * self.n {
            let ring: Vec<LatticeNode> = self.ring(h, d).into_iter().filter(alive).collect();
            if !visit(d, &ring) {
                return;
            }
        }
    }
}

impl HypothesisClass for Lattice {
    type Hypothesis = LatticeNode;

    fn side(&self) -> usize {
        self.n
    }

    fn is_valid(&self, h: &LatticeNode) -> bool {
        h.i < self.n && h.j < self.n
    }

    fn label(&self, h: &LatticeNode, cell: Cell) -> bool {
        h.cell() != cell
    }

    fn preference_key(&self, cand: &LatticeNode, cur: &LatticeNode) -> PreferenceKey {
        PreferenceKey::new(0, cand.l1(*cur) as u32, self.subkey(*cand))
    }

    fn enumerate(&self) -> Vec<LatticeNode> {
        let mut v: Vec<_> = (0..self.n).flat_map(|i| (0..self.n).map(move |j| LatticeNode::new(i, j))).collect();
        v.sort();
        v
    }

    fn enumeration_allowed(&self) -> bool {
        self.n <= self.enumeration_cap
    }

    fn structured_choice_set(&self, cur: &LatticeNode, examples: &[LabeledExample]) -> Vec<LatticeNode> {
        let mut out = Vec::new();
        self.walk(*cur, examples, |_, ring| {
            if let Some(best) = ring.iter().map(|v| self.subkey(*v)).min() {
                out = ring.iter().copied().filter(|v| self.subkey(*v) == best).collect();
                return false;
            }
            true
        });
        out
    }

    fn count_preferred(&self, cur: &LatticeNode, examples: &[LabeledExample], threshold: PreferenceKey, cap: usize) -> usize {
        let mut count = 0;
        self.walk(*cur, examples, |d, ring| {
            if d as u32 > threshold.dist {
                return false;
            }
            count += ring.iter().filter(|v| self.preference_key(v, cur) <= threshold).count();
            count < cap
        });
        count.min(cap)
    }

    fn example_allowed(&self, z: &LabeledExample) -> bool {
        z.label
    }

    fn teachable_cells(&self, target: &LatticeNode) -> Vec<Cell> {
        crate::example::all_cells(self.n).into_iter().filter(|c| *c != target.cell()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_examples() {
        let l = Lattice::new(9);
        let h = LatticeNode::new(2, 2);
        let a = l.preference_key(&LatticeNode::new(3, 2), &h);
        let b = l.preference_key(&LatticeNode::new(4, 2), &h);
        assert_eq!(a.dist, 1);
        assert_eq!(b.dist, 2);
        assert!(a < b);
        assert_eq!(a, l.preference_key(&LatticeNode::new(2, 3), &h));
        assert!(a < l.preference_key(&LatticeNode::new(1, 2), &h));
    }

    #[test]
    fn choice_after_flagging_current() {
        let l = Lattice::new(9);
        let z = l.positive_example_at(LatticeNode::new(2, 2));
        let c = l.structured_choice_set(&LatticeNode::new(2, 2), &[z]);
        assert_eq!(c, vec![LatticeNode::new(2, 3), LatticeNode::new(3, 2)]);
    }

    #[test]
    fn wire_format() {
        let v = LatticeNode::new(3, 1);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"node":[3,1]}"#);
        assert_eq!(serde_json::from_str::<LatticeNode>(r#"{"node":[3,1]}"#).unwrap(), v);
    }
}
