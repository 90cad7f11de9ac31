use std::collections::BTreeSet;

use crate::error::{Result, TeachError};
use crate::example::{Cell, LabeledExample};
use crate::tworec::{Rect, TwoRecHypothesis};

/// A corner location and whether it is one of the rectangle's own cells.
pub(crate) type Corner = (bool, Cell);

fn push_adjacent(out: &mut Vec<Corner>, n: usize, x: isize, y: isize) {
    if x >= 0 && y >= 0 && (x as usize) < n && (y as usize) < n {
        out.push((false, Cell::new(x as usize, y as usize)));
    }
}

/// Positive corners of `r` on the main diagonal plus their outward axis
/// neighbors.
pub(crate) fn diagonal_corners(r: &Rect, n: usize) -> Vec<Corner> {
    let (x1, y1, x2, y2) = (r.x1 as isize, r.y1 as isize, r.x2 as isize, r.y2 as isize);
    let mut out = vec![(true, Cell::new(r.x1, r.y1)), (true, Cell::new(r.x2, r.y2))];
    push_adjacent(&mut out, n, x1 - 1, y1);
    push_adjacent(&mut out, n, x1, y1 - 1);
    push_adjacent(&mut out, n, x2 + 1, y2);
    push_adjacent(&mut out, n, x2, y2 + 1);
    out
}

/// All four positive corners of `r` plus their outward axis neighbors.
pub(crate) fn all_corners(r: &Rect, n: usize) -> Vec<Corner> {
    let (x1, y1, x2, y2) = (r.x1 as isize, r.y1 as isize, r.x2 as isize, r.y2 as isize);
    let mut out: Vec<Corner> = r.corners().into_iter().map(|c| (true, c)).collect();
    for (x, y, dx, dy) in [(x1, y1, -1, -1), (x1, y2, -1, 1), (x2, y1, 1, -1), (x2, y2, 1, 1)] {
        push_adjacent(&mut out, n, x + dx, y);
        push_adjacent(&mut out, n, x, y + dy);
    }
    out
}

/// Positives first, then lexicographic; duplicates dropped.
pub(crate) fn canonical(corners: Vec<Corner>) -> Vec<Cell> {
    let set: BTreeSet<(bool, Cell)> = corners.into_iter().map(|(p, c)| (!p, c)).collect();
    let mut seen = BTreeSet::new();
    set.into_iter().filter(|(_, c)| seen.insert(*c)).map(|(_, c)| c).collect()
}

pub(crate) fn hypothesis_diagonal_corners(h: &TwoRecHypothesis, n: usize) -> Vec<Cell> {
    canonical(h.rects().iter().flat_map(|r| diagonal_corners(r, n)).collect())
}

pub(crate) fn hypothesis_all_corners(h: &TwoRecHypothesis, n: usize) -> Vec<Cell> {
    canonical(h.rects().iter().flat_map(|r| all_corners(r, n)).collect())
}

/// Cells on the border of `r`, lexicographic.
fn border_cells(r: &Rect) -> Vec<Cell> {
    r.cells().filter(|c| c.x == r.x1 || c.x == r.x2 || c.y == r.y1 || c.y == r.y2).collect()
}

/// The non-adaptive 2-Rec sequence, computed from `h0` and the target only.
///
/// From two rectangles to one: if both rectangles overlap the target, every
/// corner of the target followed by its border cells; otherwise every cell of
/// the rectangles disjoint from the target followed by the target's corners.
/// All other scenarios get the diagonal corners of each target rectangle.
pub fn build_non_r(n: usize, h0: &TwoRecHypothesis, target: &TwoRecHypothesis) -> Result<Vec<LabeledExample>> {
    if !h0.is_valid(n) || !target.is_valid(n) {
        return Err(TeachError::Domain("2-Rec endpoints out of bounds".into()));
    }
    if h0 == target {
        return Ok(Vec::new());
    }
    let cells: Vec<Cell> = match (h0, target) {
        (TwoRecHypothesis::Two(a, b), TwoRecHypothesis::One(t)) => {
            if a.overlaps(t) && b.overlaps(t) {
                let mut v = hypothesis_all_corners(target, n);
                v.extend(border_cells(t));
                v
            } else {
                let mut v: Vec<Cell> = [a, b].into_iter().filter(|r| !r.overlaps(t)).flat_map(|r| r.cells().collect::<Vec<_>>()).collect();
                v.extend(hypothesis_all_corners(target, n));
                v
            }
        }
        _ => hypothesis_diagonal_corners(target, n),
    };
    let mut seen = BTreeSet::new();
    Ok(cells
        .into_iter()
        .filter(|c| seen.insert(*c))
        .map(|c| LabeledExample::new(c, target.contains(c)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h1_target_gets_six_diagonal_corners() {
        let h0 = TwoRecHypothesis::one(Rect::new(0, 0, 1, 1));
        let t = TwoRecHypothesis::one(Rect::new(2, 2, 4, 4));
        let seq = build_non_r(7, &h0, &t).unwrap();
        assert_eq!(seq.len(), 6);
        assert_eq!(seq.iter().filter(|z| z.label).count(), 2);
    }

    #[test]
    fn corners_clip_at_the_grid_edge() {
        let r = Rect::new(0, 0, 2, 2);
        assert_eq!(canonical(all_corners(&r, 3)).len(), 4);
        assert_eq!(canonical(all_corners(&Rect::new(1, 1, 2, 2), 5)).len(), 12);
    }
}
