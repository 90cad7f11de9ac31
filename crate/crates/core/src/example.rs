//! Ground-set locations and labeled teaching examples.

use serde::{Deserialize, Serialize};

/// A grid cell (2-Rec) or lattice node (Lattice). `x` is the column, `y` the row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub x: usize,
    pub y: usize,
}

impl Cell {
    pub const fn new(x: usize, y: usize) -> Self {
        Cell { x, y }
    }

    pub fn in_bounds(self, n: usize) -> bool {
        self.x < n && self.y < n
    }

    /// Dense row-major index on an `n`-wide grid.
    pub fn index(self, n: usize) -> usize {
        self.y * n + self.x
    }

    pub fn from_index(idx: usize, n: usize) -> Self {
        Cell { x: idx % n, y: idx / n }
    }

    pub fn l1(self, other: Cell) -> usize {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y)
    }
}

/// All cells of an `n`x`n` grid in lexicographic `(x, y)` order.
pub fn all_cells(n: usize) -> Vec<Cell> {
    let mut cells = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            cells.push(Cell::new(x, y));
        }
    }
    cells
}

/// A location together with the label the target hypothesis assigns to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabeledExample {
    pub cell: Cell,
    pub label: bool,
}

impl LabeledExample {
    pub const fn new(cell: Cell, label: bool) -> Self {
        LabeledExample { cell, label }
    }

    pub const fn positive(x: usize, y: usize) -> Self {
        LabeledExample { cell: Cell::new(x, y), label: true }
    }

    pub const fn negative(x: usize, y: usize) -> Self {
        LabeledExample { cell: Cell::new(x, y), label: false }
    }
}

#[derive(Serialize, Deserialize)]
struct ExampleWire {
    x: usize,
    y: usize,
    label: u8,
}

impl Serialize for LabeledExample {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ExampleWire { x: self.cell.x, y: self.cell.y, label: self.label as u8 }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LabeledExample {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = ExampleWire::deserialize(d)?;
        let label = match w.label {
            0 => false,
            1 => true,
            other => {
                return Err(serde::de::Error::custom(format!("label must be 0 or 1, got {other}")))
            }
        };
        Ok(LabeledExample { cell: Cell::new(w.x, w.y), label })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_format() {
        let z = LabeledExample::positive(3, 4);
        assert_eq!(serde_json::to_string(&z).unwrap(), r#"{"x":3,"y":4,"label":1}"#);
        let back: LabeledExample = serde_json::from_str(r#"{"x":0,"y":2,"label":0}"#).unwrap();
        assert_eq!(back, LabeledExample::negative(0, 2));
        assert!(serde_json::from_str::<LabeledExample>(r#"{"x":0,"y":2,"label":2}"#).is_err());
    }

    #[test]
    fn index_roundtrip() {
        for idx in 0..25 {
            assert_eq!(Cell::from_index(idx, 5).index(5), idx);
        }
    }
}
