//! The cell functions `f: 𝒳 → ℤⁿ` on a discrete loop of length `m` with the
//! second cut at `h`.
//!
//! Each 2-cell reads the loop as a signed union of half-open index intervals;
//! its value is the displacement of that union. A zero splits the letters into
//! the union and its complement, both with zero displacement.

use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::ComplexError;
use crate::geometry::LatticePath;
use crate::words::Displacement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
    I,
    J,
    K,
    L,
}

impl Cell {
    pub const ALL: [Cell; 12] = [
        Cell::A,
        Cell::B,
        Cell::C,
        Cell::D,
        Cell::E,
        Cell::F,
        Cell::G,
        Cell::H,
        Cell::I,
        Cell::J,
        Cell::K,
        Cell::L,
    ];

    pub fn name(self) -> &'static str {
        ["A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L"][self as usize]
    }

    pub fn from_name(s: &str) -> Result<Cell, ComplexError> {
        Cell::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| ComplexError::UnknownCell(s.to_string()))
    }

    pub fn in_domain(self, x: usize, y: usize, h: usize, m: usize) -> bool {
        match self {
            Cell::A | Cell::B | Cell::C | Cell::D => x <= h && h <= y && y <= m,
            Cell::E | Cell::F | Cell::G | Cell::H => x <= y && y <= h,
            Cell::I | Cell::J | Cell::K | Cell::L => h <= x && x <= y && y <= m,
        }
    }

    /// `(sign, start, end)` intervals read by the cell at `(x, y)`.
    fn intervals(self, x: usize, y: usize, h: usize, m: usize) -> Vec<(i32, usize, usize)> {
        match self {
            Cell::A => vec![(1, 0, x), (1, h, y)],
            Cell::B => vec![(1, x, h), (1, h, y)],
            Cell::C => vec![(1, x, h), (1, y, m)],
            Cell::D => vec![(1, 0, x), (1, y, m)],
            Cell::E => vec![(1, 0, x), (1, y, h)],
            Cell::F | Cell::J => vec![(1, x, y)],
            Cell::G => vec![(1, x, y), (1, h, m)],
            Cell::H | Cell::L => vec![(-1, x, y)],
            Cell::I => vec![(1, h, x), (1, y, m)],
            Cell::K => vec![(1, x, y), (1, 0, h)],
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

/// Sorted letter indices on one side of a bipartition.
pub type Side = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellZero {
    pub cell: Cell,
    pub x: usize,
    pub y: usize,
    /// Letters read by the cell; the rest of the loop is the other side.
    pub side: Side,
}

impl CellZero {
    pub fn bipartition(&self, m: usize) -> (Side, Side) {
        cut_bipartition(&self.side, m)
    }
}

/// `side` and its complement in `0..m`, the part holding letter 0 first.
pub fn cut_bipartition(side: &[usize], m: usize) -> (Side, Side) {
    let rest: Side = (0..m).filter(|i| side.binary_search(i).is_err()).collect();
    if side.first() == Some(&0) {
        (side.to_vec(), rest)
    } else {
        (rest, side.to_vec())
    }
}

fn check(path: &LatticePath, q: usize) -> Result<(), ComplexError> {
    if q > path.len() {
        return Err(ComplexError::CutOutOfRange { q, m: path.len() });
    }
    Ok(())
}

fn midpoint(path: &LatticePath) -> Result<usize, ComplexError> {
    let m = path.len();
    if !m.is_multiple_of(2) {
        return Err(ComplexError::OddLength(m));
    }
    Ok(m / 2)
}

/// `f(cell)(x, y)` with the second cut at `m / 2`.
pub fn evaluate_cell_function(
    cell: Cell,
    path: &LatticePath,
    x: usize,
    y: usize,
) -> Result<Displacement, ComplexError> {
    evaluate_cell_function_at(cell, path, midpoint(path)?, x, y)
}

/// `f(cell)(x, y)` with the second cut at `q`.
pub fn evaluate_cell_function_at(
    cell: Cell,
    path: &LatticePath,
    q: usize,
    x: usize,
    y: usize,
) -> Result<Displacement, ComplexError> {
    check(path, q)?;
    let m = path.len();
    if !cell.in_domain(x, y, q, m) {
        return Err(ComplexError::OutOfDomain {
            cell: cell.name().to_string(),
            x,
            y,
        });
    }
    Ok(value(cell, path, q, x, y))
}

fn value(cell: Cell, path: &LatticePath, q: usize, x: usize, y: usize) -> Displacement {
    let mut v = Displacement::zero(path.dimension());
    for (sign, a, b) in cell.intervals(x, y, q, path.len()) {
        let d = path.point(b) - path.point(a);
        v += if sign > 0 { d } else { -d };
    }
    v
}

fn side(cell: Cell, x: usize, y: usize, q: usize, m: usize) -> Side {
    let mut s: Side = cell
        .intervals(x, y, q, m)
        .into_iter()
        .flat_map(|(_, a, b)| a..b)
        .collect();
    s.sort_unstable();
    s
}

/// Every non-degenerate zero of the twelve cell functions, second cut at `m / 2`.
pub fn zero_scan(path: &LatticePath) -> Result<Vec<CellZero>, ComplexError> {
    zero_scan_at(path, midpoint(path)?)
}

/// Every zero of the cell functions with the second cut at `q`, ordered by
/// cell, then `x`, then `y`. Zeros reading no letters or the whole loop are
/// degenerate and left out.
pub fn zero_scan_at(path: &LatticePath, q: usize) -> Result<Vec<CellZero>, ComplexError> {
    check(path, q)?;
    let m = path.len();
    let per_cell: Vec<Vec<CellZero>> = Cell::ALL
        .par_iter()
        .map(|&cell| {
            let mut out = Vec::new();
            for x in 0..=m {
                for y in x.min(q)..=m {
                    if !cell.in_domain(x, y, q, m) || !value(cell, path, q, x, y).is_zero() {
                        continue;
                    }
                    let s = side(cell, x, y, q, m);
                    if s.is_empty() || s.len() == m {
                        continue;
                    }
                    out.push(CellZero {
                        cell,
                        x,
                        y,
                        side: s,
                    });
                }
            }
            out
        })
        .collect();
    Ok(per_cell.into_iter().flatten().collect())
}
