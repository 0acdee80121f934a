//! The 2-complex 𝒳 parametrizing cut pairs `(r, s)` of a loop, with its integer
//! boundary maps, homology, vertex links and the cell functions `f`.
//!
//! Four 0-cells `p1..p4`, eight 1-cells `α β γ δ ᾱ β̄ γ̄ δ̄` and twelve 2-cells
//! `A..L`. The squares `A..D` cover `0 <= x <= h <= y <= m`, the bigons
//! `E..H` the triangle `0 <= x <= y <= h` and `I..L` the triangle
//! `h <= x <= y <= m`.

mod cells;
mod matrix;
mod snf;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

pub use cells::{
    cut_bipartition, evaluate_cell_function, evaluate_cell_function_at, zero_scan, zero_scan_at,
    Cell, CellZero, Side,
};
pub use matrix::Matrix;
pub use snf::{smith_normal_form, SmithForm};

pub const ZERO_CELLS: [&str; 4] = ["p1", "p2", "p3", "p4"];
pub const ONE_CELLS: [&str; 8] = [
    "alpha",
    "beta",
    "gamma",
    "delta",
    "alpha_bar",
    "beta_bar",
    "gamma_bar",
    "delta_bar",
];
pub const TWO_CELLS: [&str; 12] = ["A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("chain has {found} coefficients, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("unknown cell {0:?}")]
    UnknownCell(String),
    #[error("boundary of {0} has more than one cyclic order")]
    AmbiguousCyclicOrder(String),
    #[error("boundary of {0} does not close up")]
    OpenBoundary(String),
    #[error("({x}, {y}) is outside the domain of cell {cell}")]
    OutOfDomain { cell: String, x: usize, y: usize },
    #[error("loop of odd length {0} has no midpoint")]
    OddLength(usize),
    #[error("cut {q} lies beyond the loop of length {m}")]
    CutOutOfRange { q: usize, m: usize },
}

/// Cells and boundary matrices. `d1` is `|0-cells| × |1-cells|`, `d2` is
/// `|1-cells| × |2-cells|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellComplexData {
    pub zero_cells: Vec<String>,
    pub one_cells: Vec<String>,
    pub two_cells: Vec<String>,
    #[serde(rename = "boundary_1")]
    pub d1: Matrix,
    #[serde(rename = "boundary_2")]
    pub d2: Matrix,
}

fn index_of(names: &[String], name: &str) -> Result<usize, ComplexError> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| ComplexError::UnknownCell(name.to_string()))
}

/// The complex 𝒳.
pub fn build_complex() -> CellComplexData {
    // ∂(1-cell) = head − tail
    let edges: [(&str, &str, &str); 8] = [
        ("alpha", "p1", "p2"),
        ("beta", "p2", "p1"),
        ("gamma", "p1", "p3"),
        ("delta", "p3", "p1"),
        ("alpha_bar", "p4", "p3"),
        ("beta_bar", "p3", "p4"),
        ("gamma_bar", "p4", "p2"),
        ("delta_bar", "p2", "p4"),
    ];
    let faces: [(&str, &[(&str, i64)]); 12] = [
        (
            "A",
            &[
                ("beta_bar", 1),
                ("alpha", -1),
                ("delta_bar", -1),
                ("gamma", 1),
            ],
        ),
        (
            "B",
            &[
                ("alpha_bar", 1),
                ("beta", -1),
                ("gamma", -1),
                ("delta_bar", 1),
            ],
        ),
        (
            "C",
            &[
                ("beta", 1),
                ("alpha_bar", -1),
                ("delta", -1),
                ("gamma_bar", 1),
            ],
        ),
        (
            "D",
            &[
                ("alpha", 1),
                ("beta_bar", -1),
                ("gamma_bar", -1),
                ("delta", 1),
            ],
        ),
        ("E", &[("alpha", 1), ("beta", 1)]),
        ("F", &[("beta", 1), ("alpha", 1)]),
        ("G", &[("alpha_bar", 1), ("beta_bar", 1)]),
        ("H", &[("beta_bar", 1), ("alpha_bar", 1)]),
        ("I", &[("gamma", 1), ("delta", 1)]),
        ("J", &[("delta", 1), ("gamma", 1)]),
        ("K", &[("gamma_bar", 1), ("delta_bar", 1)]),
        ("L", &[("delta_bar", 1), ("gamma_bar", 1)]),
    ];
    let names = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let zero_cells = names(&ZERO_CELLS);
    let one_cells = names(&ONE_CELLS);
    let two_cells = names(&TWO_CELLS);
    let mut d1 = Matrix::zeros(4, 8);
    for (name, tail, head) in edges {
        let j = index_of(&one_cells, name).unwrap();
        d1.set(index_of(&zero_cells, head).unwrap(), j, 1);
        d1.set(index_of(&zero_cells, tail).unwrap(), j, -1);
    }
    let mut d2 = Matrix::zeros(8, 12);
    for (name, terms) in faces {
        let j = index_of(&two_cells, name).unwrap();
        for &(edge, sign) in terms {
            d2.set(index_of(&one_cells, edge).unwrap(), j, sign);
        }
    }
    CellComplexData {
        zero_cells,
        one_cells,
        two_cells,
        d1,
        d2,
    }
}

impl CellComplexData {
    /// The complex with no cells at all.
    pub fn empty() -> CellComplexData {
        CellComplexData {
            zero_cells: Vec::new(),
            one_cells: Vec::new(),
            two_cells: Vec::new(),
            d1: Matrix::zeros(0, 0),
            d2: Matrix::zeros(0, 0),
        }
    }

    pub fn one_cell(&self, name: &str) -> Result<usize, ComplexError> {
        index_of(&self.one_cells, name)
    }

    pub fn two_cell(&self, name: &str) -> Result<usize, ComplexError> {
        index_of(&self.two_cells, name)
    }

    /// A 1-chain from `(cell, coefficient)` terms.
    pub fn one_chain(&self, terms: &[(&str, i64)]) -> Result<Chain, ComplexError> {
        let mut c = vec![0; self.one_cells.len()];
        for &(name, k) in terms {
            c[self.one_cell(name)?] += k;
        }
        Ok(Chain::One(c))
    }

    /// A 2-chain from `(cell, coefficient)` terms.
    pub fn two_chain(&self, terms: &[(&str, i64)]) -> Result<Chain, ComplexError> {
        let mut c = vec![0; self.two_cells.len()];
        for &(name, k) in terms {
            c[self.two_cell(name)?] += k;
        }
        Ok(Chain::Two(c))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.zero_cells.len() as i64 - self.one_cells.len() as i64 + self.two_cells.len() as i64
    }

    /// Pretty-printed JSON of cell names and boundary matrices.
    pub fn dump_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("complex serialization cannot fail");
        s.push('\n');
        s
    }
}

/// An integer chain on the 1-cells or the 2-cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Chain {
    One(Vec<i64>),
    Two(Vec<i64>),
}

/// `∂1 ∂2 = 0`.
pub fn verify_dd_zero(c: &CellComplexData) -> bool {
    if c.d1.cols != c.d2.rows {
        return false;
    }
    c.d1.mul(&c.d2).is_zero()
}

/// The boundary of a chain as a plain coefficient vector.
pub fn boundary(c: &CellComplexData, chain: &Chain) -> Result<Vec<i64>, ComplexError> {
    let (m, v) = match chain {
        Chain::One(v) => (&c.d1, v),
        Chain::Two(v) => (&c.d2, v),
    };
    if v.len() != m.cols {
        return Err(ComplexError::DimensionMismatch {
            expected: m.cols,
            found: v.len(),
        });
    }
    Ok(m.apply(v))
}

pub fn is_cycle(c: &CellComplexData, chain: &Chain) -> Result<bool, ComplexError> {
    Ok(boundary(c, chain)?.iter().all(|&x| x == 0))
}

/// Solves `∂2 u = chain` over the integers. Returns the 2-chain `u`, or `None`
/// if the cycle is not a boundary.
///
/// A chain equal to `±∂` of a single 2-cell gets that cell as certificate;
/// otherwise the system is solved through the Smith normal form of `∂2`.
pub fn is_boundary(c: &CellComplexData, chain: &[i64]) -> Result<Option<Vec<i64>>, ComplexError> {
    if !is_cycle(c, &Chain::One(chain.to_vec()))? {
        return Err(ComplexError::NotACycle);
    }
    let cols = c.d2.cols;
    if chain.iter().all(|&x| x == 0) {
        return Ok(Some(vec![0; cols]));
    }
    for j in 0..cols {
        let col = c.d2.column(j);
        for sign in [1, -1] {
            if col.iter().zip(chain).all(|(&a, &b)| sign * a == b) {
                let mut u = vec![0; cols];
                u[j] = sign;
                return Ok(Some(u));
            }
        }
    }
    let s = smith_normal_form(&c.d2);
    let rhs = s.u.apply(chain);
    let mut z = vec![0; cols];
    for (i, &r) in rhs.iter().enumerate() {
        let d = if i < cols { s.d.get(i, i) } else { 0 };
        match (d, r) {
            (0, 0) => {}
            (0, _) => return Ok(None),
            (d, r) if r % d != 0 => return Ok(None),
            (d, r) => z[i] = r / d,
        }
    }
    let u = s.v.apply(&z);
    debug_assert_eq!(c.d2.apply(&u), chain);
    Ok(Some(u))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub betti: [usize; 3],
    /// Invariant factors greater than one, per degree.
    pub torsion: [Vec<i64>; 3],
    pub euler_characteristic: i64,
}

/// Betti numbers and torsion of `c` from the Smith forms of its boundary maps.
pub fn homology_ranks(c: &CellComplexData) -> HomologyReport {
    let f1 = smith_normal_form(&c.d1).invariant_factors();
    let f2 = smith_normal_form(&c.d2).invariant_factors();
    let (r1, r2) = (f1.len(), f2.len());
    let (n0, n1, n2) = (c.zero_cells.len(), c.one_cells.len(), c.two_cells.len());
    let big = |f: &[i64]| f.iter().copied().filter(|&x| x > 1).collect::<Vec<_>>();
    HomologyReport {
        betti: [n0 - r1, n1 - r1 - r2, n2 - r2],
        torsion: [big(&f1), big(&f2), Vec::new()],
        euler_characteristic: (n0 - r1) as i64 - (n1 - r1 - r2) as i64 + (n2 - r2) as i64,
    }
}

/// A corner of a 2-cell at the link's base vertex, joining two link vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkEdge {
    pub cell: String,
    pub ends: [String; 2],
}

/// The link of a 0-cell: incident 1-cells as vertices, 2-cell corners as edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkGraph {
    pub base: String,
    pub vertices: Vec<String>,
    pub edges: Vec<LinkEdge>,
}

impl LinkGraph {
    /// Two distinct edges between `a` and `b`, forming a closed loop of length 2.
    pub fn bigon(&self, a: &str, b: &str) -> Option<[&str; 2]> {
        let joins: Vec<&str> = self
            .edges
            .iter()
            .filter(|e| (e.ends[0] == a && e.ends[1] == b) || (e.ends[0] == b && e.ends[1] == a))
            .map(|e| e.cell.as_str())
            .collect();
        (joins.len() >= 2).then(|| [joins[0], joins[1]])
    }
}

/// Oriented boundary of a 2-cell as a closed edge path: `(1-cell, tail, head)`.
fn boundary_cycle(
    c: &CellComplexData,
    face: usize,
) -> Result<Vec<(usize, usize, usize)>, ComplexError> {
    let endpoints = |e: usize| {
        let col = c.d1.column(e);
        let head = col.iter().position(|&x| x == 1);
        let tail = col.iter().position(|&x| x == -1);
        (tail, head)
    };
    let name = &c.two_cells[face];
    let mut terms: Vec<(usize, usize, usize)> = Vec::new();
    for e in 0..c.one_cells.len() {
        let k = c.d2.get(e, face);
        if k == 0 {
            continue;
        }
        let (Some(tail), Some(head)) = endpoints(e) else {
            return Err(ComplexError::OpenBoundary(name.clone()));
        };
        for _ in 0..k.abs() {
            terms.push(if k > 0 {
                (e, tail, head)
            } else {
                (e, head, tail)
            });
        }
    }
    let Some(first) = terms.first().copied() else {
        return Ok(Vec::new());
    };
    let mut used = vec![false; terms.len()];
    used[0] = true;
    let mut path = vec![first];
    while path.len() < terms.len() {
        let at = path.last().unwrap().2;
        let next: Vec<usize> = (0..terms.len())
            .filter(|&i| !used[i] && terms[i].1 == at)
            .collect();
        match next.as_slice() {
            [] => return Err(ComplexError::OpenBoundary(name.clone())),
            [i] => {
                used[*i] = true;
                path.push(terms[*i]);
            }
            _ => return Err(ComplexError::AmbiguousCyclicOrder(name.clone())),
        }
    }
    if path.last().unwrap().2 != first.1 {
        return Err(ComplexError::OpenBoundary(name.clone()));
    }
    Ok(path)
}

/// The link of `vertex`, with edges read off the cyclic boundary of every 2-cell.
pub fn link_graph(c: &CellComplexData, vertex: &str) -> Result<LinkGraph, ComplexError> {
    let v = index_of(&c.zero_cells, vertex)?;
    let vertices: Vec<String> = (0..c.one_cells.len())
        .filter(|&e| c.d1.get(v, e) != 0)
        .map(|e| c.one_cells[e].clone())
        .collect();
    let mut edges = Vec::new();
    for face in 0..c.two_cells.len() {
        let cycle = boundary_cycle(c, face)?;
        for i in 0..cycle.len() {
            let (into, out) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            if into.2 == v {
                edges.push(LinkEdge {
                    cell: c.two_cells[face].clone(),
                    ends: [c.one_cells[into.0].clone(), c.one_cells[out.0].clone()],
                });
            }
        }
    }
    Ok(LinkGraph {
        base: vertex.to_string(),
        vertices,
        edges,
    })
}

/// χ of the smallest subcomplex containing the named 2-cells.
pub fn subcomplex_euler(c: &CellComplexData, faces: &[&str]) -> Result<i64, ComplexError> {
    let mut edges = BTreeSet::new();
    for f in faces {
        let j = c.two_cell(f)?;
        edges.extend((0..c.one_cells.len()).filter(|&e| c.d2.get(e, j) != 0));
    }
    let points: BTreeSet<usize> = edges
        .iter()
        .flat_map(|&e| (0..c.zero_cells.len()).filter(move |&p| c.d1.get(p, e) != 0))
        .collect();
    Ok(points.len() as i64 - edges.len() as i64 + faces.len() as i64)
}
