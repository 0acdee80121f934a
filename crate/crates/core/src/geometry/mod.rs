//! Lattice paths spelled by words, their self-intersections, and the loop
//! simplification that reduces a pair `(w1, w2)` to an embedded loop.
//!
//! Parameters are integers `0..=m` for a word of length `m`; point `t` is the
//! position after `t` letters. On a closed path the parameters `0` and `m` are
//! the same point of the loop, so intersections are reported over `0..m`.

mod svg;
mod winding;

pub use svg::{render_svg, Annotations};
pub use winding::{
    link_cycle_degree, winding_number, CycleId, DegreeClass, Half, Vec2, WindingReport,
};

use serde::Serialize;
use thiserror::Error;

use crate::words::{Displacement, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("loop length {0} is odd, the midpoint cut is undefined")]
    OddLength(usize),
    #[error("path is not closed")]
    NotClosed,
    #[error("loop is not embedded")]
    NotEmbedded,
    #[error("zero vector at index {0}")]
    ZeroVector(usize),
    #[error("tangent directions at the two cuts are antiparallel")]
    AntiparallelTangents,
    #[error("chord step {delta} must satisfy 1 <= delta < {half}")]
    InvalidDelta { delta: usize, half: usize },
    #[error("rendering needs a planar path, got dimension {0}")]
    UnsupportedDimension(u8),
    #[error("cut index {index} is outside 0..={len}")]
    CutOutOfRange { index: usize, len: usize },
}

/// Points of the lattice path of a word, starting at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePath {
    n: u8,
    points: Vec<Displacement>,
}

impl LatticePath {
    pub fn from_word(w: &Word) -> LatticePath {
        let n = w.dimension();
        let mut points = Vec::with_capacity(w.len() + 1);
        let mut at = Displacement::zero(n);
        points.push(at);
        for &l in w.letters() {
            at.step(l);
            points.push(at);
        }
        LatticePath { n, points }
    }

    pub fn from_points(points: Vec<Displacement>) -> Option<LatticePath> {
        let n = points.first()?.dimension();
        let unit_steps = points.windows(2).all(|p| (p[1] - p[0]).l1_norm() == 1);
        (unit_steps && points[0].is_zero()).then_some(LatticePath { n, points })
    }

    pub fn dimension(&self) -> u8 {
        self.n
    }

    /// Number of steps `m`.
    pub fn len(&self) -> usize {
        self.points.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> &[Displacement] {
        &self.points
    }

    pub fn point(&self, t: usize) -> Displacement {
        self.points[t]
    }

    /// Unit vector of step `t` (from point `t` to point `t + 1`).
    pub fn step(&self, t: usize) -> Displacement {
        self.points[t + 1] - self.points[t]
    }

    pub fn is_closed(&self) -> bool {
        self.points[self.len()] == self.points[0]
    }

    /// Closed, no point repeated among `0..m`, and not a degenerate back-and-forth
    /// of length 2. The empty loop counts as embedded.
    pub fn is_embedded(&self) -> bool {
        let m = self.len();
        if !self.is_closed() || m == 2 {
            return false;
        }
        let mut seen: Vec<Displacement> = self.points[..m].to_vec();
        seen.sort_by(|a, b| a.components().cmp(b.components()));
        seen.windows(2).all(|p| p[0] != p[1])
    }

    /// The same loop traversed backwards: `t ↦ φ(m − t)`, re-based at the origin.
    pub fn reversed(&self) -> LatticePath {
        let last = self.points[self.len()];
        LatticePath {
            n: self.n,
            points: self.points.iter().rev().map(|&p| p - last).collect(),
        }
    }

    /// Planar rotation by `quarter_turns × 90°` counterclockwise.
    pub fn rotated(&self, quarter_turns: u32) -> Result<LatticePath, GeometryError> {
        if self.n != 2 {
            return Err(GeometryError::UnsupportedDimension(self.n));
        }
        let points = self
            .points
            .iter()
            .map(|p| {
                let (mut x, mut y) = (p[0], p[1]);
                for _ in 0..quarter_turns % 4 {
                    (x, y) = (-y, x);
                }
                Displacement::from_components(&[x, y])
            })
            .collect();
        Ok(LatticePath { n: 2, points })
    }

    /// Points as integer lists, the JSON shape of a path.
    pub fn to_json_points(&self) -> Vec<Vec<i32>> {
        self.points
            .iter()
            .map(|p| p.components().to_vec())
            .collect()
    }
}

pub fn to_path(w: &Word) -> LatticePath {
    LatticePath::from_word(w)
}

/// The five ways two coincident parameters can sit relative to the cuts `0` and `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ReductionCase {
    /// `t1 = 0`, `0 < t2 < q`: drop the subloop `0..t2`.
    Case1,
    /// `t1 = 0`, `q < t2 < m`: drop the subloop `t2..m`.
    Case2,
    /// One parameter sits on `q`: drop the subloop between them.
    Case3,
    /// Both parameters strictly inside the same half: drop the subloop between them.
    Case4,
    /// `0 < t1 < q < t2 < m`: the pair itself is a split.
    Case5,
}

impl ReductionCase {
    pub fn number(self) -> u8 {
        self as u8 + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct IntersectionRecord {
    pub t1: usize,
    pub t2: usize,
    pub case: ReductionCase,
}

/// Case label for a coincident pair `t1 < t2` on a loop of length `m` cut at `0` and `q`.
/// `None` for the pair `(0, q)` itself, whose coincidence says nothing about the loop.
pub fn classify_pair(t1: usize, t2: usize, q: usize, m: usize) -> Option<ReductionCase> {
    debug_assert!(t1 < t2 && t2 < m.max(1));
    if t1 == 0 {
        return match t2.cmp(&q) {
            std::cmp::Ordering::Less => Some(ReductionCase::Case1),
            std::cmp::Ordering::Greater => Some(ReductionCase::Case2),
            std::cmp::Ordering::Equal => None,
        };
    }
    if t2 == q || t1 == q {
        return Some(ReductionCase::Case3);
    }
    if t2 < q || t1 > q {
        Some(ReductionCase::Case4)
    } else {
        Some(ReductionCase::Case5)
    }
}

/// Coincident parameter pairs of a closed path cut at `0` and `q`, in lexicographic order.
pub fn intersections_with_cut(path: &LatticePath, q: usize) -> Vec<IntersectionRecord> {
    let m = path.len();
    let pts = path.points();
    let mut out = Vec::new();
    for t1 in 0..m {
        for t2 in t1 + 1..m {
            if pts[t1] == pts[t2] {
                if let Some(case) = classify_pair(t1, t2, q, m) {
                    out.push(IntersectionRecord { t1, t2, case });
                }
            }
        }
    }
    out
}

/// All self-intersections of a closed even-length loop, labelled with the cut `q = m/2`.
pub fn self_intersections(path: &LatticePath) -> Result<Vec<IntersectionRecord>, GeometryError> {
    if !path.is_closed() {
        return Err(GeometryError::NotClosed);
    }
    let m = path.len();
    if m % 2 == 1 {
        return Err(GeometryError::OddLength(m));
    }
    Ok(intersections_with_cut(path, m / 2))
}

/// A subloop removed by [`simplify_loop`], in the coordinates of the loop it was cut from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Deletion {
    pub case: ReductionCase,
    pub start: usize,
    pub end: usize,
    pub removed: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimplifyOutcome {
    /// No reducible intersection remains; the reduced pair and what was removed.
    Embedded {
        w1: Word,
        w2: Word,
        deletions: Vec<Deletion>,
    },
    /// A case-5 pair, mapped back to parameters of the original `w1 w2`, with
    /// `0 < r < |w1| < s < |w1 w2|`.
    Split {
        r: usize,
        s: usize,
        deletions: Vec<Deletion>,
    },
}

/// Repeatedly resolves the lowest coincident pair of the loop `w1 w2` (cut at the
/// start of `w1` and the start of `w2`): cases 1–4 delete a closed subword, case 5
/// stops with a split.
pub fn simplify_loop(w1: &Word, w2: &Word) -> SimplifyOutcome {
    let n = w1.dimension().max(w2.dimension());
    let mut letters = w1.concat(w2).letters().to_vec();
    let mut q = w1.len();
    // origin[t]: parameter of the original loop that current parameter t stands for
    let mut origin: Vec<usize> = (0..=letters.len()).collect();
    let mut deletions = Vec::new();

    loop {
        let word = Word::from_slice(n, &letters);
        let path = LatticePath::from_word(&word);
        let Some(first) = intersections_with_cut(&path, q).into_iter().next() else {
            return SimplifyOutcome::Embedded {
                w1: Word::from_slice(n, &letters[..q]),
                w2: Word::from_slice(n, &letters[q..]),
                deletions,
            };
        };
        let m = letters.len();
        let (start, end) = match first.case {
            ReductionCase::Case5 => {
                return SimplifyOutcome::Split {
                    r: origin[first.t1],
                    s: origin[first.t2],
                    deletions,
                }
            }
            ReductionCase::Case1 => (0, first.t2),
            ReductionCase::Case2 => (first.t2, m),
            ReductionCase::Case3 | ReductionCase::Case4 => (first.t1, first.t2),
        };
        deletions.push(Deletion {
            case: first.case,
            start,
            end,
            removed: Word::from_slice(n, &letters[start..end]),
        });
        letters.drain(start..end);
        origin.drain(start..end);
        if end <= q {
            q -= end - start;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn pts(path: &LatticePath) -> Vec<Vec<i32>> {
        path.to_json_points()
    }

    #[test]
    fn unit_square_path() {
        let p = to_path(&w("abAB"));
        assert_eq!(
            pts(&p),
            vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 1], vec![0, 0]]
        );
        assert!(p.is_closed());
        assert!(p.is_embedded());
    }

    #[test]
    fn figure_one_path() {
        let p = to_path(&w("abbAbaBaBBBAbA"));
        assert_eq!(p.points().len(), 15);
        assert!(p.is_closed());
        // (1,2) is visited twice, (1,0) too
        assert!(!p.is_embedded());
        assert_eq!(p.point(3).components(), &[1, 2]);
        assert_eq!(p.point(7).components(), &[1, 2]);
    }

    #[test]
    fn empty_path_is_a_point() {
        let p = to_path(&Word::empty(2));
        assert_eq!(pts(&p), vec![vec![0, 0]]);
        assert!(p.is_closed());
    }

    #[test]
    fn embedded_square_has_no_intersections() {
        assert!(self_intersections(&to_path(&w("abAB"))).unwrap().is_empty());
    }

    #[test]
    fn back_and_forth_twice() {
        // points 0:(0,0) 1:(1,0) 2:(0,0) 3:(1,0); q = 2, so (0,2) is the p–q pair
        let recs = self_intersections(&to_path(&w("aAaA"))).unwrap();
        assert_eq!(
            recs,
            vec![IntersectionRecord {
                t1: 1,
                t2: 3,
                case: ReductionCase::Case5
            }]
        );
    }

    #[test]
    fn doubled_square() {
        let recs = self_intersections(&to_path(&w("abABabAB"))).unwrap();
        assert!(!recs.iter().any(|r| (r.t1, r.t2) == (0, 4)));
        assert!(recs.contains(&IntersectionRecord {
            t1: 1,
            t2: 5,
            case: ReductionCase::Case5
        }));
        assert_eq!(recs.len(), 3);
    }

    #[test]
    fn odd_and_open_loops_are_rejected() {
        assert_eq!(
            self_intersections(&to_path(&w("ab"))),
            Err(GeometryError::NotClosed)
        );
        let odd = Word::parse("abc", 3).unwrap();
        assert_eq!(
            self_intersections(&to_path(&odd)),
            Err(GeometryError::NotClosed)
        );
    }

    #[test]
    fn classify_covers_all_five_cases() {
        let m = 12;
        let q = 6;
        assert_eq!(classify_pair(0, 3, q, m), Some(ReductionCase::Case1));
        assert_eq!(classify_pair(0, 8, q, m), Some(ReductionCase::Case2));
        assert_eq!(classify_pair(2, 6, q, m), Some(ReductionCase::Case3));
        assert_eq!(classify_pair(6, 9, q, m), Some(ReductionCase::Case3));
        assert_eq!(classify_pair(1, 4, q, m), Some(ReductionCase::Case4));
        assert_eq!(classify_pair(7, 10, q, m), Some(ReductionCase::Case4));
        assert_eq!(classify_pair(2, 9, q, m), Some(ReductionCase::Case5));
        assert_eq!(classify_pair(0, 6, q, m), None);
    }

    #[test]
    fn simplify_already_embedded() {
        match simplify_loop(&w("ab"), &w("AB")) {
            SimplifyOutcome::Embedded { w1, w2, deletions } => {
                assert_eq!(w1, w("ab"));
                assert_eq!(w2, w("AB"));
                assert!(deletions.is_empty());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn simplify_two_letter_loop_is_left_alone() {
        // the only coincidence of aA is (0, m), which is not an intersection
        match simplify_loop(&w("aA"), &w("")) {
            SimplifyOutcome::Embedded { w1, deletions, .. } => {
                assert_eq!(w1, w("aA"));
                assert!(deletions.is_empty());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn simplify_deletes_a_leading_subloop() {
        match simplify_loop(&w("aAbB"), &w("")) {
            SimplifyOutcome::Embedded { w1, deletions, .. } => {
                assert_eq!(w1, w("bB"));
                assert_eq!(deletions.len(), 1);
                assert_eq!(deletions[0].case, ReductionCase::Case1);
                assert_eq!(deletions[0].removed, w("aA"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn simplify_doubled_square_splits() {
        match simplify_loop(&w("abAB"), &w("abAB")) {
            SimplifyOutcome::Split { r, s, deletions } => {
                assert_eq!((r, s), (1, 5));
                assert!(r < 4 && 4 < s);
                assert!(deletions.is_empty());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn simplify_maps_split_back_through_deletions() {
        // leading aA is a case-1 subloop; afterwards abAB|abAB splits at (1, 5) of
        // the reduced loop, which is (3, 7) of the original
        let w1 = w("aAabAB");
        let w2 = w("abAB");
        match simplify_loop(&w1, &w2) {
            SimplifyOutcome::Split { r, s, deletions } => {
                assert_eq!(deletions.len(), 1);
                assert!(0 < r && r < w1.len() && w1.len() < s && s < 10);
                let full = w1.concat(&w2);
                let path = to_path(&full);
                assert_eq!(path.point(r), path.point(s));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reversed_and_rotated() {
        let p = to_path(&w("abbAbaBaBBBAbA"));
        let r = p.reversed();
        assert_eq!(r, to_path(&w("abbAbaBaBBBAbA").reversed_inverse()));
        let rot = p.rotated(1).unwrap();
        assert_eq!(rot.point(1).components(), &[0, 1]);
        assert_eq!(p.rotated(4).unwrap(), p);
    }
}
