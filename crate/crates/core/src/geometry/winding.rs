//! Exact winding numbers of sequences of integer plane vectors, and the degree
//! of the chord map around the link cycles at the loop's two cuts.
//!
//! Turning is tracked without angles: every step from `u` to `v` is the short
//! rotation between them, its sense comes from the sign of `u × v`, and a full
//! turn is counted whenever the rotation carries the direction across the
//! positive x-axis.

use std::cmp::Ordering;

use serde::Serialize;

use super::{GeometryError, LatticePath};

pub type Vec2 = [i64; 2];

fn cross(u: Vec2, v: Vec2) -> i64 {
    u[0] * v[1] - u[1] * v[0]
}

fn dot(u: Vec2, v: Vec2) -> i64 {
    u[0] * v[0] + u[1] * v[1]
}

/// 0 for directions with argument in `[0, π)`, 1 for `[π, 2π)`.
fn half_plane(v: Vec2) -> u8 {
    if v[1] > 0 || (v[1] == 0 && v[0] > 0) {
        0
    } else {
        1
    }
}

/// Compares arguments in `[0, 2π)`.
fn cmp_arg(u: Vec2, v: Vec2) -> Ordering {
    half_plane(u)
        .cmp(&half_plane(v))
        .then_with(|| 0.cmp(&cross(u, v)))
}

/// Full-turn counter change for the short rotation from `u` to `v`.
///
/// An exact half-turn is taken counterclockwise.
fn wraps(u: Vec2, v: Vec2) -> i64 {
    let c = cross(u, v);
    let ccw = c > 0 || (c == 0 && dot(u, v) < 0);
    let cw = c < 0;
    if ccw && cmp_arg(v, u) == Ordering::Less {
        1
    } else if cw && cmp_arg(v, u) == Ordering::Greater {
        -1
    } else {
        0
    }
}

fn same_direction(u: Vec2, v: Vec2) -> bool {
    cross(u, v) == 0 && dot(u, v) > 0
}

/// Total signed turning of `vectors`, in full turns.
///
/// With `closed` the sequence is cyclic and the step from the last vector back to
/// the first is included. Without it the sequence must already end in its starting
/// direction, otherwise the turning is not a whole number of turns and
/// [`GeometryError::NotClosed`] is returned.
pub fn winding_number(vectors: &[Vec2], closed: bool) -> Result<i64, GeometryError> {
    if let Some(i) = vectors.iter().position(|v| *v == [0, 0]) {
        return Err(GeometryError::ZeroVector(i));
    }
    let Some((&first, _)) = vectors.split_first() else {
        return Ok(0);
    };
    let mut turns: i64 = vectors.windows(2).map(|p| wraps(p[0], p[1])).sum();
    let last = vectors[vectors.len() - 1];
    if closed {
        turns += wraps(last, first);
    } else if !same_direction(last, first) {
        return Err(GeometryError::NotClosed);
    }
    Ok(turns)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Half {
    #[serde(rename = "first")]
    First,
    #[serde(rename = "second")]
    Second,
}

/// The four null-homologous link cycles at the two degenerate vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CycleId {
    #[serde(rename = "alpha-beta")]
    AlphaBeta,
    #[serde(rename = "gamma-delta")]
    GammaDelta,
    #[serde(rename = "alpha_bar-beta_bar")]
    AlphaBarBetaBar,
    #[serde(rename = "gamma_bar-delta_bar")]
    GammaBarDeltaBar,
}

/// Sign class of a link-cycle degree: positive, negative, or zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DegreeClass {
    #[serde(rename = "case1")]
    Positive,
    #[serde(rename = "case2")]
    Negative,
    #[serde(rename = "case3")]
    Zero,
}

impl DegreeClass {
    pub fn of(degree: i64) -> Self {
        match degree.cmp(&0) {
            Ordering::Greater => DegreeClass::Positive,
            Ordering::Less => DegreeClass::Negative,
            Ordering::Equal => DegreeClass::Zero,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindingReport {
    pub cycle_id: CycleId,
    pub degree: i64,
    pub case_class: DegreeClass,
    pub u_alpha: Vec2,
    pub u_beta: Vec2,
    pub u_gamma: Vec2,
    pub u_delta: Vec2,
}

fn planar(path: &LatticePath, from: usize, to: usize) -> Vec2 {
    let d = path.point(to) - path.point(from);
    [d[0] as i64, d[1] as i64]
}

/// Degree of the chord map around the αβ-cycle (`Half::First`) or the γδ-cycle
/// (`Half::Second`) of an embedded planar loop cut at `0` and `m/2`.
///
/// The cycle is the chord sweep `φ(x+δ) − φ(x)` across the chosen half followed
/// by the short rotation from its last chord back to its first.
pub fn link_cycle_degree(
    path: &LatticePath,
    half: Half,
    delta: usize,
) -> Result<WindingReport, GeometryError> {
    if path.dimension() != 2 {
        return Err(GeometryError::UnsupportedDimension(path.dimension()));
    }
    if !path.is_closed() {
        return Err(GeometryError::NotClosed);
    }
    let m = path.len();
    if m % 2 == 1 {
        return Err(GeometryError::OddLength(m));
    }
    if !path.is_embedded() {
        return Err(GeometryError::NotEmbedded);
    }
    let h = m / 2;
    if delta == 0 || delta >= h {
        return Err(GeometryError::InvalidDelta { delta, half: h });
    }

    let u_alpha = planar(path, 0, delta);
    let u_beta = planar(path, h - delta, h);
    let u_gamma = planar(path, h, h + delta);
    let u_delta = planar(path, m - delta, m);

    let (start, end, first_step, last_step, u_in, u_out) = match half {
        Half::First => (
            0,
            h,
            planar(path, 0, 1),
            planar(path, h - 1, h),
            u_alpha,
            u_beta,
        ),
        Half::Second => (
            h,
            m,
            planar(path, h, h + 1),
            planar(path, m - 1, m),
            u_gamma,
            u_delta,
        ),
    };
    let antiparallel = |u: Vec2, v: Vec2| cross(u, v) == 0 && dot(u, v) < 0;
    if antiparallel(first_step, last_step) || antiparallel(u_in, u_out) {
        return Err(GeometryError::AntiparallelTangents);
    }

    let chords: Vec<Vec2> = (start..=end - delta)
        .map(|x| planar(path, x, x + delta))
        .collect();
    let degree = winding_number(&chords, true)?;
    Ok(WindingReport {
        cycle_id: match half {
            Half::First => CycleId::AlphaBeta,
            Half::Second => CycleId::GammaDelta,
        },
        degree,
        case_class: DegreeClass::of(degree),
        u_alpha,
        u_beta,
        u_gamma,
        u_delta,
    })
}
