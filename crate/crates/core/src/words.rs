//! Letters, words and displacement vectors over the alphabet of O_n.
//!
//! A word over `{a, A, b, B, c, C}` spells a lattice path in ℤⁿ: `a`, `b`, `c`
//! step forward along axes 1, 2, 3 and the capitals step back. A word lies in
//! O_n exactly when that path is closed, i.e. its displacement is zero.
//!
//! Dimension is carried by every [`Word`], so O₂ and O₃ words can be mixed in
//! one process. All canonical orderings use the letter order
//! `a < A < b < B < c < C`.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Neg, Sub};

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Largest supported dimension.
pub const MAX_DIMENSION: u8 = 3;

/// Default bound on the number of candidate strings an enumeration may cover.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("invalid character {character:?} at position {position}")]
    InvalidCharacter { position: usize, character: char },
    #[error("unsupported dimension {0} (expected 1..=3)")]
    InvalidDimension(u8),
    #[error("letter on axis {axis} does not fit dimension {n}")]
    AxisOutOfRange { axis: u8, n: u8 },
    #[error("enumeration needs {candidates} candidate strings, cap is {cap}")]
    ResourceBound { candidates: u128, cap: u64 },
}

fn check_dimension(n: u8) -> Result<(), WordError> {
    if (1..=MAX_DIMENSION).contains(&n) {
        Ok(())
    } else {
        Err(WordError::InvalidDimension(n))
    }
}

/// A signed generator. The internal code is `2 * (axis - 1) + inverted`, so the
/// derived ordering is the canonical letter order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

impl Letter {
    /// All six letters in canonical order.
    pub const ALL: [Letter; 6] = [
        Letter(0),
        Letter(1),
        Letter(2),
        Letter(3),
        Letter(4),
        Letter(5),
    ];

    pub fn new(axis: u8, sign: i8) -> Option<Letter> {
        if !(1..=MAX_DIMENSION).contains(&axis) {
            return None;
        }
        match sign {
            1 => Some(Letter(2 * (axis - 1))),
            -1 => Some(Letter(2 * (axis - 1) + 1)),
            _ => None,
        }
    }

    /// The `2n` letters of dimension `n`, in canonical order.
    pub fn alphabet(n: u8) -> &'static [Letter] {
        &Self::ALL[..2 * n.min(MAX_DIMENSION) as usize]
    }

    /// Axis in `1..=3`.
    pub fn axis(self) -> u8 {
        self.0 / 2 + 1
    }

    /// `+1` for generators, `-1` for inverses.
    pub fn sign(self) -> i8 {
        if self.0.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn is_generator(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// Same axis, opposite sign.
    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    /// Position in the canonical letter order.
    pub fn code(self) -> u8 {
        self.0
    }

    pub fn from_char(c: char) -> Option<Letter> {
        let code = match c {
            'a' => 0,
            'A' => 1,
            'b' => 2,
            'B' => 3,
            'c' => 4,
            'C' => 5,
            _ => return None,
        };
        Some(Letter(code))
    }

    pub fn to_char(self) -> char {
        b"aAbBcC"[self.0 as usize] as char
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// Inverse of a letter: same axis, negated sign.
pub fn inverse_letter(l: Letter) -> Letter {
    l.inverse()
}

/// Net lattice translation of a word, one integer per axis.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Displacement {
    n: u8,
    c: [i32; MAX_DIMENSION as usize],
}

impl Displacement {
    pub fn zero(n: u8) -> Self {
        Displacement {
            n,
            c: [0; MAX_DIMENSION as usize],
        }
    }

    pub fn from_components(components: &[i32]) -> Self {
        assert!(
            (1..=MAX_DIMENSION as usize).contains(&components.len()),
            "displacement needs 1..=3 components"
        );
        let mut d = Displacement::zero(components.len() as u8);
        d.c[..components.len()].copy_from_slice(components);
        d
    }

    /// Unit step of a letter in dimension `n`.
    pub fn unit(l: Letter, n: u8) -> Self {
        let mut d = Displacement::zero(n);
        d.c[(l.axis() - 1) as usize] = l.sign() as i32;
        d
    }

    pub fn dimension(&self) -> u8 {
        self.n
    }

    pub fn components(&self) -> &[i32] {
        &self.c[..self.n as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.c == [0; MAX_DIMENSION as usize]
    }

    /// Sum of absolute components: the shortest word with this displacement.
    pub fn l1_norm(&self) -> u32 {
        self.c.iter().map(|v| v.unsigned_abs()).sum()
    }

    pub fn step(&mut self, l: Letter) {
        self.c[(l.axis() - 1) as usize] += l.sign() as i32;
    }
}

impl fmt::Debug for Displacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Displacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.components().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl Index<usize> for Displacement {
    type Output = i32;

    fn index(&self, axis: usize) -> &i32 {
        &self.components()[axis]
    }
}

impl Add for Displacement {
    type Output = Displacement;

    fn add(mut self, rhs: Displacement) -> Displacement {
        self += rhs;
        self
    }
}

impl AddAssign for Displacement {
    fn add_assign(&mut self, rhs: Displacement) {
        self.n = self.n.max(rhs.n);
        for (a, b) in self.c.iter_mut().zip(rhs.c) {
            *a += b;
        }
    }
}

impl Neg for Displacement {
    type Output = Displacement;

    fn neg(mut self) -> Displacement {
        for v in &mut self.c {
            *v = -*v;
        }
        self
    }
}

impl Sub for Displacement {
    type Output = Displacement;

    fn sub(self, rhs: Displacement) -> Displacement {
        self + (-rhs)
    }
}

impl Serialize for Displacement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.components().serialize(serializer)
    }
}

/// A finite word of signed generators in dimension `n`. The empty word is ε.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    n: u8,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(n: u8, letters: Vec<Letter>) -> Result<Word, WordError> {
        check_dimension(n)?;
        if let Some(l) = letters.iter().find(|l| l.axis() > n) {
            return Err(WordError::AxisOutOfRange { axis: l.axis(), n });
        }
        Ok(Word { n, letters })
    }

    /// ε in dimension `n`.
    pub fn empty(n: u8) -> Word {
        assert!((1..=MAX_DIMENSION).contains(&n), "dimension out of range");
        Word {
            n,
            letters: Vec::new(),
        }
    }

    pub fn parse(text: &str, n: u8) -> Result<Word, WordError> {
        check_dimension(n)?;
        let letters = text
            .chars()
            .enumerate()
            .map(|(position, character)| {
                Letter::from_char(character)
                    .filter(|l| l.axis() <= n)
                    .ok_or(WordError::InvalidCharacter {
                        position,
                        character,
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Word { n, letters })
    }

    pub fn dimension(&self) -> u8 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn displacement(&self) -> Displacement {
        displacement_of(self.n, &self.letters)
    }

    /// Membership in O_n.
    pub fn is_balanced(&self) -> bool {
        self.displacement().is_zero()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word {
            n: self.n.max(other.n),
            letters,
        }
    }

    /// Concatenation of several words of dimension `n`.
    pub fn concat_all<'a>(n: u8, parts: impl IntoIterator<Item = &'a Word>) -> Word {
        let mut letters = Vec::new();
        for p in parts {
            letters.extend_from_slice(&p.letters);
        }
        Word { n, letters }
    }

    /// Subword on the half-open letter range `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word {
            n: self.n,
            letters: self.letters[start..end].to_vec(),
        }
    }

    pub(crate) fn from_slice(n: u8, letters: &[Letter]) -> Word {
        Word {
            n,
            letters: letters.to_vec(),
        }
    }

    /// The word read backwards with every letter inverted; spells the reversed path.
    pub fn reversed_inverse(&self) -> Word {
        Word {
            n: self.n,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Same letters viewed in a (possibly) larger dimension.
    pub fn with_dimension(&self, n: u8) -> Result<Word, WordError> {
        Word::new(n, self.letters.clone())
    }
}

pub(crate) fn displacement_of(n: u8, letters: &[Letter]) -> Displacement {
    let mut d = Displacement::zero(n);
    for &l in letters {
        d.step(l);
    }
    d
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            write!(f, "ε")
        } else {
            write!(f, "{self}")
        }
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub fn parse_word(text: &str, n: u8) -> Result<Word, WordError> {
    Word::parse(text, n)
}

pub fn format_word(w: &Word) -> String {
    w.to_string()
}

pub fn displacement(w: &Word) -> Displacement {
    w.displacement()
}

pub fn in_on(w: &Word) -> bool {
    w.is_balanced()
}

/// Number of candidate strings of the given length over the `2n`-letter alphabet.
pub fn candidate_count(length: usize, n: u8) -> u128 {
    let base = 2 * n as u128;
    let mut total: u128 = 1;
    for _ in 0..length {
        total = total.saturating_mul(base);
    }
    total
}

/// All words of exactly `length` letters in O_n, in canonical lexicographic order.
///
/// Fails with [`WordError::ResourceBound`] when `(2n)^length` exceeds `cap`, even
/// though the walk below prunes branches that can no longer close.
pub fn enumerate_on(length: usize, n: u8, cap: u64) -> Result<Vec<Word>, WordError> {
    check_dimension(n)?;
    let candidates = candidate_count(length, n);
    if candidates > cap as u128 {
        return Err(WordError::ResourceBound { candidates, cap });
    }
    let mut out = Vec::new();
    if length % 2 == 1 {
        return Ok(out);
    }
    let mut buf = Vec::with_capacity(length);
    extend_closed(n, length, &mut buf, Displacement::zero(n), &mut out);
    Ok(out)
}

fn extend_closed(
    n: u8,
    length: usize,
    buf: &mut Vec<Letter>,
    at: Displacement,
    out: &mut Vec<Word>,
) {
    let remaining = length - buf.len();
    if remaining == 0 {
        if at.is_zero() {
            out.push(Word::from_slice(n, buf));
        }
        return;
    }
    for &l in Letter::alphabet(n) {
        let mut next = at;
        next.step(l);
        if next.l1_norm() as usize > remaining - 1 {
            continue;
        }
        buf.push(l);
        extend_closed(n, length, buf, next, out);
        buf.pop();
    }
}

/// All O_n words with at most `max_len` letters, shortest first.
pub fn enumerate_on_up_to(max_len: usize, n: u8, cap: u64) -> Result<Vec<Word>, WordError> {
    let mut all = Vec::new();
    for len in (0..=max_len).step_by(2) {
        all.extend(enumerate_on(len, n, cap)?);
    }
    Ok(all)
}
