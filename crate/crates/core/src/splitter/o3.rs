//! Triples: the Merge search of the arity-3 grammar and the alternating
//! six-piece decomposition.

use serde::Serialize;

use super::search::{merge_arrangements, Scanner};
use super::{check_member, derive_with, Arity, SplitError, SplitWitness, Stuck, WitnessSource};
use crate::grammar::DerivationTree;
use crate::words::{Displacement, Word};

/// A triple with no decomposition, and how many candidates the search examined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub words: Vec<Word>,
    pub searched: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Derivation3 {
    Tree(DerivationTree),
    Counterexample(Counterexample),
}

/// A canonical Merge decomposition of `(w1, w2, w3)` in the arity-3 grammar,
/// with the number of candidates examined.
///
/// There are no fast paths: arrangements are scanned in canonical order, free
/// cuts lexicographically.
pub fn find_split3(
    w1: &Word,
    w2: &Word,
    w3: &Word,
) -> Result<(Option<SplitWitness>, u64), SplitError> {
    let words = [w1.clone(), w2.clone(), w3.clone()];
    let whole = check_member(&words, Arity::Three)?;
    if whole.len() < 4 {
        return Ok((None, 0));
    }
    let qs = [w1.len(), w1.len() + w2.len()];
    let mut scanner = Scanner::new(3, whole.letters(), &qs);
    for arr in merge_arrangements(Arity::Three) {
        if let Some(bounds) = scanner.scan(arr) {
            let w = SplitWitness::build(&words, Arity::Three, arr, bounds, WitnessSource::Search);
            return Ok((Some(w), scanner.searched));
        }
    }
    Ok((None, scanner.searched))
}

/// A derivation of `Circ(w1, w2, w3)`, or the first subtriple of length at least 4
/// that has no decomposition.
pub fn derive3(w1: &Word, w2: &Word, w3: &Word) -> Result<Derivation3, SplitError> {
    let words = [w1.clone(), w2.clone(), w3.clone()];
    check_member(&words, Arity::Three)?;
    let split = |t: &[Word]| find_split3(&t[0], &t[1], &t[2]);
    match derive_with(&words, Arity::Three, &split) {
        Ok(tree) => Ok(Derivation3::Tree(tree)),
        Err(Stuck::Tuple(words, searched)) => Ok(Derivation3::Counterexample(Counterexample {
            words,
            searched,
        })),
        Err(Stuck::Error(e)) => Err(e),
    }
}

/// Which six-piece cuts count for the alternating decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlternatingMode {
    /// Pieces may be empty; both three-piece words must be nonempty.
    AllowEmpty,
    /// All six pieces nonempty.
    NonemptyPieces,
}

/// `t1 t2 t3 = x1 y1 x2 y2 x3 y3` with `x1 x2 x3` and `y1 y2 y3` both in O₃.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlternatingWitness3 {
    pub cuts: [usize; 5],
    pub pieces: Vec<Word>,
    pub x: Word,
    pub y: Word,
    pub mode: AlternatingMode,
}

/// The lexicographically least cuts `c1 <= .. <= c5` splitting `t1 t2 t3` into
/// alternating pieces whose two interleaved words are balanced and strictly
/// shorter, with the number of cut vectors examined.
pub fn find_alternating_split3(
    t1: &Word,
    t2: &Word,
    t3: &Word,
    mode: AlternatingMode,
) -> Result<(Option<AlternatingWitness3>, u64), SplitError> {
    let whole = check_member(&[t1.clone(), t2.clone(), t3.clone()], Arity::Three)?;
    let m = whole.len();
    let mut prefix = vec![Displacement::zero(3)];
    for &l in whole.letters() {
        let mut next = *prefix.last().unwrap();
        next.step(l);
        prefix.push(next);
    }
    let gap = usize::from(mode == AlternatingMode::NonemptyPieces);
    let mut searched = 0u64;
    let mut c = [0usize; 5];
    let found = scan_alternating(&prefix, m, gap, 0, &mut c, &mut searched);
    let witness = found.then(|| {
        let b = [0, c[0], c[1], c[2], c[3], c[4], m];
        let pieces: Vec<Word> = b.windows(2).map(|w| whole.slice(w[0], w[1])).collect();
        AlternatingWitness3 {
            cuts: c,
            x: Word::concat_all(3, [&pieces[0], &pieces[2], &pieces[4]]),
            y: Word::concat_all(3, [&pieces[1], &pieces[3], &pieces[5]]),
            pieces,
            mode,
        }
    });
    Ok((witness, searched))
}

fn scan_alternating(
    prefix: &[Displacement],
    m: usize,
    gap: usize,
    i: usize,
    c: &mut [usize; 5],
    searched: &mut u64,
) -> bool {
    if i == 5 {
        *searched += 1;
        if gap == 1 && c[4] == m {
            return false;
        }
        let x = prefix[c[0]] + (prefix[c[2]] - prefix[c[1]]) + (prefix[c[4]] - prefix[c[3]]);
        let x_len = c[0] + c[2] - c[1] + c[4] - c[3];
        return x.is_zero() && x_len > 0 && x_len < m;
    }
    let lo = if i == 0 { gap } else { c[i - 1] + gap };
    for v in lo..=m {
        c[i] = v;
        if scan_alternating(prefix, m, gap, i + 1, c, searched) {
            return true;
        }
    }
    false
}
