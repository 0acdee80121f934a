//! Decomposition of balanced tuples into two strictly shorter balanced tuples,
//! and the derivations built from it.
//!
//! For a pair `(w1, w2)` with `w1 w2` in O₂ the loop spelled by `w1 w2` is cut at
//! `p = 0`, `q = |w1|` and two more points `r`, `s`. If the four arcs pair up into
//! two zero-sum pairs, one pair becomes `(x1, x2)`, the other `(y1, y2)`, and
//! `(w1, w2)` is a Merge of the two. [`find_split`] searches for such cuts,
//! [`derive`] recurses on the halves.

mod o3;
mod search;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{simplify_loop, SimplifyOutcome};
use crate::grammar::{Arrangement, DerivationTree, Grammar, GrammarError, RuleKind, Token};
use crate::words::{Displacement, Letter, Word};

pub use o3::{
    derive3, find_alternating_split3, find_split3, AlternatingMode, AlternatingWitness3,
    Counterexample, Derivation3,
};
use search::{arrangement_index, merge_arrangements, Scanner};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("{word} is not in O{n} (displacement {displacement})")]
    NotInOn {
        n: u8,
        word: Word,
        displacement: Displacement,
    },
    #[error("expected {expected} words of dimension {n}")]
    Shape { expected: usize, n: u8 },
    #[error("no decomposition of {words:?} after {searched} candidates")]
    Incompleteness { words: Vec<Word>, searched: u64 },
    #[error(transparent)]
    Grammar(#[from] GrammarError),
}

/// Tuple arity of the grammar a search runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    Two,
    Three,
}

impl Arity {
    pub fn get(self) -> usize {
        match self {
            Arity::Two => 2,
            Arity::Three => 3,
        }
    }

    fn dimension(self) -> u8 {
        self.get() as u8
    }

    fn grammar(self) -> Grammar {
        match self {
            Arity::Two => Grammar::o2(),
            Arity::Three => Grammar::o3(),
        }
    }
}

/// Which rule of the canonical order produced a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessSource {
    /// An end letter of `w1` is inverse to an end letter of `w2`.
    Endpoint,
    /// A coincidence `φ(r) = φ(s)` across the `q` cut, found by loop simplification.
    Case5,
    /// Lexicographic scan over arrangements and cut positions.
    Search,
}

/// The loop `w1 w2 ..` cut into arcs.
///
/// `boundaries` lists every cut from `0` to `m`; arc `K_j` (1-based) is the
/// subword between boundaries `j - 1` and `j`. `q` holds the component cuts
/// (`|w1|`, and `|w1 w2|` for triples); `cuts` the remaining interior ones, so
/// for pairs `cuts = [r, s]` unless `w1` or `w2` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcDecomposition {
    pub p: usize,
    pub q: Vec<usize>,
    pub cuts: Vec<usize>,
    pub boundaries: Vec<usize>,
    pub arcs: Vec<Word>,
    pub arc_vectors: Vec<Displacement>,
}

impl ArcDecomposition {
    pub fn r(&self) -> Option<usize> {
        self.cuts.first().copied()
    }

    pub fn s(&self) -> Option<usize> {
        self.cuts.get(1).copied()
    }
}

/// A certified decomposition of a tuple as a Merge of `x` and `y`.
///
/// `pairing[0]` lists the arcs (1-based) forming `x` in component order,
/// `pairing[1]` those forming `y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitWitness {
    #[serde(flatten)]
    pub decomposition: ArcDecomposition,
    pub pairing: [Vec<usize>; 2],
    pub x: Vec<Word>,
    pub y: Vec<Word>,
    pub arrangement: Arrangement,
    pub arrangement_index: usize,
    pub source: WitnessSource,
}

impl SplitWitness {
    fn build(
        words: &[Word],
        arity: Arity,
        arr: &Arrangement,
        bounds: Vec<usize>,
        source: WitnessSource,
    ) -> SplitWitness {
        let n = arity.dimension();
        let whole = Word::concat_all(n, words);
        let arcs: Vec<Word> = bounds.windows(2).map(|b| whole.slice(b[0], b[1])).collect();
        let k = arity.get();
        let mut x = vec![Word::empty(n); k];
        let mut y = vec![Word::empty(n); k];
        let mut pairing = [vec![0; k], vec![0; k]];
        for (j, t) in arr.tokens.iter().enumerate() {
            if let Token::Var { component, child } = *t {
                let c = component as usize - 1;
                pairing[child as usize][c] = j + 1;
                let slot = if child == 0 { &mut x[c] } else { &mut y[c] };
                *slot = arcs[j].clone();
            }
        }
        let q = words
            .iter()
            .scan(0, |acc, w| {
                *acc += w.len();
                Some(*acc)
            })
            .take(k - 1)
            .collect();
        SplitWitness {
            decomposition: ArcDecomposition {
                p: 0,
                q,
                cuts: Scanner::free_cuts(arr, &bounds),
                arc_vectors: arcs.iter().map(Word::displacement).collect(),
                arcs,
                boundaries: bounds,
            },
            pairing,
            x,
            y,
            arrangement: arr.clone(),
            arrangement_index: arrangement_index(arity, arr),
            source,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("witness serialization cannot fail")
    }

    /// Re-checks every claim of the witness against the tuple it decomposes.
    pub fn validate(&self, words: &[Word]) -> Result<(), String> {
        let k = words.len();
        let n = words.first().map_or(2, Word::dimension);
        let whole = Word::concat_all(n, words);
        let m = whole.len();
        let d = &self.decomposition;
        let b = &d.boundaries;
        if b.first() != Some(&0) || b.last() != Some(&m) || b.windows(2).any(|w| w[0] > w[1]) {
            return Err(format!("boundaries {b:?} do not run from 0 to {m}"));
        }
        if d.arcs.len() + 1 != b.len() || d.arc_vectors.len() != d.arcs.len() {
            return Err("arc count does not match boundaries".into());
        }
        for (j, arc) in d.arcs.iter().enumerate() {
            if arc.letters() != whole.slice(b[j], b[j + 1]).letters() {
                return Err(format!("arc {} is not the subword between its cuts", j + 1));
            }
            if d.arc_vectors[j] != arc.displacement() {
                return Err(format!("arc vector {} is wrong", j + 1));
            }
        }
        let total = d
            .arc_vectors
            .iter()
            .fold(Displacement::zero(n), |acc, &v| acc + v);
        if !total.is_zero() {
            return Err("arc vectors do not sum to zero".into());
        }
        for (side, words_side) in [(0, &self.x), (1, &self.y)] {
            if self.pairing[side].len() != k || words_side.len() != k {
                return Err("pairing has the wrong arity".into());
            }
            let mut sum = Displacement::zero(n);
            for (c, &arc) in self.pairing[side].iter().enumerate() {
                let Some(a) = arc.checked_sub(1).and_then(|a| d.arcs.get(a)) else {
                    return Err(format!("pairing names missing arc {arc}"));
                };
                if a.letters() != words_side[c].letters() {
                    return Err(format!("component {} does not match arc {arc}", c + 1));
                }
                sum += d.arc_vectors[arc - 1];
            }
            if !sum.is_zero() {
                return Err("a pair of arcs does not sum to zero".into());
            }
        }
        let x_len: usize = self.x.iter().map(Word::len).sum();
        let y_len: usize = self.y.iter().map(Word::len).sum();
        if x_len == 0 || y_len == 0 {
            return Err("one side is empty, so the other is not strictly shorter".into());
        }
        let arity = match k {
            2 => Arity::Two,
            3 => Arity::Three,
            _ => return Err(format!("unsupported arity {k}")),
        };
        if !arity
            .grammar()
            .family(RuleKind::Merge)
            .unwrap()
            .contains(&self.arrangement)
        {
            return Err("arrangement is not a Merge arrangement".into());
        }
        let rebuilt = self
            .arrangement
            .apply(n, &[self.x.clone(), self.y.clone()])
            .map_err(|e| e.to_string())?;
        if rebuilt
            .iter()
            .zip(words)
            .any(|(a, b)| a.letters() != b.letters())
        {
            return Err("arrangement does not reconstruct the tuple".into());
        }
        Ok(())
    }
}

fn check_member(words: &[Word], arity: Arity) -> Result<Word, SplitError> {
    let n = arity.dimension();
    if words.len() != arity.get() || words.iter().any(|w| w.dimension() != n) {
        return Err(SplitError::Shape {
            expected: arity.get(),
            n,
        });
    }
    let whole = Word::concat_all(n, words);
    let displacement = whole.displacement();
    if !displacement.is_zero() {
        return Err(SplitError::NotInOn {
            n,
            word: whole,
            displacement,
        });
    }
    Ok(whole)
}

/// Endpoint fast path: `x` is an end letter of `w1` with an inverse end letter of `w2`.
fn endpoint_split(w1: &Word, w2: &Word) -> Option<(Arrangement, Vec<usize>)> {
    let (q, m) = (w1.len(), w1.len() + w2.len());
    if w1.is_empty() || w2.is_empty() || m < 4 {
        return None;
    }
    let var = |child, c| Token::var(child, c);
    let ends = |w: &Word| [*w.letters().first().unwrap(), *w.letters().last().unwrap()];
    let (e1, e2) = (ends(w1), ends(w2));
    for (i, at_end_1) in [false, true].into_iter().enumerate() {
        for (j, at_end_2) in [false, true].into_iter().enumerate() {
            if e1[i].inverse() != e2[j] {
                continue;
            }
            let t1 = if at_end_1 {
                vec![var(1, 1), var(0, 1)]
            } else {
                vec![var(0, 1), var(1, 1)]
            };
            let t2 = if at_end_2 {
                vec![var(1, 2), var(0, 2)]
            } else {
                vec![var(0, 2), var(1, 2)]
            };
            let r = if at_end_1 { q - 1 } else { 1 };
            let s = if at_end_2 { m - 1 } else { q + 1 };
            return Some((Arrangement::from_groups(&[t1, t2]), vec![0, r, q, s, m]));
        }
    }
    None
}

/// A canonical decomposition of `(w1, w2)`, or `None` if there is none.
///
/// Tried in order: the endpoint fast path, a case-5 coincidence found by loop
/// simplification, then every Merge arrangement in canonical order with free cuts
/// in lexicographic order.
pub fn find_split(w1: &Word, w2: &Word) -> Result<Option<SplitWitness>, SplitError> {
    Ok(find_split_counted(w1, w2)?.0)
}

/// [`find_split`] plus the number of exhaustive-search candidates examined.
pub fn find_split_counted(w1: &Word, w2: &Word) -> Result<(Option<SplitWitness>, u64), SplitError> {
    let words = [w1.clone(), w2.clone()];
    let whole = check_member(&words, Arity::Two)?;
    let m = whole.len();
    if m < 4 {
        return Ok((None, 0));
    }
    if let Some((arr, bounds)) = endpoint_split(w1, w2) {
        let w = SplitWitness::build(&words, Arity::Two, &arr, bounds, WitnessSource::Endpoint);
        return Ok((Some(w), 0));
    }
    if let SimplifyOutcome::Split { r, s, .. } = simplify_loop(w1, w2) {
        let arr = Arrangement::from_groups(&[
            vec![Token::var(1, 1), Token::var(0, 1)],
            vec![Token::var(0, 2), Token::var(1, 2)],
        ]);
        let bounds = vec![0, r, w1.len(), s, m];
        let w = SplitWitness::build(&words, Arity::Two, &arr, bounds, WitnessSource::Case5);
        return Ok((Some(w), 0));
    }
    let qs = [w1.len()];
    let mut scanner = Scanner::new(2, whole.letters(), &qs);
    for arr in merge_arrangements(Arity::Two) {
        if let Some(bounds) = scanner.scan(arr) {
            let w = SplitWitness::build(&words, Arity::Two, arr, bounds, WitnessSource::Search);
            return Ok((Some(w), scanner.searched));
        }
    }
    Ok((None, scanner.searched))
}

/// PairInsert over the axiom producing a two-letter tuple.
fn base_pair(words: &[Word], g: &Grammar) -> Result<DerivationTree, SplitError> {
    let k = words.len();
    let n = g.dimension();
    let letters: Vec<Letter> = words.iter().flat_map(|w| w.letters().to_vec()).collect();
    let axis = letters[0].axis();
    let groups: Vec<Vec<Token>> = words
        .iter()
        .enumerate()
        .map(|(c, w)| {
            let mut g: Vec<Token> = Vec::new();
            if c == k - 1 {
                g.push(Token::var(0, c as u8 + 1));
                g.extend(w.letters().iter().map(|&l| Token::Lit(l)));
            } else {
                g.extend(w.letters().iter().map(|&l| Token::Lit(l)));
                g.push(Token::var(0, c as u8 + 1));
            }
            g
        })
        .collect();
    Ok(DerivationTree::node(
        RuleKind::PairInsert(axis),
        Arrangement::from_groups(&groups),
        vec![DerivationTree::axiom(g)],
        n,
    )?)
}

/// Rewrites a Merge whose `side` child has total length 2 into a PairInsert
/// whose letters are that child's letters and whose variables are the other child's.
fn collapse(arr: &Arrangement, side: u8, small: &[Word]) -> (Arrangement, u8) {
    let mut axis = 0;
    let groups: Vec<Vec<Token>> = arr
        .groups()
        .iter()
        .map(|g| {
            let mut out = Vec::new();
            for &t in *g {
                match t {
                    Token::Var { component, child } if child == side => {
                        for &l in small[component as usize - 1].letters() {
                            axis = l.axis();
                            out.push(Token::Lit(l));
                        }
                    }
                    Token::Var { component, .. } => out.push(Token::var(0, component)),
                    Token::Lit(l) => out.push(Token::Lit(l)),
                }
            }
            out
        })
        .collect();
    (Arrangement::from_groups(&groups), axis)
}

pub(crate) enum Stuck {
    Tuple(Vec<Word>, u64),
    Error(SplitError),
}

impl From<SplitError> for Stuck {
    fn from(e: SplitError) -> Stuck {
        Stuck::Error(e)
    }
}

impl From<GrammarError> for Stuck {
    fn from(e: GrammarError) -> Stuck {
        Stuck::Error(e.into())
    }
}

/// Split search used by the recursion: a witness or none, and candidates examined.
pub(crate) type SplitFn<'a> =
    dyn Fn(&[Word]) -> Result<(Option<SplitWitness>, u64), SplitError> + 'a;

/// Shared recursion: axiom at length 0, PairInsert at length 2, otherwise Merge
/// over a witness (or PairInsert when one side has just two letters).
pub(crate) fn derive_with(
    words: &[Word],
    arity: Arity,
    split: &SplitFn,
) -> Result<DerivationTree, Stuck> {
    let g = arity.grammar();
    let total: usize = words.iter().map(Word::len).sum();
    match total {
        0 => return Ok(DerivationTree::axiom(&g)),
        2 => return Ok(base_pair(words, &g)?),
        _ => {}
    }
    let (witness, searched) = split(words)?;
    let Some(w) = witness else {
        return Err(Stuck::Tuple(words.to_vec(), searched));
    };
    let len = |t: &[Word]| t.iter().map(Word::len).sum::<usize>();
    let n = arity.dimension();
    for (side, small, big) in [(0u8, &w.x, &w.y), (1, &w.y, &w.x)] {
        if len(small) == 2 {
            let (arr, axis) = collapse(&w.arrangement, side, small);
            let child = derive_with(big, arity, split)?;
            return Ok(DerivationTree::node(
                RuleKind::PairInsert(axis),
                arr,
                vec![child],
                n,
            )?);
        }
    }
    let x = derive_with(&w.x, arity, split)?;
    let y = derive_with(&w.y, arity, split)?;
    Ok(DerivationTree::node(
        RuleKind::Merge,
        w.arrangement.clone(),
        vec![x, y],
        n,
    )?)
}

/// A derivation of `Inv(w1, w2)` in grammar G.
///
/// A tuple of length at least 4 without a decomposition would contradict the
/// decomposition theorem and is reported as [`SplitError::Incompleteness`].
pub fn derive(w1: &Word, w2: &Word) -> Result<DerivationTree, SplitError> {
    check_member(&[w1.clone(), w2.clone()], Arity::Two)?;
    let split = |t: &[Word]| find_split_counted(&t[0], &t[1]);
    derive_with(&[w1.clone(), w2.clone()], Arity::Two, &split).map_err(|e| match e {
        Stuck::Tuple(words, searched) => SplitError::Incompleteness { words, searched },
        Stuck::Error(e) => e,
    })
}
