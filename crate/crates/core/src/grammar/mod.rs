//! Multiple context-free grammars for O₂ (arity 2) and O₃ (arity 3).
//!
//! Both grammars have four rule families over one tuple nonterminal (`Inv` or
//! `Circ`) and the start symbol `S`:
//!
//! ```text
//! S(x1 .. xk)       <- T(x1, .., xk)
//! T(t1, .., tk)     <- T(x1, .., xk)               t1..tk a block arrangement of x1..xk ℓ ℓ⁻¹
//! T(t1, .., tk)     <- T(x1, .., xk), T(y1, .., yk) t1..tk a block arrangement of x1..xk y1..yk
//! T(ε, .., ε)
//! ```
//!
//! A block arrangement places every block (a variable or a single letter) exactly
//! once, in any order, and cuts the resulting sequence into `k` consecutive groups.

mod closure;
mod tree;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::words::{Letter, Word};

pub use closure::{derivable_words, enumerate_derivable, Tuple};
pub use tree::{count_pair_inserts, verify_tree, DerivationTree, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("variable {0} has no matching child component")]
    UnboundVariable(Token),
    #[error("invalid token {0:?}")]
    InvalidToken(String),
    #[error("closure up to length {length} needs {candidates} candidates, cap is {cap}")]
    ResourceBound {
        length: usize,
        candidates: u128,
        cap: u64,
    },
    #[error("malformed derivation tree: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Nonterminal {
    S,
    Inv,
    Circ,
}

impl Nonterminal {
    pub fn arity(self) -> usize {
        match self {
            Nonterminal::S => 1,
            Nonterminal::Inv => 2,
            Nonterminal::Circ => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    Start,
    PairInsert(u8),
    Merge,
    Axiom,
}

impl RuleKind {
    pub fn name(self) -> &'static str {
        match self {
            RuleKind::Start => "start",
            RuleKind::PairInsert(_) => "pair",
            RuleKind::Merge => "merge",
            RuleKind::Axiom => "axiom",
        }
    }

    pub fn child_count(self) -> usize {
        match self {
            RuleKind::Axiom => 0,
            RuleKind::Start | RuleKind::PairInsert(_) => 1,
            RuleKind::Merge => 2,
        }
    }
}

/// One of the grammar's rule families, with the arities it connects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleFamily {
    pub kind: RuleKind,
    pub head_arity: usize,
    pub body_arities: Vec<usize>,
}

impl RuleFamily {
    /// The blocks every arrangement of this family must use, sorted.
    pub fn blocks(&self) -> Vec<Token> {
        let k = self.body_arities.first().copied().unwrap_or(0) as u8;
        let mut blocks: Vec<Token> = match self.kind {
            RuleKind::Axiom => Vec::new(),
            RuleKind::Start => (1..=k).map(|c| Token::var(0, c)).collect(),
            RuleKind::PairInsert(axis) => {
                let mut b: Vec<Token> = (1..=k).map(|c| Token::var(0, c)).collect();
                let l = Letter::new(axis, 1).expect("axis in range");
                b.push(Token::Lit(l));
                b.push(Token::Lit(l.inverse()));
                b
            }
            RuleKind::Merge => (1..=k)
                .flat_map(|c| [Token::var(0, c), Token::var(1, c)])
                .collect(),
        };
        blocks.sort_unstable();
        blocks
    }

    /// Whether `arr` is one of this family's arrangements.
    pub fn contains(&self, arr: &Arrangement) -> bool {
        if arr.splits.len() + 1 != self.head_arity {
            return false;
        }
        if arr.splits.windows(2).any(|w| w[0] > w[1])
            || arr.splits.last().is_some_and(|&s| s > arr.tokens.len())
        {
            return false;
        }
        if self.kind == RuleKind::Axiom {
            return arr.tokens.is_empty();
        }
        let mut tokens = arr.tokens.clone();
        tokens.sort_unstable();
        tokens == self.blocks()
    }
}

/// A block: a component of a child tuple, or a terminal letter.
///
/// Variables order as `x1 < y1 < x2 < y2 < x3 < y3`, and all variables precede letters.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Token {
    /// Component `component` (1-based) of child `child` (0 for x, 1 for y).
    Var {
        component: u8,
        child: u8,
    },
    Lit(Letter),
}

impl Token {
    pub fn var(child: u8, component: u8) -> Token {
        Token::Var { component, child }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Var { component, child } => {
                write!(f, "{}{}", if *child == 0 { 'x' } else { 'y' }, component)
            }
            Token::Lit(l) => write!(f, "{l}"),
        }
    }
}

impl fmt::Debug for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Token {
    type Err = GrammarError;

    fn from_str(s: &str) -> Result<Token, GrammarError> {
        let bad = || GrammarError::InvalidToken(s.to_string());
        let mut chars = s.chars();
        match (chars.next(), chars.as_str()) {
            (Some(c @ ('x' | 'y')), rest) => {
                let component: u8 = rest.parse().map_err(|_| bad())?;
                if component == 0 {
                    return Err(bad());
                }
                Ok(Token::var(u8::from(c == 'y'), component))
            }
            (Some(c), "") => Letter::from_char(c).map(Token::Lit).ok_or_else(bad),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Token {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Token {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Token, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A token sequence cut into consecutive groups, one per head component.
///
/// `splits` holds the `k - 1` interior cut positions, nondecreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrangement {
    pub tokens: Vec<Token>,
    pub splits: Vec<usize>,
}

impl Arrangement {
    pub fn new(tokens: Vec<Token>, splits: Vec<usize>) -> Arrangement {
        Arrangement { tokens, splits }
    }

    /// Builds an arrangement from its groups.
    pub fn from_groups(groups: &[Vec<Token>]) -> Arrangement {
        let mut tokens = Vec::new();
        let mut splits = Vec::new();
        for (i, g) in groups.iter().enumerate() {
            if i > 0 {
                splits.push(tokens.len());
            }
            tokens.extend_from_slice(g);
        }
        Arrangement { tokens, splits }
    }

    pub fn axiom(arity: usize) -> Arrangement {
        Arrangement::new(Vec::new(), vec![0; arity - 1])
    }

    pub fn start(arity: usize) -> Arrangement {
        Arrangement::new(
            (1..=arity as u8).map(|c| Token::var(0, c)).collect(),
            Vec::new(),
        )
    }

    /// `t_i = x_i y_i`.
    pub fn identity_merge(arity: usize) -> Arrangement {
        let groups: Vec<Vec<Token>> = (1..=arity as u8)
            .map(|c| vec![Token::var(0, c), Token::var(1, c)])
            .collect();
        Arrangement::from_groups(&groups)
    }

    pub fn arity(&self) -> usize {
        self.splits.len() + 1
    }

    pub fn groups(&self) -> Vec<&[Token]> {
        let mut out = Vec::with_capacity(self.arity());
        let mut start = 0;
        for &s in &self.splits {
            out.push(&self.tokens[start..s]);
            start = s;
        }
        out.push(&self.tokens[start..]);
        out
    }

    /// Substitutes the children's component words into the arrangement.
    pub fn apply(&self, n: u8, children: &[Vec<Word>]) -> Result<Vec<Word>, GrammarError> {
        let mut out = Vec::with_capacity(self.arity());
        for group in self.groups() {
            let mut letters: Vec<Letter> = Vec::new();
            for &t in group {
                match t {
                    Token::Lit(l) => letters.push(l),
                    Token::Var { component, child } => {
                        let word = children
                            .get(child as usize)
                            .and_then(|c| c.get(component as usize - 1))
                            .ok_or(GrammarError::UnboundVariable(t))?;
                        letters.extend_from_slice(word.letters());
                    }
                }
            }
            out.push(Word::new(n, letters).map_err(|e| GrammarError::Malformed(e.to_string()))?);
        }
        Ok(out)
    }

    fn uses_each_variable_once(&self) -> bool {
        let mut vars: Vec<Token> = self
            .tokens
            .iter()
            .copied()
            .filter(|t| matches!(t, Token::Var { .. }))
            .collect();
        let before = vars.len();
        vars.sort_unstable();
        vars.dedup();
        vars.len() == before
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.groups().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "t{} =", i + 1)?;
            if g.is_empty() {
                write!(f, " ε")?;
            }
            for t in *g {
                write!(f, " {t}")?;
            }
        }
        Ok(())
    }
}

/// True iff substituting `children` into `arr` reproduces `head` exactly.
pub fn check_step(
    head: &[Word],
    arr: &Arrangement,
    children: &[Vec<Word>],
) -> Result<bool, GrammarError> {
    if head.len() != arr.arity() {
        return Err(GrammarError::ArityMismatch {
            expected: arr.arity(),
            found: head.len(),
        });
    }
    if let Some(c) = children.iter().find(|c| c.len() != children[0].len()) {
        return Err(GrammarError::ArityMismatch {
            expected: children[0].len(),
            found: c.len(),
        });
    }
    let n = head.first().map_or(2, Word::dimension);
    let produced = match arr.apply(n, children) {
        Ok(p) => p,
        Err(GrammarError::UnboundVariable(_)) => {
            return Err(GrammarError::ArityMismatch {
                expected: arr
                    .tokens
                    .iter()
                    .filter_map(|t| match t {
                        Token::Var { component, .. } => Some(*component as usize),
                        Token::Lit(_) => None,
                    })
                    .max()
                    .unwrap_or(0),
                found: children.first().map_or(0, Vec::len),
            })
        }
        Err(e) => return Err(e),
    };
    Ok(produced
        .iter()
        .zip(head)
        .all(|(p, h)| p.letters() == h.letters()))
}

/// An MCFG with one tuple nonterminal of arity `k` and the start symbol `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    n: u8,
    tuple: Nonterminal,
}

impl Grammar {
    /// Grammar G: `Inv` of arity 2 over `{a, A, b, B}`.
    pub fn o2() -> Grammar {
        Grammar {
            n: 2,
            tuple: Nonterminal::Inv,
        }
    }

    /// Grammar G₃: `Circ` of arity 3 over `{a, A, b, B, c, C}`.
    pub fn o3() -> Grammar {
        Grammar {
            n: 3,
            tuple: Nonterminal::Circ,
        }
    }

    pub fn for_dimension(n: u8) -> Option<Grammar> {
        match n {
            2 => Some(Grammar::o2()),
            3 => Some(Grammar::o3()),
            _ => None,
        }
    }

    pub fn dimension(&self) -> u8 {
        self.n
    }

    pub fn start_symbol(&self) -> Nonterminal {
        Nonterminal::S
    }

    pub fn tuple_symbol(&self) -> Nonterminal {
        self.tuple
    }

    /// Arity of the tuple nonterminal.
    pub fn arity(&self) -> usize {
        self.tuple.arity()
    }

    pub fn alphabet(&self) -> &'static [Letter] {
        Letter::alphabet(self.n)
    }

    pub fn family(&self, kind: RuleKind) -> Option<RuleFamily> {
        let k = self.arity();
        let (head_arity, body_arities) = match kind {
            RuleKind::Start => (1, vec![k]),
            RuleKind::PairInsert(axis) if (1..=self.n).contains(&axis) => (k, vec![k]),
            RuleKind::PairInsert(_) => return None,
            RuleKind::Merge => (k, vec![k, k]),
            RuleKind::Axiom => (k, vec![]),
        };
        Some(RuleFamily {
            kind,
            head_arity,
            body_arities,
        })
    }

    /// Start, one PairInsert per axis, Merge, Axiom.
    pub fn families(&self) -> Vec<RuleFamily> {
        let mut kinds = vec![RuleKind::Start];
        kinds.extend((1..=self.n).map(RuleKind::PairInsert));
        kinds.push(RuleKind::Merge);
        kinds.push(RuleKind::Axiom);
        kinds.into_iter().filter_map(|k| self.family(k)).collect()
    }

    /// The empty tuple derived by the axiom.
    pub fn axiom_yield(&self) -> Vec<Word> {
        vec![Word::empty(self.n); self.arity()]
    }
}

/// Every arrangement of `family`, in canonical order: block orders in
/// lexicographic order, then split positions ascending.
pub fn enumerate_arrangements(family: &RuleFamily) -> Vec<Arrangement> {
    let k = family.head_arity;
    if family.kind == RuleKind::Axiom {
        return vec![Arrangement::axiom(k)];
    }
    if family.kind == RuleKind::Start {
        return vec![Arrangement::start(family.body_arities[0])];
    }
    let blocks = family.blocks();
    let mut out = Vec::new();
    let mut order = blocks.clone();
    loop {
        for splits in split_patterns(order.len(), k) {
            out.push(Arrangement::new(order.clone(), splits));
        }
        if !next_permutation(&mut order) {
            break;
        }
    }
    debug_assert!(out.iter().all(Arrangement::uses_each_variable_once));
    out.dedup();
    out
}

/// All nondecreasing sequences of `k - 1` cut positions in `0..=len`, ascending.
pub fn split_patterns(len: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(len: usize, left: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for s in from..=len {
            cur.push(s);
            rec(len, left - 1, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, k - 1, 0, &mut Vec::new(), &mut out);
    out
}

/// Advances to the next lexicographic permutation; false after the last one.
pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[i - 1] < v[j]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
