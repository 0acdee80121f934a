//! Exhaustive search for Merge decompositions of a tuple.
//!
//! An arrangement with `2k` variable tokens cuts the concatenated word at `2k + 1`
//! boundaries `0 = B_0 <= B_1 <= ... <= B_2k = m`; token `j` reads the letters
//! `B_j..B_{j+1}`. The arrangement's group splits pin some boundaries to the
//! component cuts of the tuple, the rest are free and scanned in lexicographic
//! order.

use std::sync::OnceLock;

use super::Arity;
use crate::grammar::{enumerate_arrangements, Arrangement, Grammar, RuleKind, Token};
use crate::words::{Displacement, Letter};

pub(crate) fn merge_arrangements(k: Arity) -> &'static [Arrangement] {
    static O2: OnceLock<Vec<Arrangement>> = OnceLock::new();
    static O3: OnceLock<Vec<Arrangement>> = OnceLock::new();
    let (cell, g) = match k {
        Arity::Two => (&O2, Grammar::o2()),
        Arity::Three => (&O3, Grammar::o3()),
    };
    cell.get_or_init(|| enumerate_arrangements(&g.family(RuleKind::Merge).unwrap()))
}

pub(crate) fn arrangement_index(k: Arity, arr: &Arrangement) -> usize {
    merge_arrangements(k)
        .iter()
        .position(|a| a == arr)
        .expect("arrangement belongs to the Merge family")
}

pub(crate) struct Scanner<'a> {
    n: u8,
    prefix: Vec<Displacement>,
    /// Component cuts of the tuple, `|w1|`, `|w1 w2|`, ...
    qs: &'a [usize],
    m: usize,
    pub(crate) searched: u64,
}

impl<'a> Scanner<'a> {
    pub(crate) fn new(n: u8, letters: &[Letter], qs: &'a [usize]) -> Scanner<'a> {
        let mut prefix = Vec::with_capacity(letters.len() + 1);
        let mut at = Displacement::zero(n);
        prefix.push(at);
        for &l in letters {
            at.step(l);
            prefix.push(at);
        }
        Scanner {
            n,
            prefix,
            qs,
            m: letters.len(),
            searched: 0,
        }
    }

    /// Whether these boundaries under `arr` give a valid decomposition: the x
    /// components sum to zero and both halves are nonempty.
    pub(crate) fn accepts(&self, arr: &Arrangement, bounds: &[usize]) -> bool {
        let mut sum = Displacement::zero(self.n);
        let mut x_len = 0;
        for (j, t) in arr.tokens.iter().enumerate() {
            if let Token::Var { child: 0, .. } = t {
                sum += self.prefix[bounds[j + 1]] - self.prefix[bounds[j]];
                x_len += bounds[j + 1] - bounds[j];
            }
        }
        sum.is_zero() && x_len > 0 && x_len < self.m
    }

    /// Boundaries pinned by the arrangement's splits, or `None` if they conflict.
    fn pinned(&self, arr: &Arrangement) -> Option<Vec<Option<usize>>> {
        let t = arr.tokens.len();
        let mut pins = vec![None; t + 1];
        pins[0] = Some(0);
        pins[t] = Some(self.m);
        for (g, &s) in arr.splits.iter().enumerate() {
            let q = self.qs[g];
            match pins[s] {
                Some(v) if v != q => return None,
                _ => pins[s] = Some(q),
            }
        }
        Some(pins)
    }

    /// First accepted boundary vector for `arr` in lexicographic order of free cuts.
    pub(crate) fn scan(&mut self, arr: &Arrangement) -> Option<Vec<usize>> {
        let pins = self.pinned(arr)?;
        let mut bounds = vec![0; pins.len()];
        if self.fill(arr, &pins, &mut bounds, 1) {
            Some(bounds)
        } else {
            None
        }
    }

    fn fill(
        &mut self,
        arr: &Arrangement,
        pins: &[Option<usize>],
        bounds: &mut [usize],
        j: usize,
    ) -> bool {
        if j == pins.len() {
            self.searched += 1;
            return self.accepts(arr, bounds);
        }
        let lo = bounds[j - 1];
        if let Some(v) = pins[j] {
            if v < lo {
                return false;
            }
            bounds[j] = v;
            return self.fill(arr, pins, bounds, j + 1);
        }
        let hi = pins[j..].iter().flatten().next().copied().unwrap_or(self.m);
        for v in lo..=hi {
            bounds[j] = v;
            if self.fill(arr, pins, bounds, j + 1) {
                return true;
            }
        }
        false
    }

    /// Free cut positions of `bounds` under `arr`: the interior boundaries not
    /// pinned to a component cut.
    pub(crate) fn free_cuts(arr: &Arrangement, bounds: &[usize]) -> Vec<usize> {
        let t = arr.tokens.len();
        (1..t)
            .filter(|j| !arr.splits.contains(j))
            .map(|j| bounds[j])
            .collect()
    }
}
