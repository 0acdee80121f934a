//! Bottom-up closure of a grammar's tuple language, stratified by total length.
//!
//! A tuple of total length `L` comes from a PairInsert on a tuple of length
//! `L - 2` or from a Merge of tuples whose lengths add up to `L`. Empty blocks
//! do not change what an arrangement produces, so each rule is applied by
//! distributing only the nonempty blocks. Merging with the axiom tuple just
//! redistributes blocks that are already concatenations of distributed blocks,
//! so it never adds anything and is skipped.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;

use super::{next_permutation, split_patterns, Grammar, GrammarError};
use crate::words::{candidate_count, Letter, Word};

/// A tuple of component words.
pub type Tuple = Vec<Word>;

/// Components packed as letter codes shifted up by one, separated by `0`, so
/// that byte order equals component-wise word order.
type Packed = Vec<u8>;

fn components(p: &[u8]) -> impl Iterator<Item = &[u8]> {
    p.split(|&b| b == 0)
}

fn unpack(n: u8, p: &[u8]) -> Tuple {
    components(p)
        .map(|c| {
            let letters = c.iter().map(|&b| Letter::ALL[b as usize - 1]).collect();
            Word::new(n, letters).expect("packed letters fit the grammar's dimension")
        })
        .collect()
}

/// Every distinct way to order `blocks` and cut the order into `k` groups.
fn distribute(blocks: &mut [&[u8]], k: usize, out: &mut HashSet<Packed>) {
    blocks.sort_unstable();
    let patterns = split_patterns(blocks.len(), k);
    let len: usize = blocks.iter().map(|b| b.len()).sum::<usize>() + k - 1;
    loop {
        for splits in &patterns {
            let mut packed = Vec::with_capacity(len);
            let mut cut = splits.iter().peekable();
            for (i, b) in blocks.iter().enumerate() {
                while cut.next_if(|&&s| s == i).is_some() {
                    packed.push(0);
                }
                packed.extend_from_slice(b);
            }
            packed.resize(len, 0);
            out.insert(packed);
        }
        if !next_permutation(blocks) {
            break;
        }
    }
}

fn nonempty(p: &[u8]) -> impl Iterator<Item = &[u8]> {
    components(p).filter(|c| !c.is_empty())
}

/// All tuples derivable from the grammar's tuple nonterminal with total length at
/// most `max_total_length`, in canonical order.
///
/// Fails with [`GrammarError::ResourceBound`] when `(2n)^max_total_length`
/// exceeds `cap`.
pub fn enumerate_derivable(
    g: &Grammar,
    max_total_length: usize,
    cap: u64,
) -> Result<BTreeSet<Tuple>, GrammarError> {
    let n = g.dimension();
    let candidates = candidate_count(max_total_length, n);
    if candidates > cap as u128 {
        return Err(GrammarError::ResourceBound {
            length: max_total_length,
            candidates,
            cap,
        });
    }
    let k = g.arity();
    let pairs: Vec<[u8; 2]> = (1..=n)
        .map(|axis| {
            let l = Letter::new(axis, 1).unwrap();
            [l.code() + 1, l.inverse().code() + 1]
        })
        .collect();

    let mut levels: Vec<Vec<Packed>> = vec![vec![vec![0; k - 1]]];
    for total in 1..=max_total_length {
        if total % 2 == 1 {
            levels.push(Vec::new());
            continue;
        }
        let inserted = levels[total - 2]
            .par_iter()
            .fold(HashSet::new, |mut acc, t| {
                for pair in &pairs {
                    let mut blocks: Vec<&[u8]> = nonempty(t).collect();
                    blocks.push(&pair[..1]);
                    blocks.push(&pair[1..]);
                    distribute(&mut blocks, k, &mut acc);
                }
                acc
            })
            .reduce(HashSet::new, union);

        let mut merged = HashSet::new();
        for l1 in (2..=total / 2).step_by(2) {
            let (left, right) = (&levels[l1], &levels[total - l1]);
            let same = l1 == total - l1;
            let part = left
                .par_iter()
                .enumerate()
                .fold(HashSet::new, |mut acc, (i, a)| {
                    let from = if same { i } else { 0 };
                    for b in &right[from..] {
                        let mut blocks: Vec<&[u8]> = nonempty(a).chain(nonempty(b)).collect();
                        distribute(&mut blocks, k, &mut acc);
                    }
                    acc
                })
                .reduce(HashSet::new, union);
            merged = union(merged, part);
        }

        let mut level: Vec<Packed> = union(inserted, merged).into_iter().collect();
        level.par_sort_unstable();
        levels.push(level);
    }

    Ok(levels.iter().flatten().map(|p| unpack(n, p)).collect())
}

fn union(mut a: HashSet<Packed>, b: HashSet<Packed>) -> HashSet<Packed> {
    if a.len() < b.len() {
        return union(b, a);
    }
    a.extend(b);
    a
}

/// Words derived from `S`: the concatenations of all derivable tuples.
pub fn derivable_words(
    g: &Grammar,
    max_total_length: usize,
    cap: u64,
) -> Result<BTreeSet<Word>, GrammarError> {
    let n = g.dimension();
    Ok(enumerate_derivable(g, max_total_length, cap)?
        .iter()
        .map(|t| Word::concat_all(n, t))
        .collect())
}
