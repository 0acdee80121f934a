//! Independent brute-force checks of the counting and closure machinery.

use std::collections::BTreeSet;

use mixforge::grammar::{derivable_words, Grammar};
use mixforge::words::{enumerate_on, Letter, Word};

const CAP: u64 = 10_000_000;

/// Every string of length `m` over the `2n` letters, decoded from base-`2n` digits.
fn all_strings(m: usize, n: u8) -> impl Iterator<Item = Vec<Letter>> {
    let alphabet = Letter::alphabet(n);
    let base = alphabet.len();
    let total = base.pow(m as u32);
    (0..total).map(move |mut k| {
        let mut letters = Vec::with_capacity(m);
        for _ in 0..m {
            letters.push(alphabet[k % base]);
            k /= base;
        }
        letters
    })
}

fn balanced(letters: &[Letter], n: u8) -> bool {
    let mut count = vec![0i32; n as usize];
    for l in letters {
        count[l.axis() as usize - 1] += l.sign() as i32;
    }
    count.iter().all(|&c| c == 0)
}

fn brute_force(m: usize, n: u8) -> BTreeSet<Word> {
    all_strings(m, n)
        .filter(|l| balanced(l, n))
        .map(|l| Word::new(n, l).unwrap())
        .collect()
}

#[test]
fn language_counts_match_brute_force() {
    for n in 1..=3u8 {
        for m in 0..=8 {
            if n == 3 && m > 6 {
                continue;
            }
            let walk: BTreeSet<Word> = enumerate_on(m, n, CAP).unwrap().into_iter().collect();
            assert_eq!(walk, brute_force(m, n), "n = {n}, m = {m}");
        }
    }
}

#[test]
fn o3_length_eight_count() {
    // multinomial sum over letter multiplicities; independent of both enumerators
    let fact = |k: u64| (1..=k).product::<u64>();
    let mut expected = 0;
    for a in 0..=4u64 {
        for b in 0..=4 - a {
            let c = 4 - a - b;
            expected += fact(8) / (fact(a).pow(2) * fact(b).pow(2) * fact(c).pow(2));
        }
    }
    assert_eq!(expected, 44730);
    assert_eq!(enumerate_on(8, 3, CAP).unwrap().len() as u64, expected);
}

#[test]
fn paper_counts() {
    let sizes: Vec<usize> = (0..=8)
        .step_by(2)
        .map(|m| brute_force(m, 2).len())
        .collect();
    assert_eq!(sizes, [1, 4, 36, 400, 4900]);
}

#[test]
fn closure_is_the_language_up_to_eight() {
    let derived = derivable_words(&Grammar::o2(), 8, CAP).unwrap();
    let mut all = BTreeSet::new();
    for m in (0..=8).step_by(2) {
        all.extend(brute_force(m, 2));
    }
    assert_eq!(derived, all);
}

#[test]
fn o3_closure_up_to_four() {
    let derived = derivable_words(&Grammar::o3(), 4, CAP).unwrap();
    let mut all = BTreeSet::new();
    for m in (0..=4).step_by(2) {
        all.extend(brute_force(m, 3));
    }
    assert_eq!(derived, all);
}
