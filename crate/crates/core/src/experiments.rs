//! Bounded experiments over O₂ and O₃: derivation sweeps, alternating
//! decompositions, closure-versus-language comparison and the complex checks.
//!
//! Work is sharded over rayon's current pool and merged in input order, so every
//! report is identical for any worker count.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::chain_complex::{
    build_complex, homology_ranks, is_boundary, is_cycle, link_graph, subcomplex_euler,
    verify_dd_zero, Chain, HomologyReport,
};
use crate::grammar::{count_pair_inserts, derivable_words, verify_tree, Grammar, GrammarError};
use crate::splitter::{
    derive, derive3, find_alternating_split3, AlternatingMode, Derivation3, SplitError,
};
use crate::words::{enumerate_on, Word, WordError};

pub const DEFAULT_CAP: u64 = 10_000_000;

/// How many words of a symmetric difference a report lists.
pub const SAMPLE_LIMIT: usize = 10;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    General,
    Alternating,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepFailure {
    pub words: Vec<Word>,
    pub reason: String,
    /// The stuck subtuple when a derivation ran into a missing decomposition.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<Word>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LengthCount {
    pub length: usize,
    pub words: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlternatingLength {
    pub length: usize,
    pub words: usize,
    pub allow_empty: usize,
    pub nonempty_pieces: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub command: &'static str,
    pub n: u8,
    pub max_len: usize,
    pub mode: SweepMode,
    pub seed: Option<u64>,
    pub words: usize,
    /// Tuples derived: every split for n = 2, `(w, ε, ε)` for n = 3.
    pub tuples: usize,
    pub by_length: Vec<LengthCount>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alternating: Option<Vec<AlternatingLength>>,
    /// Words without a decomposition under the possibly-empty-pieces reading
    /// are failures; the all-nonempty reading is only tallied.
    pub failures: Vec<SweepFailure>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Which words a sweep visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sample {
    /// At most this many words per length.
    pub per_length: usize,
    pub seed: u64,
}

/// Words of O_n by length, optionally thinned to a seeded sample per length.
fn words_by_length(
    n: u8,
    max_len: usize,
    cap: u64,
    sample: Option<Sample>,
) -> Result<Vec<Vec<Word>>, ExperimentError> {
    let mut out = Vec::new();
    for len in (0..=max_len).step_by(2) {
        let mut ws = enumerate_on(len, n, cap)?;
        if let Some(s) = sample {
            ws = thin(ws, s.per_length, s.seed ^ len as u64);
        }
        out.push(ws);
    }
    Ok(out)
}

/// `k` words chosen by a seeded shuffle, returned in canonical order.
fn thin(ws: Vec<Word>, k: usize, seed: u64) -> Vec<Word> {
    use rand::seq::index::sample;
    use rand::SeedableRng;
    if ws.len() <= k {
        return ws;
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut picked = sample(&mut rng, ws.len(), k).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|i| ws[i].clone()).collect()
}

pub fn sweep(
    n: u8,
    max_len: usize,
    mode: SweepMode,
    cap: u64,
    sample: Option<Sample>,
) -> Result<SweepReport, ExperimentError> {
    if !(2..=3).contains(&n) {
        return Err(ExperimentError::Unsupported(format!(
            "sweeps run in dimension 2 or 3, not {n}"
        )));
    }
    if mode == SweepMode::Alternating && n != 3 {
        return Err(ExperimentError::Unsupported(
            "the alternating decomposition is defined for n = 3".into(),
        ));
    }
    let levels = words_by_length(n, max_len, cap, sample)?;
    let by_length = levels
        .iter()
        .enumerate()
        .map(|(i, ws)| LengthCount {
            length: 2 * i,
            words: ws.len(),
        })
        .collect();
    let all: Vec<Word> = levels.iter().flatten().cloned().collect();
    let mut report = SweepReport {
        command: "sweep",
        n,
        max_len,
        mode,
        seed: sample.map(|s| s.seed),
        words: all.len(),
        tuples: 0,
        by_length,
        alternating: None,
        failures: Vec::new(),
    };
    match (mode, n) {
        (SweepMode::General, 2) => {
            report.tuples = all.iter().map(|w| w.len() + 1).sum();
            report.failures = collect_failures(&all, |w| {
                (0..=w.len())
                    .filter_map(|i| check_o2(&w.slice(0, i), &w.slice(i, w.len())))
                    .collect()
            });
        }
        (SweepMode::General, _) => {
            report.tuples = all.len();
            report.failures = collect_failures(&all, |w| check_o3(w).into_iter().collect());
        }
        (SweepMode::Alternating, _) => {
            let results: Vec<(bool, bool)> =
                all.par_iter().map(alternating).collect::<Result<_, _>>()?;
            report.tuples = all.len();
            let mut tallies = Vec::new();
            let mut at = 0;
            for (i, ws) in levels.iter().enumerate() {
                let chunk = &results[at..at + ws.len()];
                tallies.push(AlternatingLength {
                    length: 2 * i,
                    words: ws.len(),
                    allow_empty: chunk.iter().filter(|r| r.0).count(),
                    nonempty_pieces: chunk.iter().filter(|r| r.1).count(),
                });
                at += ws.len();
            }
            report.alternating = Some(tallies);
            report.failures = all
                .iter()
                .zip(&results)
                .filter(|(_, r)| !r.0)
                .map(|(w, _)| SweepFailure {
                    words: vec![w.clone()],
                    reason: "no alternating decomposition".into(),
                    counterexample: None,
                })
                .collect();
        }
    }
    Ok(report)
}

fn collect_failures(
    all: &[Word],
    check: impl Fn(&Word) -> Vec<SweepFailure> + Sync,
) -> Vec<SweepFailure> {
    all.par_iter()
        .map(&check)
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn failure(words: Vec<Word>, reason: String) -> SweepFailure {
    SweepFailure {
        words,
        reason,
        counterexample: None,
    }
}

fn check_o2(w1: &Word, w2: &Word) -> Option<SweepFailure> {
    let words = vec![w1.clone(), w2.clone()];
    let tree = match derive(w1, w2) {
        Ok(t) => t,
        Err(SplitError::Incompleteness { words: stuck, .. }) => {
            return Some(SweepFailure {
                words,
                reason: "no decomposition".into(),
                counterexample: Some(stuck),
            })
        }
        Err(e) => return Some(failure(words, e.to_string())),
    };
    check_tree(&tree, &Grammar::o2(), w1.len() + w2.len(), words)
}

fn check_o3(w: &Word) -> Option<SweepFailure> {
    let e = Word::empty(3);
    let words = vec![w.clone(), e.clone(), e.clone()];
    match derive3(w, &e, &e) {
        Ok(Derivation3::Tree(tree)) => check_tree(&tree, &Grammar::o3(), w.len(), words),
        Ok(Derivation3::Counterexample(c)) => Some(SweepFailure {
            words,
            reason: format!("no decomposition after {} candidates", c.searched),
            counterexample: Some(c.words),
        }),
        Err(e) => Some(failure(words, e.to_string())),
    }
}

fn check_tree(
    tree: &crate::grammar::DerivationTree,
    g: &Grammar,
    len: usize,
    words: Vec<Word>,
) -> Option<SweepFailure> {
    if let Err(e) = verify_tree(tree, g) {
        return Some(failure(words, format!("rejected tree: {e}")));
    }
    let pairs = count_pair_inserts(tree);
    if pairs != len / 2 {
        return Some(failure(
            words,
            format!("{pairs} PairInsert nodes for length {len}"),
        ));
    }
    None
}

/// Whether `w` has an alternating decomposition with possibly empty pieces,
/// and with all six pieces nonempty. Words shorter than 4 are base cases.
fn alternating(w: &Word) -> Result<(bool, bool), SplitError> {
    if w.len() < 4 {
        return Ok((true, true));
    }
    let e = Word::empty(3);
    let found = |mode| -> Result<bool, SplitError> {
        Ok(find_alternating_split3(w, &e, &e, mode)?.0.is_some())
    };
    Ok((
        found(AlternatingMode::AllowEmpty)?,
        found(AlternatingMode::NonemptyPieces)?,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerateLength {
    pub length: usize,
    pub closure: usize,
    pub language: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerateReport {
    pub command: &'static str,
    pub n: u8,
    pub max_len: usize,
    pub by_length: Vec<EnumerateLength>,
    pub closure_in_language: bool,
    pub language_in_closure: bool,
    pub equal: bool,
    /// Derived words outside O_n, first few in canonical order.
    pub only_closure: Vec<Word>,
    /// Words of O_n the grammar misses.
    pub only_language: Vec<Word>,
}

/// Grammar closure against direct enumeration of O_n, both up to `max_len`.
pub fn enumerate(n: u8, max_len: usize, cap: u64) -> Result<EnumerateReport, ExperimentError> {
    let g = Grammar::for_dimension(n)
        .ok_or_else(|| ExperimentError::Unsupported(format!("no grammar for dimension {n}")))?;
    let derived = derivable_words(&g, max_len, cap)?;
    let mut language = BTreeSet::new();
    for len in (0..=max_len).step_by(2) {
        language.extend(enumerate_on(len, n, cap)?);
    }
    let by_length = (0..=max_len)
        .step_by(2)
        .map(|len| EnumerateLength {
            length: len,
            closure: derived.iter().filter(|w| w.len() == len).count(),
            language: language.iter().filter(|w| w.len() == len).count(),
        })
        .collect();
    let only_closure: Vec<Word> = derived.difference(&language).cloned().collect();
    let only_language: Vec<Word> = language.difference(&derived).cloned().collect();
    Ok(EnumerateReport {
        command: "enumerate",
        n,
        max_len,
        by_length,
        closure_in_language: only_closure.is_empty(),
        language_in_closure: only_language.is_empty(),
        equal: only_closure.is_empty() && only_language.is_empty(),
        only_closure: only_closure.into_iter().take(SAMPLE_LIMIT).collect(),
        only_language: only_language.into_iter().take(SAMPLE_LIMIT).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkSummary {
    pub vertex: String,
    pub vertices: usize,
    pub edges: usize,
    pub cells: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexReport {
    pub checks: Vec<CheckResult>,
    pub homology: HomologyReport,
    pub links: Vec<LinkSummary>,
}

impl ComplexReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// The fixed checks on 𝒳: transcription, cycles, a certified boundary, links,
/// bigon spheres and the Euler characteristic.
pub fn complex_checks() -> ComplexReport {
    let c = build_complex();
    let mut checks = Vec::new();
    let mut push = |check: &str, pass: bool, detail: String| {
        checks.push(CheckResult {
            check: check.to_string(),
            pass,
            detail,
        })
    };

    push("dd_zero", verify_dd_zero(&c), "d1 * d2 = 0".into());
    for (name, terms) in [
        ("cycle E-F", vec![("E", 1), ("F", -1)]),
        ("cycle G-H", vec![("G", 1), ("H", -1)]),
        ("cycle I-J", vec![("I", 1), ("J", -1)]),
        ("cycle K-L", vec![("K", 1), ("L", -1)]),
        (
            "cycle A+B+C+D",
            vec![("A", 1), ("B", 1), ("C", 1), ("D", 1)],
        ),
    ] {
        let ok = c
            .two_chain(&terms)
            .and_then(|ch| is_cycle(&c, &ch))
            .unwrap_or(false);
        push(name, ok, "boundary vanishes".into());
    }

    let certificate = match c.one_chain(&[("alpha", 1), ("beta", 1)]) {
        Ok(Chain::One(v)) => is_boundary(&c, &v).ok().flatten(),
        _ => None,
    };
    let e_only = c.two_chain(&[("E", 1)]).ok();
    let named = certificate
        .as_ref()
        .map(|u| {
            u.iter()
                .zip(&c.two_cells)
                .filter(|(k, _)| **k != 0)
                .map(|(k, n)| format!("{k}{n}"))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .unwrap_or_else(|| "none".into());
    push(
        "boundary alpha+beta",
        certificate.map(Chain::Two) == e_only,
        format!("certificate {named}"),
    );

    let mut links = Vec::new();
    for v in ["p1", "p2", "p3", "p4"] {
        if let Ok(l) = link_graph(&c, v) {
            links.push(LinkSummary {
                vertex: v.to_string(),
                vertices: l.vertices.len(),
                edges: l.edges.len(),
                cells: l.edges.iter().map(|e| e.cell.clone()).collect(),
            });
        }
    }
    let l1 = link_graph(&c, "p1");
    let l4 = link_graph(&c, "p4");
    match (&l1, &l4) {
        (Ok(a), Ok(b)) => {
            for l in [a, b] {
                push(
                    &format!("link {}", l.base),
                    l.vertices.len() == 4 && l.edges.len() == 8,
                    format!("{} vertices, {} edges", l.vertices.len(), l.edges.len()),
                );
            }
            push(
                "links p1 p4 disjoint",
                a.vertices.iter().all(|v| !b.vertices.contains(v)),
                "no shared link vertices".into(),
            );
            let bigons = [
                (a, "alpha", "beta"),
                (a, "gamma", "delta"),
                (b, "alpha_bar", "beta_bar"),
                (b, "gamma_bar", "delta_bar"),
            ];
            for (l, x, y) in bigons {
                let found = l.bigon(x, y);
                push(
                    &format!("link {} loop {x}-{y}", l.base),
                    found.is_some(),
                    found.map_or("missing".into(), |[p, q]| format!("{p}, {q}")),
                );
            }
        }
        _ => push("links", false, "link construction failed".into()),
    }
    for pair in [["E", "F"], ["G", "H"], ["I", "J"], ["K", "L"]] {
        let chi = subcomplex_euler(&c, &pair).unwrap_or(0);
        push(
            &format!("sphere {}{}", pair[0], pair[1]),
            chi == 2,
            format!("euler characteristic {chi}"),
        );
    }

    let homology = homology_ranks(&c);
    push(
        "euler characteristic",
        homology.euler_characteristic == 8 && c.euler_characteristic() == 8,
        format!(
            "betti {:?}, alternating sum {}",
            homology.betti, homology.euler_characteristic
        ),
    );
    ComplexReport {
        checks,
        homology,
        links,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_o2_sweep() {
        let r = sweep(2, 4, SweepMode::General, DEFAULT_CAP, None).unwrap();
        assert_eq!(r.words, 41);
        assert_eq!(r.tuples, 1 + 4 * 3 + 36 * 5);
        assert!(r.passed(), "{:?}", r.failures);
    }

    #[test]
    fn empty_sweep() {
        let r = sweep(2, 0, SweepMode::General, DEFAULT_CAP, None).unwrap();
        assert_eq!(r.words, 1);
    }

    #[test]
    fn alternating_needs_three_axes() {
        assert!(sweep(2, 4, SweepMode::Alternating, DEFAULT_CAP, None).is_err());
        let r = sweep(3, 4, SweepMode::Alternating, DEFAULT_CAP, None).unwrap();
        assert!(r.passed());
        let t = r.alternating.unwrap();
        assert_eq!(t[2].length, 4);
        assert_eq!(t[2].nonempty_pieces, 0);
    }

    #[test]
    fn o3_general_sweep() {
        let r = sweep(3, 4, SweepMode::General, DEFAULT_CAP, None).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
    }

    #[test]
    fn sampling_is_seeded() {
        let s = Some(Sample {
            per_length: 5,
            seed: 7,
        });
        let a = sweep(2, 6, SweepMode::General, DEFAULT_CAP, s).unwrap();
        let b = sweep(2, 6, SweepMode::General, DEFAULT_CAP, s).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.words, 1 + 4 + 5 + 5);
        assert_eq!(a.seed, Some(7));
    }

    #[test]
    fn enumerate_small() {
        let r = enumerate(2, 4, DEFAULT_CAP).unwrap();
        assert!(r.equal);
        let sizes: Vec<usize> = r.by_length.iter().map(|l| l.language).collect();
        assert_eq!(sizes, [1, 4, 36]);
    }

    #[test]
    fn complex_all_pass() {
        let r = complex_checks();
        assert!(r.passed(), "{:?}", r.checks);
        assert_eq!(r.links[0].edges, 8);
    }
}
