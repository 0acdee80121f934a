//! Acceptance criteria 1–7. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::Instant;

use mixforge::chain_complex::{
    build_complex, cut_bipartition, homology_ranks, is_boundary, is_cycle, link_graph,
    verify_dd_zero, zero_scan_at, Chain,
};
use mixforge::geometry::{link_cycle_degree, to_path, winding_number, GeometryError, Half, Vec2};
use mixforge::grammar::{count_pair_inserts, verify_tree, Grammar, RuleKind};
use mixforge::splitter::{derive, find_split, SplitWitness};
use mixforge::words::{enumerate_on, Letter, Word};

const CAP: u64 = 10_000_000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn run(args: &[&str]) -> Result<(Option<i32>, serde_json::Value), String> {
    let o = Command::new(env!("CARGO_BIN_EXE_mixforge"))
        .args(args)
        .env_remove("MIXFORGE_CAP")
        .output()
        .map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&o.stdout);
    let first = text.lines().next().ok_or("no report on stdout")?;
    let v = serde_json::from_str(first).map_err(|e| e.to_string())?;
    Ok((o.status.code(), v))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Balanced strings of length `m` over `{a, A, b, B}` counted by trying all `4^m`.
fn brute_count(m: usize) -> usize {
    let alphabet = Letter::alphabet(2);
    (0..4usize.pow(m as u32))
        .filter(|&k| {
            let mut d = [0i32; 2];
            let mut k = k;
            for _ in 0..m {
                let l = alphabet[k % 4];
                d[l.axis() as usize - 1] += l.sign() as i32;
                k /= 4;
            }
            d == [0, 0]
        })
        .count()
}

fn criterion_1() -> Outcome {
    let (code, r) = run(&["enumerate", "-n", "2", "--max-len", "8"])?;
    ensure(code == Some(0), || format!("exit code {code:?}"))?;
    ensure(r["equal"] == true, || "closure and O2 differ".into())?;
    let brute: Vec<usize> = (0..=8).step_by(2).map(brute_count).collect();
    ensure(brute == [1, 4, 36, 400, 4900], || {
        format!("brute force {brute:?}")
    })?;
    for (l, &b) in r["by_length"].as_array().unwrap().iter().zip(&brute) {
        let (c, o) = (l["closure"].as_u64(), l["language"].as_u64());
        ensure(c == Some(b as u64) && o == Some(b as u64), || {
            format!("length {}: closure {c:?}, O2 {o:?}, brute {b}", l["length"])
        })?;
    }
    Ok(format!("closure = O2 up to 8, sizes {brute:?}"))
}

/// The decomposition conditions, checked from the witness fields alone.
fn check_witness(w1: &Word, w2: &Word, wit: &SplitWitness) -> Result<(), String> {
    let whole = w1.concat(w2);
    let m = whole.len();
    let d = &wit.decomposition;
    let b = &d.boundaries;
    ensure(b.len() == 5 && b[0] == 0 && b[4] == m, || {
        format!("boundaries {b:?}")
    })?;
    ensure(b.windows(2).all(|p| p[0] <= p[1]), || {
        "unsorted cuts".into()
    })?;
    ensure(b.contains(&w1.len()), || "q is not a cut".into())?;
    // every arc used once
    let mut used: Vec<usize> = wit.pairing.iter().flatten().copied().collect();
    used.sort_unstable();
    ensure(used == [1, 2, 3, 4], || {
        format!("pairing {:?}", wit.pairing)
    })?;
    let arc = |j: usize| whole.slice(b[j - 1], b[j]);
    for (side, words) in [(0, &wit.x), (1, &wit.y)] {
        for (c, &j) in wit.pairing[side].iter().enumerate() {
            ensure(words[c] == arc(j), || {
                format!("component {c} is not arc {j}")
            })?;
        }
        let joined = words[0].concat(&words[1]);
        // balanced and strictly shorter
        ensure(joined.is_balanced(), || format!("{joined} is not balanced"))?;
        ensure(!joined.is_empty() && joined.len() < m, || {
            "not strictly shorter".into()
        })?;
    }
    ensure(
        Grammar::o2()
            .family(RuleKind::Merge)
            .unwrap()
            .contains(&wit.arrangement),
        || "arrangement outside the Merge rule".into(),
    )?;
    let produced = wit
        .arrangement
        .apply(2, &[wit.x.clone(), wit.y.clone()])
        .map_err(|e| e.to_string())?;
    ensure(produced == [w1.clone(), w2.clone()], || {
        "Merge does not reproduce the pair".into()
    })
}

fn criterion_2() -> Outcome {
    let mut tuples = 0;
    for m in (4..=10).step_by(2) {
        for w in enumerate_on(m, 2, CAP).map_err(|e| e.to_string())? {
            for i in 0..=m {
                let (w1, w2) = (w.slice(0, i), w.slice(i, m));
                let wit = find_split(&w1, &w2)
                    .map_err(|e| e.to_string())?
                    .ok_or_else(|| format!("no split for ({w1}, {w2})"))?;
                check_witness(&w1, &w2, &wit).map_err(|e| format!("({w1}, {w2}): {e}"))?;
                tuples += 1;
            }
        }
    }
    Ok(format!(
        "{tuples} pairs with 4 <= |w| <= 10 split, 0 without a witness"
    ))
}

fn criterion_3() -> Outcome {
    let g = Grammar::o2();
    let e = Word::empty(2);
    let mut count = 0;
    for m in (0..=10).step_by(2) {
        for w in enumerate_on(m, 2, CAP).map_err(|e| e.to_string())? {
            let tree = derive(&w, &e).map_err(|e| format!("{w}: {e}"))?;
            verify_tree(&tree, &g).map_err(|e| format!("{w}: {e}"))?;
            let pairs = count_pair_inserts(&tree);
            ensure(pairs == m / 2, || format!("{w}: {pairs} PairInsert nodes"))?;
            count += 1;
        }
    }
    Ok(format!(
        "{count} trees verified with |w|/2 PairInsert nodes"
    ))
}

fn criterion_4() -> Outcome {
    let c = build_complex();
    ensure(verify_dd_zero(&c), || "d1 d2 != 0".into())?;
    for terms in [
        vec![("E", 1), ("F", -1)],
        vec![("G", 1), ("H", -1)],
        vec![("I", 1), ("J", -1)],
        vec![("K", 1), ("L", -1)],
        vec![("A", 1), ("B", 1), ("C", 1), ("D", 1)],
    ] {
        let chain = c.two_chain(&terms).map_err(|e| e.to_string())?;
        ensure(is_cycle(&c, &chain) == Ok(true), || {
            format!("{terms:?} is not a cycle")
        })?;
    }
    let Ok(Chain::One(ab)) = c.one_chain(&[("alpha", 1), ("beta", 1)]) else {
        return Err("bad chain".into());
    };
    let cert = is_boundary(&c, &ab).map_err(|e| e.to_string())?;
    let mut e = vec![0; 12];
    e[4] = 1;
    ensure(cert == Some(e), || format!("certificate {cert:?}"))?;
    let l1 = link_graph(&c, "p1").map_err(|e| e.to_string())?;
    let l4 = link_graph(&c, "p4").map_err(|e| e.to_string())?;
    for l in [&l1, &l4] {
        ensure(l.vertices.len() == 4 && l.edges.len() == 8, || {
            format!("Lk({}) has {}/{}", l.base, l.vertices.len(), l.edges.len())
        })?;
    }
    ensure(l1.vertices.iter().all(|v| !l4.vertices.contains(v)), || {
        "links share a vertex".into()
    })?;
    let h = homology_ranks(&c);
    let chi = h.betti[0] as i64 - h.betti[1] as i64 + h.betti[2] as i64;
    ensure(chi == 8 && c.euler_characteristic() == 8, || {
        format!("chi {chi}")
    })?;
    Ok(format!("all checks hold, betti {:?}, chi = 8", h.betti))
}

/// Bipartitions of the loop given by unions of the four arcs cut at
/// `{0, q, r, s}`, both sides zero-sum and nonempty.
fn arc_bipartitions(w: &Word, q: usize) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    let m = w.len();
    let p = to_path(w);
    let mut out = BTreeSet::new();
    for r in 0..=m {
        for s in r..=m {
            let mut cuts = [0, q, r, s, m];
            cuts.sort_unstable();
            for mask in 1u32..15 {
                let mut side = Vec::new();
                for j in 0..4 {
                    if mask & (1 << j) != 0 {
                        side.extend(cuts[j]..cuts[j + 1]);
                    }
                }
                side.sort_unstable();
                side.dedup();
                if side.is_empty() || side.len() == m {
                    continue;
                }
                let mut d = [0i32; 2];
                for &i in &side {
                    let st = p.step(i);
                    d[0] += st[0];
                    d[1] += st[1];
                }
                if d == [0, 0] {
                    out.insert(cut_bipartition(&side, m));
                }
            }
        }
    }
    out
}

fn criterion_5() -> Outcome {
    let mut splits = 0;
    let mut zeros = 0;
    let mut witnesses = 0;
    for m in (0..=8).step_by(2) {
        for w in enumerate_on(m, 2, CAP).map_err(|e| e.to_string())? {
            let path = to_path(&w);
            for q in 0..=m {
                let found = zero_scan_at(&path, q).map_err(|e| e.to_string())?;
                zeros += found.len();
                let z: BTreeSet<_> = found.iter().map(|z| z.bipartition(m)).collect();
                let p = arc_bipartitions(&w, q);
                ensure(z == p, || {
                    format!(
                        "{w} q={q}: {} zero bipartitions, {} arc pairings",
                        z.len(),
                        p.len()
                    )
                })?;
                let (w1, w2) = (w.slice(0, q), w.slice(q, m));
                if let Some(wit) = find_split(&w1, &w2).map_err(|e| e.to_string())? {
                    if wit.decomposition.cuts.len() == 2 {
                        let b = &wit.decomposition.boundaries;
                        let side: Vec<usize> = wit.pairing[0]
                            .iter()
                            .flat_map(|&j| b[j - 1]..b[j])
                            .collect();
                        let mut side = side;
                        side.sort_unstable();
                        ensure(z.contains(&cut_bipartition(&side, m)), || {
                            format!("{w} q={q}: witness is not a zero")
                        })?;
                        witnesses += 1;
                    }
                }
                splits += 1;
            }
        }
    }
    Ok(format!(
        "{splits} cut loops, {zeros} zeros; zero bipartitions = arc pairings, {witnesses} witnesses among the zeros"
    ))
}

fn criterion_6() -> Outcome {
    let (code, r) = run(&[
        "sweep",
        "-n",
        "3",
        "--max-len",
        "8",
        "--mode",
        "alternating",
    ])?;
    ensure(code == Some(0), || {
        format!("alternating sweep exit {code:?}")
    })?;
    let failures = r["failures"].as_array().map_or(0, Vec::len);
    ensure(failures == 0, || {
        format!("{failures} words without alternating split")
    })?;
    let words = r["words"].as_u64().unwrap_or(0);
    let (code, e) = run(&["enumerate", "-n", "3", "--max-len", "6"])?;
    ensure(e["closure_in_language"] == true, || {
        "closure leaves O3".into()
    })?;
    ensure(code == Some(0) || code == Some(1), || {
        format!("enumerate exit {code:?}")
    })?;
    Ok(format!(
        "(a) {words} O3 words up to 8, 0 without an alternating split; (b) closure ⊆ O3, equal up to 6: {}",
        e["equal"]
    ))
}

fn steps(path: &mixforge::geometry::LatticePath) -> Vec<Vec2> {
    (0..path.len())
        .map(|t| {
            let d = path.step(t);
            [d[0] as i64, d[1] as i64]
        })
        .collect()
}

fn criterion_7() -> Outcome {
    let mut loops = 0;
    let mut rejected = 0;
    for m in (4..=10).step_by(2) {
        for w in enumerate_on(m, 2, CAP).map_err(|e| e.to_string())? {
            let path = to_path(&w);
            if !path.is_embedded() {
                continue;
            }
            loops += 1;
            let s = steps(&path);
            let r = winding_number(&s, true).map_err(|e| e.to_string())?;
            ensure(r == 1 || r == -1, || format!("{w}: rotation number {r}"))?;
            let back = winding_number(&steps(&path.reversed()), true).map_err(|e| e.to_string())?;
            ensure(back == -r, || format!("{w}: reversal gives {back}"))?;
            let h = m / 2;
            for (half, first, last) in [
                (Half::First, s[0], s[h - 1]),
                (Half::Second, s[h], s[m - 1]),
            ] {
                let antiparallel = first[0] == -last[0] && first[1] == -last[1];
                let base = link_cycle_degree(&path, half, 1);
                match &base {
                    Err(GeometryError::AntiparallelTangents) => {
                        ensure(antiparallel, || format!("{w}: spurious antiparallel error"))?;
                        rejected += 1;
                    }
                    Err(e) => return Err(format!("{w}: {e}")),
                    Ok(_) => ensure(!antiparallel, || format!("{w}: antiparallel accepted"))?,
                }
                for k in 1..4 {
                    let turned = path.rotated(k).map_err(|e| e.to_string())?;
                    let other = link_cycle_degree(&turned, half, 1);
                    ensure(
                        other.as_ref().map(|x| x.degree) == base.as_ref().map(|x| x.degree),
                        || format!("{w}: rotation by {k} quarter turns changes the degree"),
                    )?;
                }
            }
        }
    }
    Ok(format!(
        "{loops} embedded loops up to 10: rotation ±1, reversal negates, degrees rotation-invariant, {rejected} antiparallel cases rejected"
    ))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("1 closure equals O2 up to length 8", criterion_1),
        ("2 every split of |w| <= 10 decomposes", criterion_2),
        ("3 derivations verify with |w|/2 PairInserts", criterion_3),
        ("4 chain complex suite", criterion_4),
        ("5 zero scan matches arc pairings", criterion_5),
        ("6 O3 experiments", criterion_6),
        ("7 geometry properties", criterion_7),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} ({secs:.2}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} ({secs:.2}s)");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
