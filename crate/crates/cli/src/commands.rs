use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context};
use mixforge::chain_complex::{build_complex, link_graph};
use mixforge::experiments::{complex_checks, enumerate, sweep, ExperimentError, Sample, SweepMode};
use mixforge::geometry::{render_svg, to_path, Annotations};
use mixforge::grammar::{verify_tree, Grammar, GrammarError};
use mixforge::splitter::{derive, derive3, find_split, Derivation3, SplitError};
use mixforge::words::{Word, WordError};
use serde::Serialize;
use serde_json::json;

use crate::{Command, Mode};

const OK: u8 = 0;
const NEGATIVE: u8 = 1;
const USAGE: u8 = 2;
const VIOLATION: u8 = 3;

fn emit<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string(value).expect("reports serialize")
    );
}

fn usage(e: impl std::fmt::Display) -> u8 {
    eprintln!("error: {e}");
    USAGE
}

fn write_artifact(path: &Path, lines: &[String]) -> u8 {
    let mut text = lines.join("\n");
    text.push('\n');
    match fs::write(path, text) {
        Ok(()) => {
            eprintln!("counterexample written to {}", path.display());
            VIOLATION
        }
        Err(e) => {
            eprintln!("error: could not write {}: {e}", path.display());
            VIOLATION
        }
    }
}

pub fn run(command: Command, cap: u64) -> u8 {
    match command {
        Command::Member { n, word } => member(n, &word),
        Command::Derive {
            n,
            words,
            out,
            witness,
        } => derive_cmd(n, &words, &out, witness.as_deref()),
        Command::Sweep {
            n,
            max_len,
            mode,
            sample,
            seed,
            out,
        } => {
            let mode = match mode {
                Mode::General => SweepMode::General,
                Mode::Alternating => SweepMode::Alternating,
            };
            let sample = sample.map(|per_length| Sample { per_length, seed });
            sweep_cmd(n, max_len, mode, cap, sample, &out)
        }
        Command::Enumerate { n, max_len, out } => enumerate_cmd(n, max_len, cap, &out),
        Command::Complex { dump, links } => complex_cmd(dump.as_deref(), links),
        Command::Render {
            word,
            n,
            out,
            witness,
            markers,
        } => match render(&word, n, &out, witness.as_deref(), markers) {
            Ok(()) => OK,
            Err(e) => usage(format!("{e:#}")),
        },
    }
}

fn member(n: u8, text: &str) -> u8 {
    let w = match Word::parse(text, n) {
        Ok(w) => w,
        Err(e) => return usage(e),
    };
    let member = w.is_balanced();
    emit(&json!({
        "command": "member",
        "n": n,
        "word": w,
        "member": member,
        "displacement": w.displacement(),
    }));
    eprintln!(
        "{} {} O{n}, displacement {}",
        if text.is_empty() { "ε" } else { text },
        if member { "is in" } else { "is not in" },
        w.displacement()
    );
    if member {
        OK
    } else {
        NEGATIVE
    }
}

fn parse_tuple(n: u8, texts: &[String]) -> Result<Vec<Word>, String> {
    let k = n as usize;
    if texts.len() > k {
        return Err(format!("at most {k} components in dimension {n}"));
    }
    let mut words = texts
        .iter()
        .map(|t| Word::parse(t, n))
        .collect::<Result<Vec<_>, WordError>>()
        .map_err(|e| e.to_string())?;
    words.resize(k, Word::empty(n));
    Ok(words)
}

fn derive_cmd(n: u8, texts: &[String], out: &Path, witness: Option<&Path>) -> u8 {
    let words = match parse_tuple(n, texts) {
        Ok(w) if (2..=3).contains(&n) => w,
        Ok(_) => return usage(format!("derivations run in dimension 2 or 3, not {n}")),
        Err(e) => return usage(e),
    };
    let start = Instant::now();
    let result = if n == 2 {
        derive(&words[0], &words[1]).map(Derivation3::Tree)
    } else {
        derive3(&words[0], &words[1], &words[2])
    };
    let tree = match result {
        Ok(Derivation3::Tree(t)) => t,
        Ok(Derivation3::Counterexample(c)) => {
            let line = json!({"command": "derive", "counterexample": c}).to_string();
            println!("{line}");
            return write_artifact(out, &[line]);
        }
        Err(SplitError::Incompleteness { words, searched }) => {
            let line = json!({
                "command": "derive",
                "counterexample": {"words": words, "searched": searched},
            })
            .to_string();
            println!("{line}");
            return write_artifact(out, &[line]);
        }
        Err(e @ SplitError::NotInOn { .. }) => {
            eprintln!("{e}");
            return NEGATIVE;
        }
        Err(e) => return usage(e),
    };
    let g = Grammar::for_dimension(n).expect("dimension checked above");
    if let Err(e) = verify_tree(&tree, &g) {
        let line =
            json!({"command": "derive", "rejected": e.to_string(), "words": words}).to_string();
        println!("{line}");
        return write_artifact(out, &[line]);
    }
    if let Some(path) = witness {
        if n != 2 {
            return usage("witnesses are written for pairs only");
        }
        let text = match find_split(&words[0], &words[1]) {
            Ok(Some(w)) => w.to_json(),
            Ok(None) => return usage("a pair this short has no split witness"),
            Err(e) => return usage(e),
        };
        if let Err(e) = fs::write(path, text + "\n") {
            return usage(format!("could not write {}: {e}", path.display()));
        }
    }
    println!("{}", tree.to_json());
    eprintln!(
        "verified derivation: {} nodes, depth {}, {:.3}s",
        tree.size(),
        tree.depth(),
        start.elapsed().as_secs_f64()
    );
    OK
}

fn experiment_error(e: ExperimentError) -> u8 {
    match e {
        ExperimentError::Word(WordError::ResourceBound { .. })
        | ExperimentError::Grammar(GrammarError::ResourceBound { .. }) => {
            usage(format!("{e} (raise it with --cap or MIXFORGE_CAP)"))
        }
        ExperimentError::Split(_) => {
            eprintln!("error: {e}");
            VIOLATION
        }
        _ => usage(e),
    }
}

fn sweep_cmd(
    n: u8,
    max_len: usize,
    mode: SweepMode,
    cap: u64,
    sample: Option<Sample>,
    out: &Path,
) -> u8 {
    let start = Instant::now();
    let report = match sweep(n, max_len, mode, cap, sample) {
        Ok(r) => r,
        Err(e) => return experiment_error(e),
    };
    emit(&report);
    eprintln!(
        "sweep n={n} max-len={max_len}: {} words, {} tuples, {} failures, {:.2}s",
        report.words,
        report.tuples,
        report.failures.len(),
        start.elapsed().as_secs_f64()
    );
    if let Some(tallies) = &report.alternating {
        for t in tallies {
            eprintln!(
                "  length {:>2}: {:>6} words, {:>6} with possibly empty pieces, {:>6} with nonempty pieces",
                t.length, t.words, t.allow_empty, t.nonempty_pieces
            );
        }
    }
    if report.passed() {
        return OK;
    }
    let lines: Vec<String> = report
        .failures
        .iter()
        .map(|f| serde_json::to_string(f).expect("failures serialize"))
        .collect();
    write_artifact(out, &lines)
}

fn enumerate_cmd(n: u8, max_len: usize, cap: u64, out: &Path) -> u8 {
    let start = Instant::now();
    let report = match enumerate(n, max_len, cap) {
        Ok(r) => r,
        Err(e) => return experiment_error(e),
    };
    emit(&report);
    for l in &report.by_length {
        eprintln!(
            "  length {:>2}: closure {:>6}, O{n} {:>6}",
            l.length, l.closure, l.language
        );
    }
    eprintln!(
        "closure {} O{n}: {}, {:.2}s",
        if report.equal { "=" } else { "vs" },
        if report.equal {
            "equal".to_string()
        } else {
            format!(
                "closure ⊆ O{n}: {}, O{n} ⊆ closure: {}",
                report.closure_in_language, report.language_in_closure
            )
        },
        start.elapsed().as_secs_f64()
    );
    if report.equal {
        OK
    } else if report.closure_in_language && n == 3 {
        // a proper subset answers the open question negatively
        NEGATIVE
    } else {
        write_artifact(
            out,
            &[serde_json::to_string(&report).expect("report serializes")],
        )
    }
}

fn complex_cmd(dump: Option<&Path>, links: bool) -> u8 {
    let report = complex_checks();
    for c in &report.checks {
        emit(c);
        eprintln!(
            "{} {}: {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.check,
            c.detail
        );
    }
    emit(&json!({"homology": report.homology}));
    if links {
        let c = build_complex();
        for l in &report.links {
            emit(&link_graph(&c, &l.vertex).expect("links built for the report"));
            eprintln!(
                "Lk({}): {} vertices / {} edges",
                l.vertex, l.vertices, l.edges
            );
        }
    }
    if let Some(path) = dump {
        if let Err(e) = fs::write(path, build_complex().dump_json()) {
            return usage(format!("could not write {}: {e}", path.display()));
        }
    }
    if report.passed() {
        OK
    } else {
        VIOLATION
    }
}

/// Markers and arc cuts read from a split witness: `p`, `q` (or `q1`, `q2`) and
/// `r`, `s` for the free cuts.
fn witness_annotations(text: &str, word: &Word) -> anyhow::Result<Annotations> {
    let v: serde_json::Value = serde_json::from_str(text).context("witness is not JSON")?;
    let ints = |key: &str| -> anyhow::Result<Vec<usize>> {
        serde_json::from_value(v.get(key).cloned().unwrap_or_default())
            .with_context(|| format!("witness field {key:?}"))
    };
    let arcs: Vec<String> = serde_json::from_value(v.get("arcs").cloned().unwrap_or_default())
        .context("witness field \"arcs\"")?;
    if arcs.concat() != word.to_string() {
        bail!("witness arcs spell {:?}, not {word}", arcs.concat());
    }
    let boundaries = ints("boundaries")?;
    let mut ann = Annotations::default().marker("p", 0);
    let qs = ints("q")?;
    for (i, &q) in qs.iter().enumerate() {
        let label = if qs.len() == 1 {
            "q".to_string()
        } else {
            format!("q{}", i + 1)
        };
        ann = ann.marker(&label, q);
    }
    for (label, &c) in ["r", "s", "t"].iter().zip(&ints("cuts")?) {
        ann = ann.marker(label, c);
    }
    ann.arc_cuts = boundaries
        .get(1..boundaries.len().saturating_sub(1))
        .unwrap_or_default()
        .to_vec();
    Ok(ann)
}

fn render(
    text: &str,
    n: u8,
    out: &Path,
    witness: Option<&Path>,
    markers: Vec<(String, usize)>,
) -> anyhow::Result<()> {
    let w = Word::parse(text, n)?;
    let mut ann = match witness {
        Some(p) => {
            let body = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            witness_annotations(&body, &w)?
        }
        None => Annotations::default(),
    };
    for (label, t) in markers {
        ann = ann.marker(&label, t);
    }
    let svg = render_svg(&to_path(&w), &ann)?;
    let mut f = fs::File::create(out).with_context(|| format!("creating {}", out.display()))?;
    f.write_all(svg.as_bytes())?;
    emit(&json!({"command": "render", "word": w, "out": out.display().to_string()}));
    Ok(())
}
