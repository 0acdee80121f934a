//! `mixforge`: membership, derivations, sweeps and figures for O₂ and O₃.
//!
//! Reports go to stdout as JSON lines; summaries and timings go to stderr.
//! Exit codes: 0 success, 1 negative answer, 2 usage or parse error,
//! 3 counterexample or failed check.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

pub const CAP_ENV: &str = "MIXFORGE_CAP";

#[derive(Debug, Parser)]
#[command(
    name = "mixforge",
    version,
    about = "Derivations of O2 in a 2-MCFG, with O3 experiments"
)]
pub struct Cli {
    /// Worker threads (0 = one per core, 1 = single-threaded)
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Enumeration cap on candidate strings; overrides MIXFORGE_CAP
    #[arg(long, global = true)]
    pub cap: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    General,
    Alternating,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide membership in O_n and print the displacement
    Member {
        #[arg(short = 'n', default_value_t = 2)]
        n: u8,
        word: String,
    },
    /// Derive a tuple and print the verified derivation tree
    Derive {
        #[arg(short = 'n', default_value_t = 2)]
        n: u8,
        /// Components; missing ones are empty
        words: Vec<String>,
        /// Where a counterexample is written
        #[arg(long, default_value = "counterexample.json")]
        out: PathBuf,
        /// Also write the top-level split witness of a pair here
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Derive every word up to a length and check each tree
    Sweep {
        #[arg(short = 'n', default_value_t = 2)]
        n: u8,
        #[arg(long)]
        max_len: usize,
        #[arg(long, value_enum, default_value_t = Mode::General)]
        mode: Mode,
        /// Visit at most this many words per length, chosen with --seed
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where failures are written, one JSON object per line
        #[arg(long, default_value = "counterexamples.jsonl")]
        out: PathBuf,
    },
    /// Compare the grammar's closure with O_n up to a length
    Enumerate {
        #[arg(short = 'n', default_value_t = 2)]
        n: u8,
        #[arg(long)]
        max_len: usize,
        /// Where a mismatch report is written
        #[arg(long, default_value = "enumerate-mismatch.json")]
        out: PathBuf,
    },
    /// Check the cell complex of cut pairs
    Complex {
        /// Write cells and boundary matrices as JSON
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Print the links of the four vertices
        #[arg(long)]
        links: bool,
    },
    /// Draw the lattice path of a planar word as SVG
    Render {
        word: String,
        #[arg(short = 'n', default_value_t = 2)]
        n: u8,
        #[arg(long)]
        out: PathBuf,
        /// Split witness JSON; colours its arcs and marks its cuts
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Extra markers, `label=index`
        #[arg(long = "marker", value_parser = parse_marker)]
        markers: Vec<(String, usize)>,
    },
}

fn parse_marker(s: &str) -> Result<(String, usize), String> {
    let (label, t) = s
        .split_once('=')
        .ok_or_else(|| format!("expected label=index, got {s:?}"))?;
    let t = t.parse().map_err(|e| format!("bad index in {s:?}: {e}"))?;
    Ok((label.to_string(), t))
}

/// Flag, then environment, then the library default.
fn resolve_cap(flag: Option<u64>) -> Result<u64, String> {
    if let Some(c) = flag {
        return Ok(c);
    }
    match std::env::var(CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|e| format!("{CAP_ENV}={v:?} is not a number: {e}")),
        Err(_) => Ok(mixforge::experiments::DEFAULT_CAP),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cap = match resolve_cap(cli.cap) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let code = pool.install(|| commands::run(cli.command, cap));
    ExitCode::from(code)
}
