//! Batch front-end: instance generation, single runs with replayable
//! records, certificate suites, and parameter sweeps.
//!
//! Exit codes: 0 success, 1 certificate failure, 2 input error.

mod files;
mod record;
mod runs;
mod sweep;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use spansign::generators::{
    bipartite_minus_matching, minus_clique, pattern_factory, planted, random_balanced,
    random_density, PatternKind,
};
use spansign::graph::{instance_digest, pattern_digest};

use record::{combined_digest, RunRecord};
use sweep::{parse_list_f64, parse_list_usize, parse_range, run_sweep, SweepArgs, SweepKind};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Certificate,
}

impl CliError {
    fn from_io(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "spansign",
    version,
    about = "Plus-edge maximizing spanning structures in ±1-edge-labeled complete graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GenKind {
    /// Balanced host: complete bipartite plus-edges minus a matching.
    BipartiteMinusMatching,
    /// Balanced host: minus-edges form a clique, topped up to balance.
    MinusClique,
    /// Host with round(d * C(n,2)) random plus-edges.
    Random,
    /// Host with exactly C(n,2)/2 random plus-edges.
    Balanced,
    /// Host whose plus-edges are exactly a pattern file's edges.
    Planted,
    /// Pattern: perfect matching (last vertex isolated when n is odd).
    Matching,
    /// Pattern: spanning path.
    Path,
    /// Pattern: spanning cycle.
    Hamiltonian,
    /// Pattern: consecutive vertex triples.
    TriangleFactor,
    /// Pattern: disjoint copies of K_{delta+1}.
    CliqueFactor,
    /// Pattern: random with maximum degree at most delta.
    RandomPattern,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ExactTarget {
    Hamiltonian,
    Triangles,
}

#[derive(Subcommand)]
enum Command {
    /// Write an instance or pattern JSON file.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        d: Option<f64>,
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Pattern file to plant (kind = planted).
        #[arg(long)]
        pattern: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Embed a pattern and compare against the guaranteed lower bound.
    Embed {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grow a plus-edge path system, certify it, and assemble a cycle.
    Paths {
        #[arg(long = "in")]
        input: PathBuf,
        /// Start from the empty system instead of a greedy matching.
        #[arg(long)]
        empty_start: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the triangle-factor search and its cap-table certificate.
    Triangles {
        #[arg(long = "in")]
        input: PathBuf,
        /// Use a seed-shuffled start factor.
        #[arg(long)]
        shuffle_start: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact embedding spectrum over all permutations.
    Spectrum {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive optima over cycles or triangle factors.
    Exact {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        target: ExactTarget,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the closed-form bounds and constants.
    Bounds {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        d: Option<f64>,
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebalance the labeling and extract a high-discrepancy cycle.
    Discrepancy {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grid sweep; writes JSONL rows and a CSV summary.
    Sweep {
        #[arg(long, value_enum)]
        kind: SweepKind,
        /// Order grid: `value` or `start:stop:step`.
        #[arg(long)]
        n: String,
        /// Density list, e.g. `0.5,0.6`; omitted means exactly balanced.
        #[arg(long)]
        d: Option<String>,
        /// Degree list for embed sweeps, e.g. `1,2,3`.
        #[arg(long, default_value = "2")]
        delta: String,
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        /// Output prefix; writes `<out>.jsonl` and `<out>.csv`.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => {}
        Err(CliError::Certificate) => std::process::exit(1),
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    }
}

/// Prints without panicking when the consumer closes the pipe early.
fn print_json(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn emit(record: &RunRecord, out: Option<&PathBuf>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(record).expect("record serializes");
    print_json(&text);
    if let Some(path) = out {
        std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn require_n(n: Option<usize>) -> Result<usize, CliError> {
    n.ok_or_else(|| CliError::Input("--n is required for this kind".into()))
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen {
            kind,
            n,
            d,
            delta,
            seed,
            pattern,
            out,
        } => run_gen(kind, n, d, delta, seed, pattern.as_ref(), &out),
        Command::Embed {
            input,
            pattern,
            out,
        } => {
            let host = files::load_instance(&input)?;
            let pat = files::load_pattern(&pattern)?;
            let t0 = Instant::now();
            let (outputs, pass) = runs::run_embed(&host, &pat)?;
            let digest = combined_digest(&instance_digest(&host), Some(&pattern_digest(&pat)));
            let record = RunRecord::new("embed", digest, 0, t0.elapsed().as_millis(), outputs);
            emit(&record, out.as_ref())?;
            gate(pass)
        }
        Command::Paths {
            input,
            empty_start,
            out,
        } => {
            let host = files::load_instance(&input)?;
            let t0 = Instant::now();
            let (outputs, pass) = runs::run_paths(&host, empty_start)?;
            let record = RunRecord::new(
                "paths",
                instance_digest(&host),
                0,
                t0.elapsed().as_millis(),
                outputs,
            );
            emit(&record, out.as_ref())?;
            gate(pass)
        }
        Command::Triangles {
            input,
            shuffle_start,
            seed,
            out,
        } => {
            let host = files::load_instance(&input)?;
            let t0 = Instant::now();
            let shuffle = shuffle_start.then_some(seed);
            let (outputs, pass) = runs::run_triangles(&host, shuffle)?;
            let record = RunRecord::new(
                "triangles",
                instance_digest(&host),
                seed,
                t0.elapsed().as_millis(),
                outputs,
            );
            emit(&record, out.as_ref())?;
            gate(pass)
        }
        Command::Spectrum {
            input,
            pattern,
            cap,
            out,
        } => {
            let host = files::load_instance(&input)?;
            let pat = files::load_pattern(&pattern)?;
            let t0 = Instant::now();
            let (outputs, pass) = runs::run_spectrum(&host, &pat, cap)?;
            let digest = combined_digest(&instance_digest(&host), Some(&pattern_digest(&pat)));
            let record = RunRecord::new("spectrum", digest, 0, t0.elapsed().as_millis(), outputs);
            emit(&record, out.as_ref())?;
            gate(pass)
        }
        Command::Exact {
            input,
            target,
            cap,
            out,
        } => {
            let host = files::load_instance(&input)?;
            let t0 = Instant::now();
            let (outputs, pass) = match target {
                ExactTarget::Hamiltonian => runs::run_exact_hamiltonian(&host, cap)?,
                ExactTarget::Triangles => runs::run_exact_triangles(&host, cap)?,
            };
            let record = RunRecord::new(
                "exact",
                instance_digest(&host),
                0,
                t0.elapsed().as_millis(),
                outputs,
            );
            emit(&record, out.as_ref())?;
            gate(pass)
        }
        Command::Bounds {
            n,
            d,
            delta,
            m,
            out,
        } => {
            let t0 = Instant::now();
            let (outputs, pass) = runs::run_bounds(n, d, delta, m)?;
            let record = RunRecord::new(
                "bounds",
                "-".to_string(),
                0,
                t0.elapsed().as_millis(),
                outputs,
            );
            emit(&record, out.as_ref())?;
            gate(pass)
        }
        Command::Discrepancy { input, out } => {
            let host = files::load_instance(&input)?;
            let t0 = Instant::now();
            let (outputs, pass) = runs::run_discrepancy(&host)?;
            let record = RunRecord::new(
                "discrepancy",
                instance_digest(&host),
                0,
                t0.elapsed().as_millis(),
                outputs,
            );
            emit(&record, out.as_ref())?;
            gate(pass)
        }
        Command::Sweep {
            kind,
            n,
            d,
            delta,
            seeds,
            out,
        } => {
            let args = SweepArgs {
                kind,
                ns: parse_range(&n)?,
                ds: d.as_deref().map(parse_list_f64).transpose()?,
                deltas: parse_list_usize(&delta)?,
                seeds,
                out,
            };
            let t0 = Instant::now();
            let (summary, pass) = run_sweep(&args)?;
            let record = RunRecord::new(
                "sweep",
                "-".to_string(),
                0,
                t0.elapsed().as_millis(),
                summary,
            );
            print_json(&serde_json::to_string_pretty(&record).expect("record serializes"));
            gate(pass)
        }
    }
}

fn gate(pass: bool) -> Result<(), CliError> {
    if pass {
        Ok(())
    } else {
        Err(CliError::Certificate)
    }
}

fn run_gen(
    kind: GenKind,
    n: Option<usize>,
    d: Option<f64>,
    delta: Option<usize>,
    seed: u64,
    pattern_path: Option<&PathBuf>,
    out: &PathBuf,
) -> Result<(), CliError> {
    let input_err = |e: spansign::Error| CliError::Input(e.to_string());
    let summary: Value = match kind {
        GenKind::BipartiteMinusMatching => {
            let host = bipartite_minus_matching(require_n(n)?).map_err(input_err)?;
            files::save_instance(out, &host)?;
            gen_summary("instance", host.n(), host.plus_count(), out)
        }
        GenKind::MinusClique => {
            let host = minus_clique(require_n(n)?).map_err(input_err)?;
            files::save_instance(out, &host)?;
            gen_summary("instance", host.n(), host.plus_count(), out)
        }
        GenKind::Random => {
            let d = d.ok_or_else(|| CliError::Input("--d is required for kind random".into()))?;
            let host = random_density(require_n(n)?, d, seed).map_err(input_err)?;
            files::save_instance(out, &host)?;
            gen_summary("instance", host.n(), host.plus_count(), out)
        }
        GenKind::Balanced => {
            let host = random_balanced(require_n(n)?, seed).map_err(input_err)?;
            files::save_instance(out, &host)?;
            gen_summary("instance", host.n(), host.plus_count(), out)
        }
        GenKind::Planted => {
            let path = pattern_path
                .ok_or_else(|| CliError::Input("--pattern is required for kind planted".into()))?;
            let pattern = files::load_pattern(path)?;
            let host = planted(&pattern).map_err(input_err)?;
            files::save_instance(out, &host)?;
            gen_summary("instance", host.n(), host.plus_count(), out)
        }
        GenKind::Matching
        | GenKind::Path
        | GenKind::Hamiltonian
        | GenKind::TriangleFactor
        | GenKind::CliqueFactor
        | GenKind::RandomPattern => {
            let n = require_n(n)?;
            let delta = delta.unwrap_or(2);
            let pattern_kind = match kind {
                GenKind::Matching => PatternKind::Matching,
                GenKind::Path => PatternKind::Path,
                GenKind::Hamiltonian => PatternKind::Hamiltonian,
                GenKind::TriangleFactor => PatternKind::TriangleFactor,
                GenKind::CliqueFactor => PatternKind::CliqueFactor,
                _ => PatternKind::RandomBounded,
            };
            let pattern = pattern_factory(pattern_kind, n, delta, seed).map_err(input_err)?;
            files::save_pattern(out, &pattern)?;
            gen_summary("pattern", pattern.n(), pattern.edge_count(), out)
        }
    };
    print_json(&serde_json::to_string_pretty(&summary).expect("summary serializes"));
    Ok(())
}

fn gen_summary(what: &str, n: usize, edges: usize, out: &PathBuf) -> Value {
    serde_json::json!({
        "written": what,
        "n": n,
        "edges": edges,
        "path": out,
    })
}
