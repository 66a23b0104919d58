//! Command-line front end: static counting, stream replay with engine
//! selection, workload generation, and cross-engine verification.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.

mod replay;

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use dygraphlet_core::counter::{count_exact, GraphletCounts, BRUTE_GUARD};
use dygraphlet_core::engine::EngineKind;
use dygraphlet_core::harness::{run_closed_form_suite, run_equivalence_trial, BaseKind, TrialSpec};
use dygraphlet_core::stream::{
    gen_dynamic_stream, parse_edge_list, read_update_stream, write_update_stream, EdgeUpdate,
    IdMap, UpdateOp,
};
use dygraphlet_core::Graph;

#[derive(Parser)]
#[command(
    name = "dygraphlet",
    version,
    about = "Exact dynamic counting of 3- and 4-node induced graphlets over edge streams"
)]
struct Cli {
    /// Worker threads for counting; 0 uses all cores. Thread count never
    /// affects count output.
    #[arg(long, global = true, env = "DYGRAPHLET_THREADS", default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Igc,
    Fdgc,
    Pgdn,
}

impl From<Mode> for EngineKind {
    fn from(mode: Mode) -> Self {
        match mode {
            Mode::Igc => EngineKind::Igc,
            Mode::Fdgc => EngineKind::Fdgc,
            Mode::Pgdn => EngineKind::Pgdn,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Count the graphlets of a static edge-list graph
    Count {
        /// Edge-list file: whitespace-separated "u v" lines, '#' comments
        input: PathBuf,
    },

    /// Replay an edge stream in batches, maintaining the census
    Run {
        /// Edge-list file (insert-only) or update-stream file (`+/- u v` lines)
        input: PathBuf,

        /// Update strategy
        #[arg(long, value_enum, env = "DYGRAPHLET_MODE")]
        mode: Mode,

        /// Events per batch
        #[arg(long, env = "DYGRAPHLET_BATCH_SIZE", default_value_t = 10)]
        batch_size: usize,

        /// Turn an edge-list input into a fully dynamic stream on the fly
        #[arg(long, env = "DYGRAPHLET_DYNAMIC")]
        dynamic: bool,

        /// Add probability for --dynamic
        #[arg(long, env = "DYGRAPHLET_P", default_value_t = 0.7)]
        p: f64,

        /// Stream-generation seed for --dynamic
        #[arg(long, env = "DYGRAPHLET_SEED", default_value_t = 42)]
        seed: u64,

        /// Write the per-batch CSV report here
        #[arg(long, env = "DYGRAPHLET_OUT")]
        out: Option<PathBuf>,

        /// Locality ball depth for the local engines
        #[arg(long, env = "DYGRAPHLET_DEPTH", default_value_t = 3)]
        depth: u32,
    },

    /// Generate a fully dynamic update stream from an edge list
    Gen {
        /// Base edge-list file
        #[arg(long, env = "DYGRAPHLET_INPUT")]
        input: PathBuf,

        /// Probability of a base edge becoming an add event
        #[arg(long, env = "DYGRAPHLET_P", default_value_t = 0.7)]
        p: f64,

        #[arg(long, env = "DYGRAPHLET_SEED", default_value_t = 42)]
        seed: u64,

        /// Output update-stream file
        #[arg(long, env = "DYGRAPHLET_OUT")]
        out: PathBuf,
    },

    /// Cross-validate the engines on seeded random workloads
    Verify {
        /// Vertex count of the generated base graphs
        #[arg(long, env = "DYGRAPHLET_N", default_value_t = 24)]
        n: usize,

        /// Batches per trial
        #[arg(long, env = "DYGRAPHLET_BATCHES", default_value_t = 30)]
        batches: usize,

        #[arg(long, env = "DYGRAPHLET_BATCH_SIZE", default_value_t = 5)]
        batch_size: usize,

        /// Add probability for the mixed-stream trials
        #[arg(long, env = "DYGRAPHLET_P", default_value_t = 0.7)]
        p: f64,

        #[arg(long, env = "DYGRAPHLET_SEED", default_value_t = 42)]
        seed: u64,

        /// Self-test: corrupt one engine's census so the harness must report
        /// a divergence and exit nonzero
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // Ignore the error if a global pool already exists.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Count { input } => cmd_count(&input),
        Command::Run {
            input,
            mode,
            batch_size,
            dynamic,
            p,
            seed,
            out,
            depth,
        } => cmd_run(&input, mode, batch_size, dynamic, p, seed, out.as_deref(), depth),
        Command::Gen {
            input,
            p,
            seed,
            out,
        } => cmd_gen(&input, p, seed, &out),
        Command::Verify {
            n,
            batches,
            batch_size,
            p,
            seed,
            inject_fault,
        } => cmd_verify(n, batches, batch_size, p, seed, inject_fault),
    }
}

fn print_counts(counts: &GraphletCounts) {
    for (name, value) in GraphletCounts::FIELD_NAMES.iter().zip(counts.as_array()) {
        println!("{name:<10} {value}");
    }
}

fn cmd_count(input: &Path) -> Result<ExitCode> {
    let (edges, meta) = parse_edge_list(input)?;
    if meta.self_loops_dropped > 0 {
        eprintln!("warning: dropped {} self-loop line(s)", meta.self_loops_dropped);
    }
    let mut ids = IdMap::new();
    let mut g = Graph::new();
    for &(u, v) in &edges {
        g.add_edge(ids.intern(u), ids.intern(v))?;
    }
    let started = Instant::now();
    let counts = count_exact(&g)?;
    let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    print_counts(&counts);
    println!(
        "vertices={} edges={} elapsed_ms={elapsed_ms:.3}",
        meta.vertex_count, meta.edge_count
    );
    Ok(ExitCode::SUCCESS)
}

/// True when the first meaningful line of the file is an update-stream event.
fn is_update_stream(path: &Path) -> Result<bool> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    for line in BufReader::new(file).lines() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        return Ok(trimmed.starts_with('+') || trimmed.starts_with('-'));
    }
    Ok(false)
}

fn load_events(path: &Path, dynamic: bool, p: f64, seed: u64) -> Result<Vec<EdgeUpdate>> {
    if is_update_stream(path)? {
        if dynamic {
            bail!("--dynamic needs an edge-list input, but {} is already an update stream", path.display());
        }
        return Ok(read_update_stream(path)?);
    }
    let (edges, meta) = parse_edge_list(path)?;
    if meta.self_loops_dropped > 0 {
        eprintln!("warning: dropped {} self-loop line(s)", meta.self_loops_dropped);
    }
    if dynamic {
        Ok(gen_dynamic_stream(&edges, p, seed)?)
    } else {
        edges
            .iter()
            .map(|&(u, v)| Ok(EdgeUpdate::add(u, v)?))
            .collect()
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_run(
    input: &Path,
    mode: Mode,
    batch_size: usize,
    dynamic: bool,
    p: f64,
    seed: u64,
    out: Option<&Path>,
    depth: u32,
) -> Result<ExitCode> {
    let events = load_events(input, dynamic, p, seed)?;
    if matches!(mode, Mode::Igc) {
        if let Some(del) = events.iter().find(|e| e.op == UpdateOp::Delete) {
            bail!(
                "igc mode requires an insert-only stream, found delete of ({}, {})",
                del.u,
                del.v
            );
        }
    }

    let report = replay::replay(mode.into(), &events, batch_size, depth)?;
    if let Some(path) = out {
        replay::write_csv(path, &report.records)?;
        eprintln!("wrote {} batch records to {}", report.records.len(), path.display());
    }
    print_counts(&report.final_counts);
    println!(
        "batches={} events={} total_engine_ms={:.3}",
        report.records.len(),
        report.events,
        report.total_engine_ms
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen(input: &Path, p: f64, seed: u64, out: &Path) -> Result<ExitCode> {
    let (edges, meta) = parse_edge_list(input)?;
    let events = gen_dynamic_stream(&edges, p, seed)?;
    write_update_stream(out, &events)?;
    let adds = events.iter().filter(|e| e.op == UpdateOp::Add).count();
    println!(
        "base_edges={} events={} adds={} dels={} p={p} seed={seed} out={}",
        meta.edge_count,
        events.len(),
        adds,
        events.len() - adds,
        out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    n: usize,
    batches: usize,
    batch_size: usize,
    p: f64,
    seed: u64,
    inject_fault: bool,
) -> Result<ExitCode> {
    if n > BRUTE_GUARD {
        println!("notice: n={n} is above the brute-force guard {BRUTE_GUARD}; engines are cross-checked without brute-force comparison");
    }
    let base_edges = batch_size * batches * 13 / 10 + 20;
    let mixed = TrialSpec {
        n,
        base_edges,
        batch_size,
        batch_count: batches,
        p,
        seed,
        engines: vec![EngineKind::Fdgc, EngineKind::Pgdn],
        locality_depth: 3,
        brute_guard: BRUTE_GUARD,
        base: BaseKind::ErdosRenyi,
        inject_fault,
    };
    let insert_only = TrialSpec {
        p: 1.0,
        engines: vec![EngineKind::Igc, EngineKind::Fdgc, EngineKind::Pgdn],
        seed: seed.wrapping_add(1),
        ..mixed.clone()
    };
    let single_edge = TrialSpec {
        batch_size: 1,
        seed: seed.wrapping_add(2),
        ..mixed.clone()
    };

    let mut all_passed = true;
    for spec in [mixed, insert_only, single_edge] {
        let outcome = run_equivalence_trial(&spec)?;
        println!("trial {}", outcome.summary);
        all_passed &= outcome.passed;
    }

    let suite = run_closed_form_suite()?;
    println!(
        "closed-forms checks={} result={}",
        suite.checks,
        if suite.passed { "PASS" } else { "FAIL" }
    );
    all_passed &= suite.passed;

    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
