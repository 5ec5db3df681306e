mod bench;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use cubic_tsp::generators::{generate, CostPolicy, GeneratorKind, GeneratorSpec};
use cubic_tsp::graph::{load_graph_scaled, to_graph_file, WeightedMultigraph};
use cubic_tsp::oracle::held_karp;
use cubic_tsp::recurrence::{pow2_decimal, recurrence_rows, verify_constraints, write_recurrence_csv, BoundParams};
use cubic_tsp::search::{solve, write_trace, SearchConfig, SearchError};

use bench::{BenchKind, SizeRange};

#[derive(Parser)]
#[command(name = "cubic-tsp", version, about = "Exact TSP on cubic graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum-cost tour of a graph file.
    Solve {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Smallest edge id instead of a seeded choice when F is empty.
        #[arg(long)]
        deterministic: bool,
        /// Write one CSV row per branch.
        #[arg(long, value_name = "CSV")]
        trace: Option<PathBuf>,
        /// Fractional digits allowed in costs; costs are multiplied by 10^K.
        #[arg(long, value_name = "K", default_value_t = 0)]
        scale: u32,
        /// Check the path invariants at every leaf.
        #[arg(long)]
        check: bool,
        /// Skip subtrees whose forced cost reaches the best tour so far.
        #[arg(long)]
        prune: bool,
    },
    /// Held-Karp optimum (at most 20 vertices).
    Oracle {
        file: PathBuf,
        #[arg(long, value_name = "K", default_value_t = 0)]
        scale: u32,
    },
    /// Write a generated graph file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Branch counts over a family of instances, as CSV.
    Bench {
        #[arg(long, value_enum)]
        kind: BenchKind,
        /// `a..b[:step]`, inclusive; vertex counts, or girths for cages.
        #[arg(long)]
        sizes: SizeRange,
        #[arg(long, default_value_t = 1)]
        reps: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "CSV")]
        out: Option<PathBuf>,
    },
    /// T(n), log2 T(n) and the bound exponent for n = 1..=N, as CSV.
    Recurrence {
        #[arg(long = "max-n", value_name = "N")]
        max_n: usize,
        #[arg(long, value_name = "CSV")]
        out: Option<PathBuf>,
    },
    /// Check the bound constants against their constraint system.
    VerifyBound,
}

#[derive(Subcommand)]
enum GenKind {
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        costs: CostArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Cage {
        #[arg(long)]
        girth: usize,
        #[command(flatten)]
        costs: CostArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Hc {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        costs: CostArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct CostArgs {
    /// Uniform integer costs in `lo..=hi` instead of unit costs.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    uniform: Option<Vec<u64>>,
    #[arg(long = "cost-seed", default_value_t = 0)]
    cost_seed: u64,
}

impl CostArgs {
    fn policy(&self) -> CostPolicy {
        match self.uniform.as_deref() {
            Some(&[lo, hi]) => CostPolicy::Uniform { lo, hi, seed: self.cost_seed },
            _ => CostPolicy::Unit,
        }
    }
}

fn read_graph(path: &Path, scale: u32) -> Result<WeightedMultigraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    load_graph_scaled(&text, scale).with_context(|| format!("parsing {}", path.display()))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn cost_line(cost: Option<u64>) -> String {
    cost.map_or("no tour".to_string(), |c| format!("cost {c}"))
}

struct SolveArgs {
    file: PathBuf,
    seed: u64,
    deterministic: bool,
    trace: Option<PathBuf>,
    scale: u32,
    check: bool,
    prune: bool,
}

fn run_solve(args: SolveArgs) -> Result<ExitCode> {
    let g = read_graph(&args.file, args.scale)?;
    let config = SearchConfig {
        seed: args.seed,
        deterministic: args.deterministic,
        trace: args.trace.is_some(),
        check_invariants: args.check,
        prune: args.prune,
        ..Default::default()
    };
    match solve(&g, &config) {
        Ok(r) => {
            if let Some(path) = &args.trace {
                write_trace(&r.trace, output(Some(path))?)?;
            }
            let s = &r.stats;
            eprintln!("leaves {}  branches {} (A {}, B {}, D {})", s.leaves, s.branches, s.a_total, s.b_total, s.d_total);
            println!("{}", cost_line(r.outcome.cost()));
            Ok(ExitCode::SUCCESS)
        }
        Err(SearchError::InvariantViolation { depth, a, b, n, trace }) => {
            let path = args.trace.unwrap_or_else(|| std::env::temp_dir().join(format!("cubic-tsp-violation-{}.csv", std::process::id())));
            write_trace(&trace, output(Some(&path))?)?;
            eprintln!("path invariant violated at depth {depth}: a = {a}, b = {b}, n = {n}");
            eprintln!("path trace written to {}", path.display());
            Ok(ExitCode::from(3))
        }
        Err(e) => Err(e.into()),
    }
}

fn run_verify_bound() -> ExitCode {
    let p = BoundParams::paper();
    println!("alpha = {}", p.alpha);
    println!("beta = {}", p.beta);
    println!("gamma = {}", p.gamma);
    let report = verify_constraints(&p);
    for check in &report.checks {
        println!("{} {}", if check.pass { "ok  " } else { "FAIL" }, check.label);
    }
    let objective = p.objective();
    println!("objective = {objective}");
    println!("2^({objective}) = {}…", pow2_decimal(&objective, 5));
    if report.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve { file, seed, deterministic, trace, scale, check, prune } => {
            return run_solve(SolveArgs { file, seed, deterministic, trace, scale, check, prune });
        }
        Command::Oracle { file, scale } => {
            let g = read_graph(&file, scale)?;
            println!("{}", cost_line(held_karp(&g)?));
        }
        Command::Gen { kind } => {
            let (kind, costs, out) = match kind {
                GenKind::Random { n, seed, costs, out } => (GeneratorKind::RandomCubic { n, seed }, costs, out),
                GenKind::Cage { girth, costs, out } => (GeneratorKind::Cage { girth }, costs, out),
                GenKind::Hc { n, costs, out } => (GeneratorKind::HcRich { n }, costs, out),
            };
            let g = generate(&GeneratorSpec { kind, costs: costs.policy() })?;
            output(out.as_deref())?.write_all(to_graph_file(&g).as_bytes())?;
        }
        Command::Bench { kind, sizes, reps, seed, out } => {
            let records = bench::run(kind, &sizes, reps, seed)?;
            bench::write_csv(&records, output(out.as_deref())?)?;
        }
        Command::Recurrence { max_n, out } => {
            let rows = recurrence_rows(max_n, &BoundParams::paper())?;
            write_recurrence_csv(&rows, output(out.as_deref())?)?;
        }
        Command::VerifyBound => return Ok(run_verify_bound()),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
