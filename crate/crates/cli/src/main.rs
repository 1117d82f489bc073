//! `qmagic`: command-line frontend for the qudit magic toolkit.

mod commands;
mod exit;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qudit_magic::dense::{LogBase, DEFAULT_DENSE_LIMIT};
use qudit_magic::stabilizer::DEFAULT_ENUMERATION_BUDGET;

use exit::CliError;

#[derive(Parser, Debug)]
#[command(name = "qmagic", version, about = "Qudit stabilizer, magic and toric-code diagnostics")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Logarithm base for every reported entropy-like quantity.
    #[arg(long, global = true, default_value = "2", value_parser = parse_base)]
    pub base: LogBase,
    /// Largest Hilbert-space dimension handled densely.
    #[arg(long, global = true, default_value_t = DEFAULT_DENSE_LIMIT, value_parser = positive_usize)]
    pub dense_budget: usize,
    /// Largest number of stabilizer states or group elements enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_BUDGET, value_parser = positive_usize)]
    pub enumeration_budget: usize,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the covering family of maximal isotropic subgroups.
    Cover {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        /// Exhaustively check the cover; exits with status 1 if it fails.
        #[arg(long)]
        verify: bool,
        /// Tableau file for the family (default `cover-q<Q>-n<N>.tab`).
        #[arg(long)]
        tableau: Option<PathBuf>,
    },
    /// Magic monotones of a pure state.
    Magic {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "lf,srel,smax,lgr,lr")]
        measures: Vec<String>,
    },
    /// Per-patch distance certificates and the product LF bound.
    Certify {
        /// JSON list of state files.
        #[arg(long)]
        patches: PathBuf,
        #[arg(long, value_enum, default_value_t = Target::Sp)]
        target: Target,
        #[arg(long, default_value_t = 200)]
        hull_iterations: usize,
    },
    /// Z_q toric-code braiding and annulus diagnostics.
    #[command(subcommand)]
    Toric(ToricCommand),
    /// Mutual-information witnesses and finite-size LF assembly.
    #[command(subcommand)]
    Witness(WitnessCommand),
    /// Pauli that multiplies each tableau generator by the requested root of unity.
    Rephase {
        #[arg(long)]
        tableau: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<u64>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Target {
    #[value(name = "SP", alias = "sp")]
    Sp,
    #[value(name = "S", alias = "s")]
    S,
}

#[derive(Subcommand, Debug)]
pub enum ToricCommand {
    /// Braiding phase table and quantization verdict.
    Smatrix {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        lx: usize,
        #[arg(long)]
        ly: usize,
        /// Type pairs as `a,b:c,d`; all pairs when omitted.
        #[arg(long, num_args = 1..)]
        pairs: Vec<String>,
    },
    /// Extreme points of the information convex set of the standard annulus.
    Annulus {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 4)]
        lx: usize,
        #[arg(long, default_value_t = 4)]
        ly: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum WitnessCommand {
    /// Forbidden mutual-information window test.
    Mi {
        #[arg(long)]
        state: PathBuf,
        #[arg(long = "regionA", alias = "region-a", value_delimiter = ',', required = true)]
        region_a: Vec<usize>,
        #[arg(long = "regionB", alias = "region-b", value_delimiter = ',', required = true)]
        region_b: Vec<usize>,
        #[arg(long, default_value_t = qudit_magic::witness::DEFAULT_WINDOW_TOLERANCE)]
        tol: f64,
    },
    /// Light-cone sandwich under a seeded random brickwork circuit.
    Stability {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long = "regionA", alias = "region-a", value_delimiter = ',', required = true)]
        region_a: Vec<usize>,
        #[arg(long = "regionB", alias = "region-b", value_delimiter = ',', required = true)]
        region_b: Vec<usize>,
    },
    /// Compose patch certificates with a decay profile into an LF lower bound.
    Assemble {
        #[arg(long)]
        profile: PathBuf,
        /// Output of `certify`, or a JSON list of `{epsilon, dimension}`.
        #[arg(long)]
        certs: PathBuf,
    },
}

fn parse_base(s: &str) -> Result<LogBase, String> {
    LogBase::parse(s).ok_or_else(|| format!("base must be 2, e or 10, got {s:?}"))
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("budget must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { 0 });
        }
    };
    let outcome = std::panic::catch_unwind(|| commands::run(&cli))
        .unwrap_or_else(|_| Err(CliError::internal("unexpected panic")));
    match outcome {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("qmagic: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
