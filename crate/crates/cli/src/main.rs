//! `symcoerce` command-line front end.

mod commands;
mod input;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::input::CliError;
use crate::report::{Report, SCHEMA};

const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser, Debug)]
#[command(name = "symcoerce", version, about = "Ellipticity and weak coercivity of constant-coefficient operator systems")]
pub struct Cli {
    /// Emit the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Read the operator system from a file (one operator per line).
    #[arg(long, global = true, value_name = "PATH")]
    pub file: Option<PathBuf>,
    /// Number of variables; inferred from the highest index when omitted.
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Seed for randomized searches; defaults to $SYMCOERCE_SEED, then 0x5eed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write side data, e.g. `--dump csv:out.csv`.
    #[arg(long, global = true, value_name = "csv:PATH")]
    pub dump: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Operators {
    /// Operators in D-notation, e.g. "(D1+i)*(D2+i)".
    pub operators: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Weak-coercivity classification in any dimension.
    Classify(Operators),
    /// Ellipticity, or quasiellipticity with `--weights`.
    Elliptic {
        #[command(flatten)]
        ops: Operators,
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<u32>>,
    },
    /// Exact two-variable decision.
    Coercive2d {
        #[command(flatten)]
        ops: Operators,
        /// Print the normal-form decomposition.
        #[arg(long)]
        normal_form: bool,
    },
    /// Resultant criterion in two variables.
    Resultant2d(Operators),
    /// Whether an l-quasielliptic system of N operators exists.
    Exists {
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u32>,
        #[arg(long = "N", value_name = "N")]
        n_ops: usize,
    },
    /// Build an l-quasielliptic system of N operators.
    Construct {
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u32>,
        #[arg(long = "N", value_name = "N")]
        n_ops: usize,
    },
    /// Principal-part subordination of Q to the system.
    Subordinate {
        #[command(flatten)]
        ops: Operators,
        #[arg(long = "Q", value_name = "EXPR")]
        q: String,
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<u32>>,
    },
    /// Build the S-system of an elliptic system.
    SSystem(Operators),
    /// Drop one S-system operator and test the plane subordination.
    Minimality {
        #[command(flatten)]
        ops: Operators,
        /// One-based pair `u,v`; the first pair when omitted.
        #[arg(long, value_delimiter = ',')]
        drop: Option<Vec<usize>>,
    },
    /// Grid certificate for multiplier conditions.
    MultiplierCheck {
        #[command(flatten)]
        ops: Operators,
        #[arg(long)]
        delta: Option<String>,
        /// Check `P / DEN` for the single input operator `P`.
        #[arg(long, value_name = "EXPR")]
        denominator: Option<String>,
        /// Cutoff radius for `--denominator`.
        #[arg(long, default_value = "1")]
        cutoff: String,
        /// Multi-index of the S-system family symbol (needs `--j`, `--v`).
        #[arg(long, value_delimiter = ',')]
        alpha: Option<Vec<u32>>,
        #[arg(long, default_value_t = 1)]
        j: usize,
        #[arg(long, default_value_t = 2)]
        v: usize,
        /// Multi-index of the elliptic family symbol.
        #[arg(long, value_delimiter = ',')]
        gamma: Option<Vec<u32>>,
    },
    /// Growth of the test-function ratio along a zero direction.
    Witness {
        #[command(flatten)]
        ops: Operators,
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        direction: Vec<String>,
        #[arg(long, default_value_t = 10)]
        steps: u32,
    },
    /// Restrict to a coordinate subspace.
    Restrict {
        #[command(flatten)]
        ops: Operators,
        #[arg(long, value_delimiter = ',', required = true)]
        keep: Vec<usize>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::Elliptic { .. } => "elliptic",
            Command::Coercive2d { .. } => "coercive2d",
            Command::Resultant2d(_) => "resultant2d",
            Command::Exists { .. } => "exists",
            Command::Construct { .. } => "construct",
            Command::Subordinate { .. } => "subordinate",
            Command::SSystem(_) => "s-system",
            Command::Minimality { .. } => "minimality",
            Command::MultiplierCheck { .. } => "multiplier-check",
            Command::Witness { .. } => "witness",
            Command::Restrict { .. } => "restrict",
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("SYMCOERCE_SEED") {
        Ok(v) => {
            let v = v.trim();
            let parsed = match v.strip_prefix("0x") {
                Some(hex) => u64::from_str_radix(hex, 16),
                None => v.parse(),
            };
            parsed.map_err(|_| CliError::Usage(format!("SYMCOERCE_SEED is not an integer: '{v}'")))
        }
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn run(cli: &Cli) -> Result<(Report, Vec<String>), CliError> {
    let seed = resolve_seed(cli.seed)?;
    let dump = cli.dump.as_deref().map(input::parse_dump).transpose()?;
    let ctx = commands::Context { file: cli.file.as_deref(), dim: cli.dim, seed, dump };
    let start = Instant::now();
    let (inputs, outcome, seeds) = commands::dispatch(&cli.command, &ctx)?;
    let timing_ms = start.elapsed().as_secs_f64() * 1e3;
    let report = Report {
        schema: SCHEMA,
        version: env!("CARGO_PKG_VERSION"),
        command: cli.command.name(),
        input: inputs,
        summary: outcome.summary,
        outcome: if outcome.conclusive { "verdict" } else { "inconclusive" },
        payload: outcome.payload,
        rules: outcome.rules,
        timing_ms,
        seeds,
    };
    Ok((report, outcome.details))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((report, details)) => {
            let mut out = std::io::stdout().lock();
            let _ = if cli.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))
            } else {
                writeln!(out, "{}", report.summary).and_then(|_| details.iter().try_for_each(|l| writeln!(out, "  {l}")))
            };
            ExitCode::from(if report.outcome == "verdict" { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}
