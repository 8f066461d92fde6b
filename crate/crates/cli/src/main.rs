//! Batch verification campaigns over carry statistics of binary addition.
//!
//! Subcommands sweep the Tu-Deng statistic level by level, the Cusick
//! densities over t, the cross-validation suites tying every fast path to
//! its enumeration oracle, the asymptotic-expansion comparisons, and raw
//! generating-function coefficient dumps. Reports are CSV or JSON,
//! byte-deterministic for fixed flags; process exit status is 0 when every
//! check passes, 1 when a mathematical violation or mismatch was found, and
//! 2 on operational errors.

mod commands;
mod report;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

use carrystats::budget::MemoryBudget;
use report::ReportSink;

pub const MEMORY_BUDGET_ENV: &str = "CARRYSTATS_MEMORY_BUDGET";

#[derive(Debug, Parser)]
#[command(
    name = "carrystats",
    version,
    about = "Exact verification campaigns for carry statistics of binary addition"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Csv)]
    format: ReportFormat,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Memory budget for level tables, e.g. "2GiB" or a byte count
    /// (overrides the CARRYSTATS_MEMORY_BUDGET environment variable).
    #[arg(long, global = true)]
    memory_budget: Option<String>,

    /// Worker threads for the parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Embed wall-clock timings in the report (breaks byte-for-byte
    /// determinism between runs; timings always go to stderr).
    #[arg(long, global = true)]
    include_timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exhaustively verify P_{t,k} <= 1/2 for every t at each level k.
    VerifyTudeng {
        #[arg(long, default_value_t = 2)]
        k_min: u32,
        #[arg(long)]
        k_max: u32,
        /// Window half-width: counts t with P in (1/2 - epsilon, 1/2).
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Also dump per-instance rows for t up to this bound.
        #[arg(long)]
        dump_per_t: Option<u64>,
    },
    /// Verify c-tilde_t <= 1/2 < c_t for every t below t-max.
    Cusick {
        #[arg(long)]
        t_max: u64,
        /// Number of leading per-t sample rows in the report.
        #[arg(long, default_value_t = 8)]
        dump_per_t: u64,
    },
    /// Run every fast path against its enumeration oracle and report
    /// pass/fail per suite.
    Crosscheck {
        /// Cap for the brute-force legs (at most 12).
        #[arg(long, default_value_t = 12)]
        k_max: u32,
    },
    /// Compare exact normalized moments against their asymptotic expansions.
    Asymptotics {
        #[arg(long, default_value_t = 20)]
        k_max: u32,
    },
    /// Dump generating-function coefficients.
    Genfun {
        #[arg(long, value_enum)]
        gf: GfKind,
        #[arg(long, default_value_t = 8)]
        k_max: u32,
        /// x-degree budget for the trivariate expansion.
        #[arg(long, default_value_t = 10)]
        series_budget: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GfKind {
    /// Column sums of the direct histogram family.
    FirstMoment,
    /// Column sums of the complemented family.
    FirstMomentComplemented,
    /// Joint tail sums.
    TailSum,
    /// Trivariate second moments of the joint tails.
    SecondMoment,
    /// Diagonal sequence (4^k - C(2k,k))/2.
    Diagonal,
}

/// Shared context threaded through all subcommands.
pub struct Context {
    pub format: ReportFormat,
    pub budget: MemoryBudget,
    pub include_timings: bool,
}

/// What the completed campaign found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    AllGood,
    ViolationFound,
}

fn parse_byte_size(text: &str) -> anyhow::Result<u64> {
    let trimmed = text.trim();
    let split = trimmed
        .find(|c: char| !c.is_ascii_digit())
        .unwrap_or(trimmed.len());
    let (digits, suffix) = trimmed.split_at(split);
    if digits.is_empty() {
        anyhow::bail!("invalid size {trimmed:?}: no leading digits");
    }
    let value: u64 = digits.parse()?;
    let factor: u64 = match suffix.trim().to_ascii_lowercase().as_str() {
        "" | "b" => 1,
        "kb" => 1000,
        "mb" => 1000 * 1000,
        "gb" => 1000 * 1000 * 1000,
        "kib" => 1 << 10,
        "mib" => 1 << 20,
        "gib" => 1 << 30,
        "tib" => 1 << 40,
        other => anyhow::bail!("invalid size suffix {other:?} in {trimmed:?}"),
    };
    value
        .checked_mul(factor)
        .ok_or_else(|| anyhow::anyhow!("size {trimmed:?} overflows"))
}

fn resolve_budget(flag: Option<&str>) -> anyhow::Result<MemoryBudget> {
    if let Some(text) = flag {
        return Ok(MemoryBudget::new(parse_byte_size(text)?));
    }
    if let Ok(text) = std::env::var(MEMORY_BUDGET_ENV) {
        return Ok(MemoryBudget::new(parse_byte_size(&text)?));
    }
    Ok(MemoryBudget::default())
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()?;
    }
    let ctx = Context {
        format: cli.format,
        budget: resolve_budget(cli.memory_budget.as_deref())?,
        include_timings: cli.include_timings,
    };
    let mut sink = ReportSink::create(cli.output.as_deref())?;
    let outcome = match cli.command {
        Command::VerifyTudeng {
            k_min,
            k_max,
            epsilon,
            dump_per_t,
        } => commands::verify_tudeng::run(&ctx, &mut sink, k_min, k_max, epsilon, dump_per_t)?,
        Command::Cusick { t_max, dump_per_t } => {
            commands::cusick::run(&ctx, &mut sink, t_max, dump_per_t)?
        }
        Command::Crosscheck { k_max } => commands::crosscheck::run(&ctx, &mut sink, k_max)?,
        Command::Asymptotics { k_max } => commands::asymptotics::run(&ctx, &mut sink, k_max)?,
        Command::Genfun {
            gf,
            k_max,
            series_budget,
        } => commands::genfun::run(&ctx, &mut sink, gf, k_max, series_budget)?,
    };
    sink.finish()?;
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::AllGood) => ExitCode::from(0),
        Ok(Outcome::ViolationFound) => ExitCode::from(1),
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(2)
        }
    }
}
