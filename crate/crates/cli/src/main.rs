//! `eqehr`: classical and equivariant Ehrhart data from the command line.
//!
//! Exit codes: 0 success, 1 a reproduction disagrees with its closed form,
//! 2 malformed input, 3 an internal cross-check failed, 4 the H*-series is a
//! polynomial but not effective and `--expect-effective` was given.

mod render;
mod reproduce;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eqehr::ehrhart::ehrhart;
use eqehr::equivariant::hstar_series;
use eqehr::Error;

use crate::reproduce::Target;
use crate::source::{FamilyName, Selector};

/// Default cap on the worker pool when `EQEHR_THREADS` is unset.
const MAX_DEFAULT_THREADS: usize = 16;

#[derive(Parser)]
#[command(
    name = "eqehr",
    version,
    about = "Exact classical and equivariant Ehrhart data for rational polytopes"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Assert that no randomness is used. Every computation is deterministic,
    /// so this flag never changes the output.
    #[arg(long, global = true)]
    seed_free: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Counts, h*-polynomial, Ehrhart series and quasipolynomial of a polytope.
    Ehrhart(SourceArgs),
    /// The equivariant H*-series of a polytope under a finite group.
    Hstar {
        #[command(flatten)]
        source: SourceArgs,
        /// Truncation order for a non-polynomial series
        /// (default 2·(dim+1)·denominator).
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        order: Option<u64>,
        /// Exit with code 4 when H* is a polynomial that is not effective.
        #[arg(long)]
        expect_effective: bool,
    },
    /// Recompute a closed-form result through the generic pipeline and diff the two.
    Reproduce {
        #[arg(value_enum)]
        target: Target,
        /// Prime cycle length (thm33).
        #[arg(long)]
        p: Option<u64>,
        /// Cycle length or cross-polytope dimension.
        #[arg(long)]
        d: Option<usize>,
        /// Odd stretch factor of the last axis (thm44, prop41).
        #[arg(long)]
        k: Option<u64>,
    },
}

#[derive(Args)]
struct SourceArgs {
    /// JSON file: a family selector, `{"polytope": …, "group": …}`, or a bare polytope.
    #[arg(long, required_unless_present = "family", conflicts_with = "family")]
    input: Option<PathBuf>,
    /// Built-in family.
    #[arg(long, value_enum)]
    family: Option<FamilyName>,
    /// Cycle length (sep-cycle) or dimension (cross).
    #[arg(long)]
    d: Option<usize>,
    /// Odd stretch factor of the last axis (cross).
    #[arg(long)]
    k: Option<u64>,
    /// dihedral | s-only (sep-cycle); sigma-d | all-reflections | axis (cross).
    #[arg(long)]
    group: Option<String>,
    /// Reflected axis, 1-based, with `--group axis`.
    #[arg(long)]
    axis: Option<usize>,
    /// Dilation factor applied to a cross-polytope.
    #[arg(long)]
    dilate: Option<u64>,
}

impl SourceArgs {
    fn selector(&self) -> Result<Selector, Failure> {
        match (&self.input, self.family) {
            (Some(path), _) => source::load(path),
            (None, Some(name)) => {
                source::from_flags(name, self.d, self.k, self.group.as_deref(), self.axis, self.dilate)
            }
            (None, None) => Err(Failure::Input("give --input FILE or --family NAME".into())),
        }
    }
}

/// A failed run, classified by exit code.
#[derive(Debug)]
pub enum Failure {
    Mismatch(String),
    Input(String),
    Internal(String),
    NotEffective,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Input(_) => 2,
            Failure::Internal(_) => 3,
            Failure::NotEffective => 4,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonIntegral(_)
            | Error::CrossCheck(_)
            | Error::NonTerminating { .. }
            | Error::InterpolationMismatch { .. }
            | Error::Overflow(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let width = match std::env::var("EQEHR_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => {
                return Err(Failure::Input(format!(
                    "EQEHR_THREADS must be a positive integer, got {v:?}"
                )))
            }
        },
        Err(_) => std::thread::available_parallelism()
            .map_or(1, |n| n.get())
            .min(MAX_DEFAULT_THREADS),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(width)
        .build_global()
        .map_err(|e| Failure::Internal(e.to_string()))
}

fn emit(
    format: Format,
    table: impl FnOnce() -> String,
    json: impl FnOnce() -> serde_json::Result<String>,
) -> Result<(), Failure> {
    match format {
        Format::Table => print!("{}", table()),
        Format::Json => println!("{}", json().map_err(|e| Failure::Internal(e.to_string()))?),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Ehrhart(args) => {
            let p = args.selector()?.polytope()?;
            let data = ehrhart(&p)?;
            emit(
                cli.format,
                || render::ehrhart(&p, &data),
                || serde_json::to_string_pretty(&data),
            )
        }
        Command::Hstar {
            source,
            order,
            expect_effective,
        } => {
            let setup = source.selector()?.setup()?;
            let report = hstar_series(&setup, order.map(|o| o as usize))?;
            emit(
                cli.format,
                || render::hstar(&setup, &report),
                || serde_json::to_string_pretty(&report),
            )?;
            if expect_effective && report.is_effective == Some(false) {
                return Err(Failure::NotEffective);
            }
            Ok(())
        }
        Command::Reproduce { target, p, d, k } => {
            let outcome = reproduce::run(target, p, d, k)?;
            emit(
                cli.format,
                || render::reproduction(&outcome),
                || serde_json::to_string_pretty(&outcome),
            )?;
            let first = outcome.failures().next().map(|c| c.summary());
            first.map_or(Ok(()), |msg| Err(Failure::Mismatch(msg)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Mismatch(msg) => eprintln!("mismatch: {msg}"),
                Failure::Input(msg) => eprintln!("error: {msg}"),
                Failure::Internal(msg) => eprintln!("internal cross-check failed: {msg}"),
                Failure::NotEffective => eprintln!("H* is a polynomial but not effective"),
            }
            ExitCode::from(f.code())
        }
    }
}
