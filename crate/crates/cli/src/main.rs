//! `lu3q`: construct W(q) and LU(3,q), check ranks and structure, export
//! parity-check matrices and run BSC decoding simulations.
//!
//! Exit codes: 0 success, 1 a check failed or a runtime error occurred,
//! 2 invalid configuration. Log verbosity comes from `LU3Q_LOG`.

mod commands;
mod config;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ConfigError, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "lu3q", version, about = "LU(3,q) codes and the symplectic quadrangle W(q)")]
struct Cli {
    /// TOML file whose keys mirror the flags; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Machine-readable output on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
pub struct FieldArgs {
    /// Field order, a prime power.
    #[arg(long)]
    pub q: Option<u64>,
    /// Irreducible polynomial, comma-separated coefficients, constant term first.
    #[arg(long)]
    pub irr: Option<String>,
}

#[derive(Args, Debug, Default)]
pub struct MatrixArgs {
    /// Incidence system: pl, p1l1 or kim.
    #[arg(long)]
    pub system: Option<String>,
    /// Use the transpose as parity-check matrix.
    #[arg(long)]
    pub transpose: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print points or lines of W(q), or write an incidence matrix as alist.
    Construct {
        #[command(flatten)]
        field: FieldArgs,
        /// points or lines
        #[arg(long)]
        list: Option<String>,
        #[command(flatten)]
        matrix: MatrixArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// 2-rank of incidence matrices against the closed forms.
    Rank {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        matrix: MatrixArgs,
    },
    /// Run structural checks and print a pass matrix.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        /// Comma-separated subset of counts,gq,grid,spans,kernel,poly,iso,girth,rank,formulas, or all (default).
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        /// Seed for the sampled grid pairs.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Tables of predicted ranks and dimensions.
    Formulas {
        /// Rows q = 2^t for t = 1..=t-max.
        #[arg(long)]
        t_max: Option<u32>,
        /// Odd prime powers, comma-separated.
        #[arg(long, value_delimiter = ',')]
        q_odd: Vec<u64>,
    },
    /// Monte Carlo decoding over the binary symmetric channel.
    Simulate {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        matrix: MatrixArgs,
        /// Only bsc is supported.
        #[arg(long)]
        channel: Option<String>,
        /// Crossover probability; a comma-separated list gives a curve.
        #[arg(long, value_delimiter = ',')]
        p: Vec<f64>,
        /// minsum or bitflip
        #[arg(long)]
        decoder: Option<String>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_iters: Option<usize>,
        /// Min-sum normalization factor.
        #[arg(long)]
        normalization: Option<f64>,
        /// CSV output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a parity-check matrix as alist and/or dense CSV.
    Export {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        matrix: MatrixArgs,
        /// alist, csv or both
        #[arg(long)]
        format: Option<String>,
        /// Output path; with `both` the extension is replaced.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let file = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let json = cli.json || file.json.unwrap_or(false);
    match cli.command {
        Command::Construct { field, list, matrix, out } => commands::construct(&file, &field, list, &matrix, out),
        Command::Rank { field, matrix } => commands::rank(&file, &field, &matrix, json),
        Command::Verify { field, checks, seed } => commands::verify(&file, &field, checks, seed, json),
        Command::Formulas { t_max, q_odd } => commands::formulas(&file, t_max, q_odd, json),
        Command::Simulate { field, matrix, channel, p, decoder, trials, seed, max_iters, normalization, out } => {
            let args = commands::SimArgs { channel, p, decoder, trials, seed, max_iters, normalization, out };
            commands::simulate(&file, &field, &matrix, args, json)
        }
        Command::Export { field, matrix, format, out } => commands::export(&file, &field, &matrix, format, out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("LU3Q_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
