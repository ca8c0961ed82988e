//! `cartier` command-line tool: coefficient matrices, family scans, theorem
//! checks and table reproduction for the TTV families.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::output::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "cartier",
    version,
    about = "Cartier-Manin matrices and the non-ordinary locus of the TTV families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Minus,
    Plus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Inert,
    Split,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Shape,
    Genus,
    Lemma,
    Remark,
    Corollary,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficient matrix N = (c_{ip-j}) of C-(t) or C+(t), parametric or at t = t0.
    Matrix {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        t0: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Inert-prime genus table or split-prime non-ordinary table.
    Table {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        pmax: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Worker threads for the prime range (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Check a theorem prime by prime; exits 0 iff every prime passes.
    Verify {
        #[arg(long, value_enum)]
        check: Check,
        #[arg(long, default_value_t = 7)]
        pmin: u64,
        #[arg(long)]
        pmax: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Classify every fiber t0 in F_p.
    Scan {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

fn with_jobs<T>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError>
where
    T: Send,
{
    match jobs {
        Some(0) => Err(CliError::Invalid("--jobs must be at least 1".into())),
        #[cfg(feature = "parallel")]
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| CliError::Internal(e.to_string()))?;
            Ok(pool.install(f))
        }
        _ => Ok(f()),
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Matrix { family, p, t0, format } => commands::matrix(family, p, t0, format),
        Command::Table {
            which,
            pmax,
            format,
            jobs,
        } => with_jobs(jobs, || commands::table(which, pmax, format))?,
        Command::Verify {
            check,
            pmin,
            pmax,
            format,
            jobs,
        } => with_jobs(jobs, || commands::verify(check, pmin, pmax, format))?,
        Command::Scan { family, p, format } => commands::scan(family, p, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
