use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyperenvy_cli::problem::rational;
use hyperenvy_cli::{cmd_gram, cmd_solve, cmd_verify, CliError, CliResult, Outcome, PartitionFile, Predicate, Problem, Route, DEFAULT_TOL};
use num_traits::Signed;
use serde::Serialize;

/// Exact hyper envy-free division of [0, 1] for piecewise-constant measures.
#[derive(Debug, Parser)]
#[command(name = "hyperenvy", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Problem file.
    #[arg(long, short)]
    input: PathBuf,
    /// Write the JSON report here; the summary then goes to stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Gram matrix, measure relations, pseudo-inverse and delta bounds.
    Gram {
        #[command(flatten)]
        common: Common,
        /// Enclosure width for the corollary bound.
        #[arg(long, default_value = DEFAULT_TOL)]
        tol: String,
    },
    /// Decide feasibility and build a partition.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = DEFAULT_TOL)]
        tol: String,
        #[arg(long, value_enum, default_value_t = Route::Lp)]
        route: Route,
    },
    /// Audit a partition against the problem's measures.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Partition file, or a report produced by `solve`.
        #[arg(long, short)]
        partition: PathBuf,
        /// Exit with status 1 unless these predicates hold.
        #[arg(long, value_enum, value_delimiter = ',')]
        require: Vec<Predicate>,
    },
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_tol(text: &str) -> CliResult<hyperenvy::linalg::Rational> {
    let tol = rational("--tol", text)?;
    if !tol.is_positive() {
        return Err(CliError::field("--tol", "must be positive"));
    }
    Ok(tol)
}

fn emit<R: Serialize>(outcome: &Outcome<R>, output: Option<&Path>) -> CliResult<()> {
    let json = serde_json::to_string_pretty(&outcome.report)?;
    match output {
        Some(path) => {
            fs::write(path, json + "\n").map_err(|source| CliError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            print!("{}", outcome.summary);
        }
        None => {
            println!("{json}");
            eprint!("{}", outcome.summary);
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Gram { common, tol } => {
            let problem = Problem::parse(&read(&common.input)?)?;
            let outcome = cmd_gram(&problem, &parse_tol(&tol)?)?;
            emit(&outcome, common.output.as_deref())?;
            Ok(outcome.satisfied)
        }
        Command::Solve { common, tol, route } => {
            let problem = Problem::parse(&read(&common.input)?)?;
            let outcome = cmd_solve(&problem, &parse_tol(&tol)?, route)?;
            emit(&outcome, common.output.as_deref())?;
            Ok(outcome.satisfied)
        }
        Command::Verify {
            common,
            partition,
            require,
        } => {
            let problem = Problem::parse(&read(&common.input)?)?;
            let partition = PartitionFile::parse(&read(&partition)?)?;
            let outcome = cmd_verify(&problem, &partition, &require)?;
            emit(&outcome, common.output.as_deref())?;
            Ok(outcome.satisfied)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
