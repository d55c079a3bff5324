//! File formats and subcommands behind the `hyperenvy` binary.

pub mod commands;
pub mod error;
pub mod problem;
pub mod report;

pub use commands::{cmd_gram, cmd_solve, cmd_verify, Outcome, Predicate, Route};
pub use error::{CliError, CliResult};
pub use problem::{DeltaSpec, PartitionFile, Problem, ProblemFile};

/// Default enclosure width for the corollary bound, `2^-40`.
pub const DEFAULT_TOL: &str = "1/1099511627776";
