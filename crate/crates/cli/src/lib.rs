//! Library side of the `symsos` command-line tool: the problem file format
//! and command dispatch.

pub mod app;
pub mod problem;

pub use app::{run, Cli, Command, EXIT_NUMERIC, EXIT_OK, EXIT_REJECTED, EXIT_USAGE};
pub use problem::{parse_problem, Overrides, ProblemFile};
