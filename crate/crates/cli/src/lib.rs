//! Command-line front end for the `qorient` kernel: named expansions,
//! verification suites with exit codes, and a scalar expression evaluator.

pub mod app;
pub mod expr;

pub use app::{run, EXIT_FAILED, EXIT_OK, EXIT_USAGE};
