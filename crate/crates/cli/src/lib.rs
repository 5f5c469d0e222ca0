//! Command-line front end for `sigma-refine`: JSON fixtures, DOT output,
//! the oracle runner and the toy-universe replay.

mod commands;
pub mod dot;
pub mod fixtures;
pub mod oracle;
pub mod toy;

pub use commands::{run, EXIT_INVALID, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE};
