//! Files, figures and reports on top of `sloshspot-core`.
//!
//! Output files depend only on the inputs. Repeated runs give identical bytes.

pub mod commands;
mod error;
pub mod figure;
pub mod numfmt;
pub mod output;
pub mod report;
pub mod runner;
pub mod svg;

pub use error::{CliError, ExitCode};
