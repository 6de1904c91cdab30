//! Experiment driver: configuration, figure sweeps, CSV output, plot
//! descriptions and the validation suite.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod config;
pub mod error;
pub mod figures;
pub mod output;
pub mod plots;
pub mod seeds;

pub use config::ExperimentConfig;
pub use error::{CliError, Result};
pub use figures::{Figure, Runner};
pub use output::ResultRow;
