//! `gpe run --config <path>`: JSON-configured experiments over `gpe-core`,
//! written as CSV or JSON lines, one file per diagnostic.

// Negated float comparisons such as `!(x > 0.0)` are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{ExperimentConfig, ExperimentKind, Format};
pub use error::CliError;
pub use run::{run, Overrides, Summary};
