//! Configuration, execution and artifact writing for the `trotter` experiment runner.

// `!(x >= 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;
pub mod run;

pub use config::{ConfigError, ExperimentConfig, Kind};
pub use run::{run, Assertion, RunError, Summary};
