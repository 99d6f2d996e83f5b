//! Example registry, experiment runner and table reproduction.

pub mod config;
pub mod examples;
pub mod runner;
pub mod tables;

pub use config::{ExperimentConfig, MhatChoice, OutputFormat};
pub use examples::{generate_example, ExampleId, ExponentReading};
pub use runner::{recover_gamma_r, run_experiment, sample_example, RowStatus, RunOutcome, TableRow};
pub use tables::{preset, resolve_presets, run_table, write_table, TablePreset, TableResult};
