//! Benchmark presets, run artifacts and the command-line runner for `lie-momentum`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod artifact;
pub mod config;
pub mod error;
pub mod runner;

pub use artifact::{reference_curve, RunArtifact};
pub use config::{preset, presets, ExperimentConfig, InitSpec, Method, ObjectiveName, Preset, SolverName};
pub use error::BenchError;
pub use runner::{run_config, run_custom, run_preset, run_preset_trajectories, SolverRun};
