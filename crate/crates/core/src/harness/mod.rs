//! Config-driven experiments: grids of runs, a resumable result store and
//! scoreboards computed from it.

pub mod config;
pub mod experiment;
pub mod run;
pub mod store;
pub mod summary;

pub use config::{AlgorithmKind, AlgorithmSpec, Budget, ExperimentConfig};
pub use experiment::{grid, run_experiment, score_config, ExperimentReport, Progress, RunOptions, SCOREBOARD_FILE};
pub use run::{run_cell, run_cell_with_seed, run_objective, Cell, CellOutput, RunOutput};
pub use summary::{diagnostics_summary, DIAGNOSTIC_SUMMARY_HEADER};
pub use store::{group_records, CellStatus, ManifestEntry, ResultStore, MANIFEST_HEADER, SCHEMA_LINE};
