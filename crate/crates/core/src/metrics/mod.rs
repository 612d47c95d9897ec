//! Aggregate scores, convergence records and meta-model diagnostics.

pub mod record;
pub mod score;
pub mod stats;

pub use record::{
    checkpoint_schedule, nearest_checkpoint, ConvergenceRecorder, DiagnosticRow, DiagnosticTrace, RunRecord,
    CHECKPOINTS, DIAGNOSTIC_HEADER, RECORD_HEADER,
};
pub use score::{normalized_error, score_pipeline, shared_ranks, CellKey, CellResult, ScoreRow, Scoreboard};
pub use stats::{hyper_volume, kendall_tau, r_squared, r_squared_raw, selection_accuracy};
