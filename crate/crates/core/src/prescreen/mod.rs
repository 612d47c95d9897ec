//! Pre-screening: Latin hypercube start, a bounded archive of evaluated
//! samples, and a global linear meta-model that picks one of several trial
//! vectors per individual before true evaluation.

pub mod archive;
pub mod engine;
pub mod features;
pub mod lhs;
pub mod model;
pub mod ols;

pub use archive::{InsertOutcome, SampleArchive, SIMILARITY_TOL};
pub use engine::{PsLshade, Screener, Screening, ScreeningConfig};
pub use features::{feature_count, feature_map};
pub use lhs::lhs_init;
pub use model::{argmin_surrogate, screen, MetaModel, RANK_TOL};
