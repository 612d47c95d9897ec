//! LSHADE and its pre-screening variant psLSHADE, with a seeded benchmark
//! suite, aggregate scoring and an experiment harness.

// `!(a > b)` is used deliberately so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod benchmark;
pub mod de;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod prescreen;
pub mod seed;

pub use benchmark::{Combo, ObjectiveFunction, SearchBounds};
pub use de::{ControlParams, InitMethod, Lshade};
pub use error::{Error, Result};
pub use harness::{AlgorithmSpec, ExperimentConfig, ResultStore};
pub use prescreen::{PsLshade, Screener, ScreeningConfig};
