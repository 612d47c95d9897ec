//! LSHADE: current-to-pbest/1 differential evolution with success-history
//! parameter adaptation, an external archive and linear population size
//! reduction.

pub mod engine;
pub mod memory;
pub mod operators;
pub mod params;
pub mod population;

pub use engine::{uniform_init, DeState, GenerationSummary, InitMethod, Lshade, Outcome, TrialSet};
pub use memory::{sample_cr, sample_cr_with, sample_f, sample_f_with, weighted_lehmer, ParameterMemory};
pub use operators::{crossover, mutate, repair, trial_wins};
pub use params::{lpsr_next_size, ControlParams};
pub use population::{ExternalArchive, Individual, Population};
