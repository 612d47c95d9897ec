//! Bound-constrained test suite with bias, shift and rotation transformations.

pub mod functions;
pub mod suite;
pub mod transform;

pub use functions::Component;
pub use suite::{
    make_suite, make_transformed_suite, suite_manifest, suite_member, BaseFunction, Category,
    CompositionLayout, HybridLayout, ObjectiveFunction, SearchBounds, SUITE_SIZE,
};
pub use transform::{random_rotation, Combo, TransformationSpec};
