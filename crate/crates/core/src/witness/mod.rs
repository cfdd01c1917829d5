//! Numerical witnesses of (non-)maskability.
//!
//! [`optimize_masker`] searches the full isometry manifold for a masker of a
//! given state set. A defect that reaches zero certifies maskability; a
//! strictly positive floor across many restarts is numerical evidence that
//! the set cannot be masked.

mod objective;
mod optimize;
mod param;
mod probe;

pub use objective::SurrogateObjective;
pub use optimize::{
    optimize_masker, witness_no_masking, OptimizationResult, OptimizerConfig, RestartTrace,
};
pub use param::{isometry_columns, parameterize_isometry, param_count};
pub use probe::{
    probe_maskable_family, probe_maskable_family_with, ProbeReport, ProbeSample, DEFAULT_PROBE_TOL,
};
