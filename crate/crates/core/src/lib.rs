//! Masking of quantum information.
//!
//! A masker is an isometry `H_A -> H_A ⊗ H_B` that maps a family of input
//! states to bipartite pure states whose reduced states on both sides do not
//! depend on the input. The information then lives only in the correlations.
//!
//! The crate is organised in four layers:
//!
//! - [`qcore`]: dense complex linear algebra for multipartite pure states and
//!   density matrices (tensor products, partial traces, Schmidt
//!   decomposition, trace distance, entanglement entropy).
//! - [`masklib`]: masker construction and the masking-defect functional.
//! - [`witness`]: numerical search over the isometry manifold that certifies
//!   maskability (defect reaches zero) or exhibits a positive defect floor.
//! - [`protocols`]: the classical-bit masker, qubit commitment with the
//!   entanglement cheating strategy, and the four-party phase masker.
//!
//! [`io`] holds the JSON file formats shared with the command-line tool.

#![forbid(unsafe_code)]
// `!(x <= tol)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod io;
pub mod masklib;
pub mod optim;
pub mod protocols;
pub mod qcore;
pub mod witness;

pub use error::{Error, Result};
pub use masklib::{
    diagonal_masker, hyperdisk_state, is_masked, masker_from_images, masking_defect,
    masking_defect_with, walgate_decompose, Masker, MaskingReport, Mode, Thresholds,
    WalgateDecomposition,
};
pub use protocols::{
    cheat, cheat_unitary, classical_bit_masker, commit, dephase_factor, is_classical_classical,
    multiparty_masker, multiparty_phase_masker, CheatReport, CommitmentTranscript, LocalUnitary,
};
pub use qcore::{
    cross_marginal, entanglement_entropy, partial_trace, random_pure_state, schmidt_decompose,
    tensor, trace_distance, Bipartition, DensityMatrix, DimProfile, PureState,
    SchmidtDecomposition, Side, C64,
};
pub use witness::{
    optimize_masker, parameterize_isometry, probe_maskable_family, witness_no_masking,
    OptimizationResult, OptimizerConfig, ProbeReport,
};

/// Validation tolerance used when the caller does not supply one.
pub const DEFAULT_TOL: f64 = 1e-10;
