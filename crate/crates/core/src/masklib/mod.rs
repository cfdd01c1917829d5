//! Masker construction and masking-condition verification.

mod defect;
mod masker;
mod walgate;

pub use defect::{
    is_masked, masking_defect, masking_defect_with, span_reference_basis, CrossNorm, MaskingReport,
    Mode, StateDeviation, Thresholds, DEFAULT_ENTROPY_FLOOR,
};
pub use masker::{apply_masker, diagonal_masker, hyperdisk_state, masker_from_images, Masker};
pub use walgate::{walgate_decompose, walgate_decompose_seeded, WalgateDecomposition};
