//! Dense complex linear algebra for multipartite pure states and density
//! matrices.
//!
//! Amplitudes are stored row-major over the factor list: the index of the
//! last factor varies fastest, so `|i j⟩` on a `d_A × d_B` profile sits at
//! position `i * d_B + j`.

mod dims;
pub mod linalg;
mod metrics;
mod random;
pub(crate) mod reduce;
mod schmidt;
mod state;

pub use dims::{Bipartition, DimProfile, Side};
pub use metrics::{entanglement_entropy, shannon_entropy_bits, trace_distance};
pub use random::{random_pure_state, random_state_on, random_unitary};
pub use reduce::{cross_marginal, cross_marginal_keep, partial_trace, Reduce};
pub use schmidt::{schmidt_decompose, SchmidtDecomposition};
pub use state::{tensor, DensityMatrix, PureState};

pub type C64 = num_complex::Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
