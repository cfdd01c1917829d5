//! Shared fixtures for the benchmarks and the floor oracle.

use masking::{hyperdisk_state, PureState};
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

/// `{|0⟩, |1⟩, |+⟩, |+i⟩}`: informationally complete for a qubit, hence not
/// maskable by any isometry.
pub fn tomographic_set() -> Vec<PureState> {
    let s = FRAC_1_SQRT_2;
    vec![
        PureState::ket(2, 0).unwrap(),
        PureState::ket(2, 1).unwrap(),
        hyperdisk_state(&[s, s], &[0.0, 0.0]).unwrap(),
        hyperdisk_state(&[s, s], &[0.0, FRAC_PI_2]).unwrap(),
    ]
}
