//! Protocol-level demonstrations built on the masking primitives.

mod commitment;
mod multiparty;

pub use commitment::{
    cheat, cheat_unitary, classical_bit_masker, commit, dephase_factor, CheatReport,
    CommitmentTranscript, LocalUnitary,
};
pub use multiparty::{is_classical_classical, multiparty_masker, multiparty_phase_masker};
