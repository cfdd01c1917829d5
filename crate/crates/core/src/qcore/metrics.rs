use super::{linalg, schmidt_decompose, Bipartition, DensityMatrix, PureState};
use crate::error::{Error, Result};

/// `½ Σ |eig(ρ - σ)|`, clamped to `[0, 1]`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "trace distance between dimension {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let (evals, _) = linalg::hermitian_eigen(&(rho.mat() - sigma.mat()));
    let d = 0.5 * evals.iter().map(|l| l.abs()).sum::<f64>();
    Ok(d.clamp(0.0, 1.0))
}

/// Shannon entropy in bits of a probability vector; nonpositive entries are
/// skipped.
pub fn shannon_entropy_bits(probs: impl Iterator<Item = f64>) -> f64 {
    let h: f64 = probs.filter(|&p| p > 0.0).map(|p| -p * p.log2()).sum();
    h.max(0.0)
}

/// Entanglement entropy across `cut`, in bits.
pub fn entanglement_entropy(psi: &PureState, cut: &Bipartition) -> Result<f64> {
    let s = schmidt_decompose(psi, cut)?;
    Ok(shannon_entropy_bits(s.coeffs.iter().map(|c| c * c)))
}
