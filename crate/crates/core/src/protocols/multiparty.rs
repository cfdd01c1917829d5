use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::masklib::Masker;
use crate::qcore::{Bipartition, DensityMatrix, DimProfile, PureState, C64};

/// `Σ_k e^{iφ_k} |k⟩_A |k⟩_{E_A} |k⟩_B |k⟩_{E_B} / √d` on factors
/// `[A, E_A, B, E_B]`, each of dimension `d`.
///
/// Every single party sees `I/d`, and the pair `(A, E_A)` holds only
/// classical correlations, yet `AE_A : BE_B` is maximally entangled.
pub fn multiparty_phase_masker(d: usize, phi: &[f64]) -> Result<PureState> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("d = {d}, need at least 2")));
    }
    if phi.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "{} phases for d = {d}",
            phi.len()
        )));
    }
    if let Some(p) = phi.iter().find(|p| !p.is_finite()) {
        return Err(Error::InvalidArgument(format!("phase {p} is not finite")));
    }
    let dims = DimProfile::new(vec![d; 4])?;
    let diag = d * d * d + d * d + d + 1;
    let scale = 1.0 / (d as f64).sqrt();
    let mut amps = DVector::from_element(dims.total(), C64::new(0.0, 0.0));
    for (k, &p) in phi.iter().enumerate() {
        amps[k * diag] = C64::from_polar(scale, p);
    }
    PureState::new(amps, dims)
}

/// The masker behind [`multiparty_phase_masker`], with the pair `(A, E_A)` as
/// one `d²`-dimensional party: `|k⟩ ↦ |kk⟩|kk⟩`.
///
/// Its input space is the `d`-dimensional span of `|kk⟩`, so `d_in = d` while
/// `d_A = d_B = d²`.
pub fn multiparty_masker(d: usize) -> Result<Masker> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("d = {d}, need at least 2")));
    }
    let n = d * d;
    let mut iso = DMatrix::from_element(n * n, d, C64::new(0.0, 0.0));
    for k in 0..d {
        let pair = k * d + k;
        iso[(pair * n + pair, k)] = C64::new(1.0, 0.0);
    }
    Masker::new(iso, n, n)
}

const CC_TOL: f64 = 1e-10;

/// Whether `rho`, split by `cut`, is diagonal in some product basis.
///
/// Writing `ρ = Σ_{kl} X_{kl} ⊗ |k⟩⟨l|`, the state is classical on the left
/// side exactly when the blocks `X_{kl}` commute pairwise (they are then
/// simultaneously diagonalised by the left marginal's eigenbasis, refined
/// inside degenerate eigenspaces); likewise for the right side. Both holding
/// means `ρ` is diagonal in a product of marginal eigenbases. Deviations
/// are measured entrywise against [`CC_TOL`]. Invalid inputs yield `false`.
pub fn is_classical_classical(rho: &DensityMatrix, cut: &Bipartition) -> bool {
    let Ok((left, right)) = cut.groups(rho.dims()) else {
        return false;
    };
    let order: Vec<usize> = left.iter().chain(&right).copied().collect();
    let f = rho.dims().factors();
    let d_l: usize = left.iter().map(|&i| f[i]).product();
    let d_r: usize = right.iter().map(|&i| f[i]).product();
    let Ok(permuted) = rho.permute_factors(&order) else {
        return false;
    };
    let m = permuted.mat();
    let left_blocks = blocks(d_l, d_r, |a, b, k, l| m[(a * d_r + k, b * d_r + l)]);
    let right_blocks = blocks(d_r, d_l, |a, b, k, l| m[(k * d_r + a, l * d_r + b)]);
    commuting(&left_blocks) && commuting(&right_blocks)
}

fn blocks(
    n: usize,
    other: usize,
    entry: impl Fn(usize, usize, usize, usize) -> C64,
) -> Vec<DMatrix<C64>> {
    let mut out = Vec::with_capacity(other * other);
    for k in 0..other {
        for l in 0..other {
            out.push(DMatrix::from_fn(n, n, |a, b| entry(a, b, k, l)));
        }
    }
    out
}

fn commuting(family: &[DMatrix<C64>]) -> bool {
    for (i, x) in family.iter().enumerate() {
        for y in &family[i..] {
            let c = x * y - y * x;
            if c.iter().any(|z| z.norm() > CC_TOL) {
                return false;
            }
        }
    }
    true
}
