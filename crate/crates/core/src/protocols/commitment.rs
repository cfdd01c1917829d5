use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::masklib::{masker_from_images, Masker};
use crate::qcore::reduce::{coefficient_matrix, require_bipartite};
use crate::qcore::{
    linalg, partial_trace, schmidt_decompose, trace_distance, Bipartition, DensityMatrix,
    DimProfile, PureState, C64,
};

/// Maps `|0⟩ ↦ (|00⟩+|11⟩)/√2` and `|1⟩ ↦ (|00⟩−|11⟩)/√2`.
pub fn classical_bit_masker() -> Masker {
    let dims = DimProfile::bipartite(2, 2).expect("qubit pair");
    let bell = |sign: f64| {
        let amps = DVector::from_vec(vec![
            C64::new(FRAC_1_SQRT_2, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(sign * FRAC_1_SQRT_2, 0.0),
        ]);
        PureState::new(amps, dims.clone()).expect("Bell state")
    };
    masker_from_images(&[bell(1.0), bell(-1.0)]).expect("Bell states are orthonormal")
}

/// A unitary acting on the `A` factor of a bipartite state.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalUnitary {
    mat: DMatrix<C64>,
}

impl LocalUnitary {
    pub fn new(mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix is not square",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let deviation = linalg::isometry_deviation(&mat);
        if !(deviation <= crate::DEFAULT_TOL) {
            return Err(Error::NotIsometry { deviation });
        }
        Ok(Self { mat })
    }

    pub fn mat(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// `(U ⊗ I) Ψ` for a bipartite `Ψ`.
    pub fn apply_to(&self, psi: &PureState) -> Result<PureState> {
        require_bipartite(psi.dims())?;
        let (d_a, d_b) = (psi.dims().factors()[0], psi.dims().factors()[1]);
        if d_a != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "local unitary of dimension {} on A of dimension {d_a}",
                self.dim()
            )));
        }
        let m = coefficient_matrix(psi, &[0], &[1]);
        let out = &self.mat * m;
        let amps = DVector::from_fn(d_a * d_b, |i, _| out[(i / d_b, i % d_b)]);
        Ok(PureState::from_parts(amps, psi.dims().clone()))
    }

    /// Smallest `max |U - e^{iθ} other|` over global phases, with the phase
    /// taken from the largest entry of `other`.
    pub fn distance_up_to_phase(&self, other: &DMatrix<C64>) -> f64 {
        let (mut best, mut idx) = (0.0, (0, 0));
        for i in 0..other.nrows() {
            for j in 0..other.ncols() {
                if other[(i, j)].norm() > best {
                    best = other[(i, j)].norm();
                    idx = (i, j);
                }
            }
        }
        let ratio = self.mat[idx] / other[idx];
        let phase = if ratio.norm() > 0.0 { ratio / ratio.norm() } else { C64::new(1.0, 0.0) };
        linalg::max_abs(&(&self.mat - other * phase))
    }
}

impl Serialize for LocalUnitary {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.mat.nrows())
            .map(|i| (0..self.mat.ncols()).map(|j| [self.mat[(i, j)].re, self.mat[(i, j)].im]).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LocalUnitary {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(serde::de::Error::custom("local unitary must be square"));
        }
        let mat = DMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j][0], rows[i][j][1]));
        LocalUnitary::new(mat).map_err(serde::de::Error::custom)
    }
}

/// What Alice holds and what Bob receives in a qubit commitment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommitmentTranscript {
    pub committed_state: PureState,
    pub joint: PureState,
    /// Bob's share, `Tr_A |Ψ⟩⟨Ψ|`.
    pub sent_marginal: DensityMatrix,
    pub unveiled_state: PureState,
}

/// Commits to `psi` by masking it with `v` and sending the `B` share.
pub fn commit(psi: &PureState, v: &Masker) -> Result<CommitmentTranscript> {
    let joint = v.apply(psi)?;
    let sent_marginal = partial_trace(&joint, &[1])?;
    Ok(CommitmentTranscript {
        committed_state: psi.clone(),
        joint,
        sent_marginal,
        unveiled_state: psi.clone(),
    })
}

/// Local unitary `U_A` with `Ψ0 = (U_A ⊗ I) Ψ1`, which exists whenever the
/// two states have the same `B` marginal.
///
/// Both states are Schmidt-decomposed across `A:B`. Within each block of
/// equal Schmidt coefficients the `B` vectors of `Ψ1` are re-expressed in the
/// `B` basis of `Ψ0` through their overlap matrix, which moves the basis
/// change onto the `A` vectors; `U_A` then maps the re-expressed `A` vectors
/// of `Ψ1` onto those of `Ψ0` and is completed to a unitary on the
/// complement of the support.
pub fn cheat_unitary(psi0: &PureState, psi1: &PureState) -> Result<LocalUnitary> {
    require_bipartite(psi0.dims())?;
    if psi0.dims() != psi1.dims() {
        return Err(Error::DimensionMismatch(format!(
            "profiles {:?} and {:?} differ",
            psi0.dims().factors(),
            psi1.dims().factors()
        )));
    }
    let distance = trace_distance(&partial_trace(psi0, &[1])?, &partial_trace(psi1, &[1])?)?;
    if distance > 1e-8 {
        return Err(Error::UnequalMarginals { distance });
    }

    let cut = Bipartition::ab();
    let s0 = schmidt_decompose(psi0, &cut)?;
    let s1 = schmidt_decompose(psi1, &cut)?;
    let support = s0.coeffs.iter().filter(|&&c| c > 1e-12).count();

    let mut a0_cols: Vec<DVector<C64>> = Vec::with_capacity(support);
    let mut a1_cols: Vec<DVector<C64>> = Vec::with_capacity(support);
    let mut start = 0;
    while start < support {
        let mut end = start + 1;
        while end < support && (s0.coeffs[end - 1] - s0.coeffs[end]).abs() <= 1e-6 {
            end += 1;
        }
        let b0 = s0.basis_b.columns(start, end - start);
        let b1 = s1.basis_b.columns(start, end - start);
        let overlap = b0.adjoint() * b1;
        let unitarity = linalg::isometry_deviation(&overlap);
        if unitarity > 1e-6 {
            return Err(Error::AlignmentFailed(format!(
                "Schmidt block {start}..{end} (coefficients {:?} vs {:?}): B-side overlap \
                 deviates from unitary by {unitarity:e}",
                &s0.coeffs[start..end],
                &s1.coeffs[start..end]
            )));
        }
        let a1 = s1.basis_a.columns(start, end - start) * overlap.transpose();
        for k in 0..end - start {
            a0_cols.push(s0.basis_a.column(start + k).into_owned());
            a1_cols.push(a1.column(k).into_owned());
        }
        start = end;
    }

    let a0 = linalg::complete_unitary(&DMatrix::from_columns(&a0_cols));
    let a1 = linalg::complete_unitary(&DMatrix::from_columns(&a1_cols));
    let u = LocalUnitary::new(&a0 * a1.adjoint())?;

    let fidelity = psi0.inner(&u.apply_to(psi1)?)?.norm();
    if fidelity < 1.0 - 1e-8 {
        return Err(Error::AlignmentFailed(format!(
            "|<Ψ0|(U⊗I)Ψ1>| = {fidelity} after alignment; Schmidt coefficients {:?} vs {:?}",
            s0.coeffs, s1.coeffs
        )));
    }
    Ok(u)
}

/// Outcome of switching a commitment at the unveiling stage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheatReport {
    pub target_state: PureState,
    pub target_joint: PureState,
    pub target_sent_marginal: DensityMatrix,
    pub unitary: LocalUnitary,
    /// `|⟨Ψ_target|(U⊗I)Ψ_committed⟩|²`.
    pub fidelity_to_target: f64,
    /// `|⟨Ψ_committed|Ψ_target⟩|²`, what an honest unveiling would score.
    pub fidelity_to_committed: f64,
    /// Trace distance between the two `B` shares.
    pub marginal_distance: f64,
}

/// Alice committed with `transcript` and now unveils `target` instead: she
/// applies the local unitary that turns her joint state into the commitment
/// of `target`. The returned transcript carries the post-cheat joint state.
pub fn cheat(
    transcript: &CommitmentTranscript,
    target: &PureState,
    v: &Masker,
) -> Result<(CommitmentTranscript, CheatReport)> {
    let honest_target = commit(target, v)?;
    let u = cheat_unitary(&honest_target.joint, &transcript.joint)?;
    let joint = u.apply_to(&transcript.joint)?;
    let fidelity_to_target = honest_target.joint.fidelity(&joint)?;
    let fidelity_to_committed = honest_target.joint.fidelity(&transcript.joint)?;
    let marginal_distance =
        trace_distance(&transcript.sent_marginal, &honest_target.sent_marginal)?;
    let cheated = CommitmentTranscript {
        committed_state: transcript.committed_state.clone(),
        joint,
        sent_marginal: transcript.sent_marginal.clone(),
        unveiled_state: target.clone(),
    };
    Ok((
        cheated,
        CheatReport {
            target_state: target.clone(),
            target_joint: honest_target.joint,
            target_sent_marginal: honest_target.sent_marginal,
            unitary: u,
            fidelity_to_target,
            fidelity_to_committed,
            marginal_distance,
        },
    ))
}

/// Completely dephases one factor in its computational basis.
pub fn dephase_factor(rho: &DensityMatrix, factor: usize) -> Result<DensityMatrix> {
    let dims = rho.dims();
    if factor >= dims.num_factors() {
        return Err(Error::InvalidFactors(format!(
            "factor {factor} out of range for {} factors",
            dims.num_factors()
        )));
    }
    let stride = dims.strides()[factor];
    let d = dims.factors()[factor];
    let digit = |i: usize| (i / stride) % d;
    let mat = DMatrix::from_fn(rho.dim(), rho.dim(), |i, j| {
        if digit(i) == digit(j) {
            rho.mat()[(i, j)]
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Ok(DensityMatrix::from_parts(mat, dims.clone()))
}
