use nalgebra::{DMatrix, DVector};

use super::{linalg, DimProfile, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Tolerance on `‖ψ‖ - 1` accepted by [`PureState::new`].
pub const NORM_TOL: f64 = 1e-12;

/// A normalized amplitude vector on a multipartite profile.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amps: DVector<C64>,
    dims: DimProfile,
}

impl PureState {
    pub fn new(amps: DVector<C64>, dims: DimProfile) -> Result<Self> {
        Self::new_with_tol(amps, dims, NORM_TOL)
    }

    pub fn new_with_tol(amps: DVector<C64>, dims: DimProfile, tol: f64) -> Result<Self> {
        if amps.len() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for profile {:?} (total {})",
                amps.len(),
                dims.factors(),
                dims.total()
            )));
        }
        let norm = amps.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > tol {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amps, dims })
    }

    /// Single-factor state from raw amplitudes, which must be normalized.
    pub fn from_amps(amps: Vec<C64>) -> Result<Self> {
        let d = DimProfile::single(amps.len())?;
        Self::new(DVector::from_vec(amps), d)
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(amps: DVector<C64>, dims: DimProfile) -> Result<Self> {
        let norm = amps.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(amps.unscale(norm), dims)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dims: DimProfile, index: usize) -> Result<Self> {
        let n = dims.total();
        if index >= n {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {n}"
            )));
        }
        let mut amps = DVector::from_element(n, ZERO);
        amps[index] = ONE;
        Ok(Self { amps, dims })
    }

    /// Basis state of a single factor of dimension `d`.
    pub fn ket(d: usize, index: usize) -> Result<Self> {
        Self::basis(DimProfile::single(d)?, index)
    }

    /// Built from results that are normalized up to rounding.
    pub(crate) fn from_parts(amps: DVector<C64>, dims: DimProfile) -> Self {
        debug_assert_eq!(amps.len(), dims.total());
        Self { amps, dims }
    }

    pub fn amps(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn dims(&self) -> &DimProfile {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "inner product of dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self.amps.dotc(&other.amps))
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn with_global_phase(&self, theta: f64) -> PureState {
        let phase = C64::from_polar(1.0, theta);
        Self {
            amps: self.amps.map(|a| a * phase),
            dims: self.dims.clone(),
        }
    }

    /// Same amplitudes viewed on another profile with equal total dimension.
    pub fn reshape(&self, dims: DimProfile) -> Result<PureState> {
        if dims.total() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot view dimension {} as {:?}",
                self.dim(),
                dims.factors()
            )));
        }
        Ok(Self {
            amps: self.amps.clone(),
            dims,
        })
    }

    /// Applies a matrix acting on the whole space; the result is renormalized
    /// only by rounding, so `op` should be unitary or an isometry.
    pub fn evolve(&self, op: &DMatrix<C64>, dims: DimProfile) -> Result<PureState> {
        if op.ncols() != self.dim() || op.nrows() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "operator {}x{} on state of dimension {} into {:?}",
                op.nrows(),
                op.ncols(),
                self.dim(),
                dims.factors()
            )));
        }
        Ok(Self::from_parts(op * &self.amps, dims))
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix::from_parts(&self.amps * self.amps.adjoint(), self.dims.clone())
    }
}

/// `u ⊗ v` with the factor lists concatenated.
pub fn tensor(u: &PureState, v: &PureState) -> PureState {
    PureState::from_parts(linalg::kron_vec(&u.amps, &v.amps), u.dims.concat(&v.dims))
}

/// Validation tolerances for [`DensityMatrix::new_with_tol`].
#[derive(Clone, Copy, Debug)]
pub struct DensityTol {
    pub hermitian: f64,
    pub trace: f64,
    pub eigen: f64,
}

impl Default for DensityTol {
    fn default() -> Self {
        Self {
            hermitian: 1e-12,
            trace: 1e-12,
            eigen: 1e-10,
        }
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: DMatrix<C64>,
    dims: DimProfile,
}

impl DensityMatrix {
    pub fn new(mat: DMatrix<C64>, dims: DimProfile) -> Result<Self> {
        Self::new_with_tol(mat, dims, DensityTol::default())
    }

    pub fn new_with_tol(mat: DMatrix<C64>, dims: DimProfile, tol: DensityTol) -> Result<Self> {
        let n = dims.total();
        if mat.nrows() != n || mat.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for profile {:?}",
                mat.nrows(),
                mat.ncols(),
                dims.factors()
            )));
        }
        let herm = linalg::max_abs(&(&mat - mat.adjoint()));
        if !(herm <= tol.hermitian) {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (max |ρ - ρ†| = {herm:e})"
            )));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(Error::InvalidDensityMatrix(format!("trace is {tr}")));
        }
        let (evals, _) = linalg::hermitian_eigen(&mat);
        if let Some(&min) = evals.first() {
            if min < -tol.eigen {
                return Err(Error::InvalidDensityMatrix(format!(
                    "negative eigenvalue {min:e}"
                )));
            }
        }
        Ok(Self { mat, dims })
    }

    /// Maximally mixed state `I/d` on a profile.
    pub fn maximally_mixed(dims: DimProfile) -> Self {
        let n = dims.total();
        Self {
            mat: DMatrix::identity(n, n).unscale(n as f64),
            dims,
        }
    }

    /// Diagonal state with the given probabilities (which must sum to one).
    pub fn diagonal(probs: &[f64], dims: DimProfile) -> Result<Self> {
        let diag = DVector::from_iterator(probs.len(), probs.iter().map(|&p| C64::new(p, 0.0)));
        Self::new(DMatrix::from_diagonal(&diag), dims)
    }

    pub(crate) fn from_parts(mat: DMatrix<C64>, dims: DimProfile) -> Self {
        Self { mat, dims }
    }

    pub fn mat(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn dims(&self) -> &DimProfile {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigen(&self.mat).0
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        super::shannon_entropy_bits(self.eigenvalues().into_iter())
    }

    /// Same matrix viewed on another profile with equal total dimension.
    pub fn reshape(&self, dims: DimProfile) -> Result<DensityMatrix> {
        if dims.total() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot view dimension {} as {:?}",
                self.dim(),
                dims.factors()
            )));
        }
        Ok(Self {
            mat: self.mat.clone(),
            dims,
        })
    }

    /// Reorders the tensor factors: new factor `i` is old factor `order[i]`.
    pub fn permute_factors(&self, order: &[usize]) -> Result<DensityMatrix> {
        let n = self.dims.num_factors();
        let mut seen = order.to_vec();
        seen.sort_unstable();
        if seen != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidFactors(format!(
                "{order:?} is not a permutation of {n} factors"
            )));
        }
        let new_dims = self.dims.select(order)?;
        let old_strides = self.dims.strides();
        let new_strides = new_dims.strides();
        let total = self.dim();
        // map[new_index] = old_index
        let map: Vec<usize> = (0..total)
            .map(|idx| {
                order.iter().enumerate().fold(0, |acc, (pos, &old)| {
                    let digit = (idx / new_strides[pos]) % new_dims.factors()[pos];
                    acc + digit * old_strides[old]
                })
            })
            .collect();
        let mat = DMatrix::from_fn(total, total, |i, j| self.mat[(map[i], map[j])]);
        Ok(Self { mat, dims: new_dims })
    }
}
