use nalgebra::{DMatrix, DVector};

use super::reduce::coefficient_matrix;
use super::{Bipartition, DimProfile, PureState, C64, ZERO};
use crate::error::Result;

/// `Ψ = Σ_k coeffs[k] · basis_a[:, k] ⊗ basis_b[:, k]`.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    /// Nonincreasing, nonnegative.
    pub coeffs: Vec<f64>,
    /// Orthonormal columns on the left group of factors.
    pub basis_a: DMatrix<C64>,
    /// Orthonormal columns on the right group of factors.
    pub basis_b: DMatrix<C64>,
    dims: DimProfile,
    left: Vec<usize>,
    right: Vec<usize>,
}

impl SchmidtDecomposition {
    pub fn rank(&self, tol: f64) -> usize {
        self.coeffs.iter().filter(|&&c| c > tol).count()
    }

    /// Reassembles the state on the original factor ordering.
    pub fn reconstruct(&self) -> PureState {
        let table = self.dims.index_table(&self.left, &self.right);
        let mut amps = DVector::from_element(self.dims.total(), ZERO);
        for (k, &s) in self.coeffs.iter().enumerate() {
            let a = self.basis_a.column(k);
            let b = self.basis_b.column(k);
            for (i, row) in table.iter().enumerate() {
                for (j, &idx) in row.iter().enumerate() {
                    amps[idx] += a[i] * b[j] * s;
                }
            }
        }
        PureState::from_parts(amps, self.dims.clone())
    }
}

/// Schmidt decomposition across `cut`, from the SVD of the coefficient
/// matrix. Each `basis_a` column has its first non-negligible component made
/// real positive (the phase is moved to the paired `basis_b` column) so the
/// output is reproducible when singular values are degenerate.
pub fn schmidt_decompose(psi: &PureState, cut: &Bipartition) -> Result<SchmidtDecomposition> {
    let (left, right) = cut.groups(psi.dims())?;
    let m = coefficient_matrix(psi, &left, &right);
    let svd = m.svd(true, true);
    let u = svd.u.expect("svd computed with u");
    let v_t = svd.v_t.expect("svd computed with v_t");
    let r = svd.singular_values.len();

    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[j]
            .total_cmp(&svd.singular_values[i])
            .then(i.cmp(&j))
    });

    let mut coeffs = Vec::with_capacity(r);
    let mut cols_a = Vec::with_capacity(r);
    let mut cols_b = Vec::with_capacity(r);
    for &k in &order {
        coeffs.push(svd.singular_values[k]);
        let mut a = u.column(k).into_owned();
        // M = U Σ V†, so the right factor of term k is the transposed row k of V†
        let mut b = v_t.row(k).transpose();
        let max = a.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        if let Some(first) = a.iter().find(|z| z.norm() > 1e-8 * max.max(f64::MIN_POSITIVE)) {
            let phase = first / first.norm();
            a.iter_mut().for_each(|z| *z /= phase);
            b.iter_mut().for_each(|z| *z *= phase);
        }
        cols_a.push(a);
        cols_b.push(b);
    }

    Ok(SchmidtDecomposition {
        coeffs,
        basis_a: DMatrix::from_columns(&cols_a),
        basis_b: DMatrix::from_columns(&cols_b),
        dims: psi.dims().clone(),
        left,
        right,
    })
}
