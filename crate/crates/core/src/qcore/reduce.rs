use nalgebra::DMatrix;

use super::{DensityMatrix, DimProfile, PureState, Side, C64, ZERO};
use crate::error::{Error, Result};

/// Objects that can be reduced to a density matrix on a subset of factors.
pub trait Reduce {
    fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix>;
}

/// Partial trace over every factor not in `keep`.
pub fn partial_trace<S: Reduce + ?Sized>(state: &S, keep: &[usize]) -> Result<DensityMatrix> {
    state.reduce(keep)
}

impl Reduce for PureState {
    fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let (kept, _) = self.dims().split_factors(keep)?;
        let mat = cross_marginal_keep(self, self, &kept)?;
        Ok(DensityMatrix::from_parts(mat, self.dims().select(&kept)?))
    }
}

impl Reduce for DensityMatrix {
    fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let (kept, traced) = self.dims().split_factors(keep)?;
        let table = self.dims().index_table(&kept, &traced);
        let n = table.len();
        let rho = self.mat();
        let mut out = DMatrix::from_element(n, n, ZERO);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = table[i]
                    .iter()
                    .zip(&table[j])
                    .fold(ZERO, |acc, (&a, &b)| acc + rho[(a, b)]);
            }
        }
        Ok(DensityMatrix::from_parts(out, self.dims().select(&kept)?))
    }
}

/// Coefficient matrix `M[k, t] = ψ[index(k, t)]` with rows over the kept
/// factors and columns over the traced ones.
pub(crate) fn coefficient_matrix(
    psi: &PureState,
    kept: &[usize],
    traced: &[usize],
) -> DMatrix<C64> {
    let table = psi.dims().index_table(kept, traced);
    let rows = table.len();
    let cols = table.first().map_or(0, Vec::len);
    let amps = psi.amps();
    DMatrix::from_fn(rows, cols, |k, t| amps[table[k][t]])
}

/// `Tr_traced(|Ψ0⟩⟨Ψ1|)` where `traced` is the complement of `keep`.
pub fn cross_marginal_keep(
    psi0: &PureState,
    psi1: &PureState,
    keep: &[usize],
) -> Result<DMatrix<C64>> {
    if psi0.dims() != psi1.dims() {
        return Err(Error::DimensionMismatch(format!(
            "cross marginal of profiles {:?} and {:?}",
            psi0.dims().factors(),
            psi1.dims().factors()
        )));
    }
    let (kept, traced) = psi0.dims().split_factors(keep)?;
    let m0 = coefficient_matrix(psi0, &kept, &traced);
    let m1 = coefficient_matrix(psi1, &kept, &traced);
    Ok(contract_rows(&m0, &m1))
}

/// `out[i, j] = Σ_t m0[i, t] · conj(m1[j, t])`, summed in a fixed order.
pub(crate) fn contract_rows(m0: &DMatrix<C64>, m1: &DMatrix<C64>) -> DMatrix<C64> {
    let n = m0.nrows();
    let cols = m0.ncols();
    DMatrix::from_fn(n, n, |i, j| {
        (0..cols).fold(ZERO, |acc, t| acc + m0[(i, t)] * m1[(j, t)].conj())
    })
}

/// `Tr_X(|Ψ0⟩⟨Ψ1|)` for a bipartite profile, where `traced` names `X`.
/// The result acts on the other side and is in general not Hermitian.
pub fn cross_marginal(psi0: &PureState, psi1: &PureState, traced: Side) -> Result<DMatrix<C64>> {
    require_bipartite(psi0.dims())?;
    cross_marginal_keep(psi0, psi1, &[traced.other().index()])
}

pub(crate) fn require_bipartite(dims: &DimProfile) -> Result<()> {
    if dims.num_factors() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected a bipartite profile, got {:?}",
            dims.factors()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::linalg::max_abs;
    use nalgebra::DVector;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn two_qubit(amps: [f64; 4]) -> PureState {
        PureState::new(
            DVector::from_iterator(4, amps.iter().map(|&a| c(a))),
            DimProfile::bipartite(2, 2).unwrap(),
        )
        .unwrap()
    }

    fn assert_mat(m: &DMatrix<C64>, expect: &[f64]) {
        let e = DMatrix::from_row_slice(m.nrows(), m.ncols(), expect).map(c);
        assert!(max_abs(&(m - e)) < 1e-15, "{m}");
    }

    const S: f64 = FRAC_1_SQRT_2;

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let bell = two_qubit([S, 0.0, 0.0, S]);
        let rho = partial_trace(&bell, &[0]).unwrap();
        assert_mat(rho.mat(), &[0.5, 0.0, 0.0, 0.5]);
    }

    #[test]
    fn product_marginal() {
        let s = two_qubit([0.0, 1.0, 0.0, 0.0]);
        let rho = partial_trace(&s, &[0]).unwrap();
        assert_mat(rho.mat(), &[1.0, 0.0, 0.0, 0.0]);
        let rho_b = partial_trace(&s, &[1]).unwrap();
        assert_mat(rho_b.mat(), &[0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn separable_keep_b_gives_plus() {
        let s = two_qubit([S, S, 0.0, 0.0]);
        let rho = partial_trace(&s, &[1]).unwrap();
        assert_mat(rho.mat(), &[0.5, 0.5, 0.5, 0.5]);
    }

    #[test]
    fn invalid_keep_sets() {
        let s = two_qubit([S, 0.0, 0.0, S]);
        assert!(matches!(partial_trace(&s, &[]), Err(Error::InvalidFactors(_))));
        assert!(matches!(partial_trace(&s, &[0, 1]), Err(Error::InvalidFactors(_))));
        assert!(matches!(partial_trace(&s, &[2]), Err(Error::InvalidFactors(_))));
    }

    #[test]
    fn cross_marginal_examples() {
        let p00 = two_qubit([1.0, 0.0, 0.0, 0.0]);
        let p11 = two_qubit([0.0, 0.0, 0.0, 1.0]);
        assert_mat(&cross_marginal(&p00, &p11, Side::B).unwrap(), &[0.0; 4]);

        let phi_p = two_qubit([S, 0.0, 0.0, S]);
        let phi_m = two_qubit([S, 0.0, 0.0, -S]);
        assert_mat(
            &cross_marginal(&phi_p, &phi_p, Side::B).unwrap(),
            &[0.5, 0.0, 0.0, 0.5],
        );
        // brute force: Tr_B of the explicit 4x4 outer product
        let outer = phi_p.amps() * phi_m.amps().adjoint();
        let brute = DMatrix::from_fn(2, 2, |i, j| outer[(2 * i, 2 * j)] + outer[(2 * i + 1, 2 * j + 1)]);
        let cm = cross_marginal(&phi_p, &phi_m, Side::B).unwrap();
        assert!(max_abs(&(&cm - brute)) < 1e-15);
        assert_mat(&cm, &[0.5, 0.0, 0.0, -0.5]);
    }

    #[test]
    fn cross_marginal_rejects_mismatch() {
        let a = two_qubit([1.0, 0.0, 0.0, 0.0]);
        let b = PureState::basis(DimProfile::bipartite(2, 3).unwrap(), 0).unwrap();
        assert!(matches!(
            cross_marginal(&a, &b, Side::A),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn density_partial_trace_agrees_with_pure() {
        let s = PureState::new(
            DVector::from_vec(vec![c(0.5), c(0.5), C64::new(0.0, 0.5), c(-0.5)]),
            DimProfile::bipartite(2, 2).unwrap(),
        )
        .unwrap();
        for keep in [[0usize], [1]] {
            let a = partial_trace(&s, &keep).unwrap();
            let b = partial_trace(&s.projector(), &keep).unwrap();
            assert!(max_abs(&(a.mat() - b.mat())) < 1e-15);
        }
    }
}
