use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::qcore::{linalg, DensityMatrix, DimProfile, PureState, C64, ONE, ZERO};
use crate::DEFAULT_TOL;

/// An isometry from the input space into `H_A ⊗ H_B`, stored as the
/// `(d_A·d_B) × d_in` matrix whose column `k` is the image of `|k⟩`.
///
/// For the usual maskers `d_in == d_A`. The four-party construction groups
/// `A, E_A` into one side, so there the output side is larger than the input.
#[derive(Clone, Debug, PartialEq)]
pub struct Masker {
    iso: DMatrix<C64>,
    d_a: usize,
    d_b: usize,
}

impl Masker {
    pub fn new(iso: DMatrix<C64>, d_a: usize, d_b: usize) -> Result<Self> {
        Self::new_with_tol(iso, d_a, d_b, DEFAULT_TOL)
    }

    pub fn new_with_tol(iso: DMatrix<C64>, d_a: usize, d_b: usize, tol: f64) -> Result<Self> {
        if d_a == 0 || d_b == 0 {
            return Err(Error::InvalidDims("masker dimensions must be positive".into()));
        }
        if iso.nrows() != d_a * d_b {
            return Err(Error::DimensionMismatch(format!(
                "isometry has {} rows, expected dA*dB = {}",
                iso.nrows(),
                d_a * d_b
            )));
        }
        if iso.ncols() == 0 || iso.ncols() > iso.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "isometry has {} columns for {} rows",
                iso.ncols(),
                iso.nrows()
            )));
        }
        let deviation = linalg::isometry_deviation(&iso);
        if !(deviation <= tol) {
            return Err(Error::NotIsometry { deviation });
        }
        Ok(Self { iso, d_a, d_b })
    }

    pub(crate) fn from_parts(iso: DMatrix<C64>, d_a: usize, d_b: usize) -> Self {
        Self { iso, d_a, d_b }
    }

    pub fn iso(&self) -> &DMatrix<C64> {
        &self.iso
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    /// Dimension of the input space (number of columns).
    pub fn d_in(&self) -> usize {
        self.iso.ncols()
    }

    pub fn output_dims(&self) -> DimProfile {
        DimProfile::bipartite(self.d_a, self.d_b).expect("positive dims")
    }

    /// Image of the basis state `|k⟩`.
    pub fn image(&self, k: usize) -> PureState {
        PureState::from_parts(self.iso.column(k).into_owned(), self.output_dims())
    }

    pub fn images(&self) -> Vec<PureState> {
        (0..self.d_in()).map(|k| self.image(k)).collect()
    }

    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        if psi.dim() != self.d_in() {
            return Err(Error::DimensionMismatch(format!(
                "masker input dimension is {}, state has dimension {}",
                self.d_in(),
                psi.dim()
            )));
        }
        Ok(PureState::from_parts(&self.iso * psi.amps(), self.output_dims()))
    }

    /// `V ρ V†` for a density matrix on the input space.
    pub fn apply_density(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.d_in() {
            return Err(Error::DimensionMismatch(format!(
                "masker input dimension is {}, density matrix has dimension {}",
                self.d_in(),
                rho.dim()
            )));
        }
        Ok(DensityMatrix::from_parts(
            &self.iso * rho.mat() * self.iso.adjoint(),
            self.output_dims(),
        ))
    }
}

/// `V ψ`.
pub fn apply_masker(v: &Masker, psi: &PureState) -> Result<PureState> {
    v.apply(psi)
}

/// The masker `|k⟩|b⟩ ↦ |k⟩|k⟩` on a `d`-level system.
pub fn diagonal_masker(d: usize) -> Result<Masker> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!(
            "diagonal masker needs d >= 2, got {d}"
        )));
    }
    let mut iso = DMatrix::from_element(d * d, d, ZERO);
    for k in 0..d {
        iso[(k * d + k, k)] = ONE;
    }
    Ok(Masker::from_parts(iso, d, d))
}

/// Masker whose `k`-th column is `images[k]`. The images must be bipartite,
/// share one profile and be orthonormal within `1e-10`.
pub fn masker_from_images(images: &[PureState]) -> Result<Masker> {
    let first = images.first().ok_or(Error::EmptyStateList)?;
    let dims = first.dims();
    if dims.num_factors() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "images must be bipartite, got profile {:?}",
            dims.factors()
        )));
    }
    if let Some(bad) = images.iter().position(|s| s.dims() != dims) {
        return Err(Error::DimensionMismatch(format!(
            "image {bad} has profile {:?}, expected {:?}",
            images[bad].dims().factors(),
            dims.factors()
        )));
    }
    let cols: Vec<DVector<C64>> = images.iter().map(|s| s.amps().clone()).collect();
    let iso = DMatrix::from_columns(&cols);
    let gram = iso.adjoint() * &iso;
    for i in 0..gram.nrows() {
        for j in 0..gram.ncols() {
            let expect = if i == j { 1.0 } else { 0.0 };
            let dev = (gram[(i, j)] - C64::new(expect, 0.0)).norm();
            if dev > DEFAULT_TOL {
                return Err(Error::NotOrthonormal(format!(
                    "<image {i}|image {j}> deviates from {expect} by {dev:e}"
                )));
            }
        }
    }
    let (d_a, d_b) = (dims.factors()[0], dims.factors()[1]);
    Masker::new(iso, d_a, d_b)
}

/// `Σ_k r_k e^{iφ_k} |k⟩`; the moduli must satisfy `Σ r_k² = 1` within `1e-10`.
pub fn hyperdisk_state(r: &[f64], phi: &[f64]) -> Result<PureState> {
    if r.is_empty() {
        return Err(Error::InvalidArgument("empty amplitude profile".into()));
    }
    if r.len() != phi.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} amplitudes but {} phases",
            r.len(),
            phi.len()
        )));
    }
    if let Some(bad) = r.iter().position(|&x| !(x >= 0.0) || !x.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "amplitude r[{bad}] = {} is not a nonnegative real",
            r[bad]
        )));
    }
    if let Some(bad) = phi.iter().position(|p| !p.is_finite()) {
        return Err(Error::InvalidArgument(format!("phase {bad} is not finite")));
    }
    let norm_sq: f64 = r.iter().map(|x| x * x).sum();
    if (norm_sq - 1.0).abs() > DEFAULT_TOL {
        return Err(Error::NotNormalized {
            norm: norm_sq.sqrt(),
        });
    }
    let amps = DVector::from_iterator(
        r.len(),
        r.iter().zip(phi).map(|(&rk, &pk)| C64::from_polar(rk, pk)),
    );
    PureState::new_with_tol(amps, DimProfile::single(r.len())?, DEFAULT_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{partial_trace, tensor, trace_distance};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn bell(sign: f64) -> PureState {
        PureState::new(
            DVector::from_vec(vec![c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(sign * FRAC_1_SQRT_2)]),
            DimProfile::bipartite(2, 2).unwrap(),
        )
        .unwrap()
    }

    fn close(a: &PureState, b: &PureState, tol: f64) -> bool {
        (a.amps() - b.amps()).norm() < tol
    }

    #[test]
    fn diagonal_masker_columns() {
        let v = diagonal_masker(2).unwrap();
        let zero = PureState::ket(2, 0).unwrap();
        let one = PureState::ket(2, 1).unwrap();
        assert!(close(&v.apply(&zero).unwrap(), &tensor(&zero, &zero), 1e-15));
        assert!(close(&v.apply(&one).unwrap(), &tensor(&one, &one), 1e-15));
        assert!(matches!(diagonal_masker(1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn diagonal_masker_on_plus_is_bell() {
        let v = diagonal_masker(2).unwrap();
        let plus = hyperdisk_state(&[FRAC_1_SQRT_2; 2], &[0.0, 0.0]).unwrap();
        assert!(close(&v.apply(&plus).unwrap(), &bell(1.0), 1e-15));
    }

    #[test]
    fn qutrit_disk_marginals_maximally_mixed() {
        let v = diagonal_masker(3).unwrap();
        let r = [1.0 / 3f64.sqrt(); 3];
        let mixed = DensityMatrix::maximally_mixed(DimProfile::single(3).unwrap());
        for phi in [0.0, 0.4, 1.9, -2.7] {
            let img = v.apply(&hyperdisk_state(&r, &[0.0, phi, 0.0]).unwrap()).unwrap();
            for keep in [0usize, 1] {
                let m = partial_trace(&img, &[keep]).unwrap();
                assert!(trace_distance(&m, &mixed).unwrap() < 1e-14);
            }
        }
    }

    #[test]
    fn from_images_matches_diagonal() {
        let p00 = PureState::basis(DimProfile::bipartite(2, 2).unwrap(), 0).unwrap();
        let p11 = PureState::basis(DimProfile::bipartite(2, 2).unwrap(), 3).unwrap();
        let v = masker_from_images(&[p00, p11]).unwrap();
        assert_eq!(v, diagonal_masker(2).unwrap());
    }

    #[test]
    fn classical_bit_images() {
        let v = masker_from_images(&[bell(1.0), bell(-1.0)]).unwrap();
        let one = PureState::ket(2, 1).unwrap();
        assert!(close(&v.apply(&one).unwrap(), &bell(-1.0), 1e-15));
    }

    #[test]
    fn from_images_errors() {
        assert!(matches!(masker_from_images(&[]), Err(Error::EmptyStateList)));
        let p00 = PureState::basis(DimProfile::bipartite(2, 2).unwrap(), 0).unwrap();
        assert!(matches!(
            masker_from_images(&[p00.clone(), p00.clone()]),
            Err(Error::NotOrthonormal(_))
        ));
        let other = PureState::basis(DimProfile::bipartite(2, 3).unwrap(), 4).unwrap();
        assert!(matches!(
            masker_from_images(&[p00, other]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn apply_is_linear() {
        let v = masker_from_images(&[bell(1.0), bell(-1.0)]).unwrap();
        let a = hyperdisk_state(&[0.6, 0.8], &[0.3, -1.0]).unwrap();
        let b = hyperdisk_state(&[0.8, 0.6], &[2.0, 0.5]).unwrap();
        let (alpha, beta) = (C64::new(0.3, 0.4), C64::new(-0.5, 0.2));
        let combo = a.amps() * alpha + b.amps() * beta;
        let lhs = v.iso() * &combo;
        let rhs = v.apply(&a).unwrap().amps() * alpha + v.apply(&b).unwrap().amps() * beta;
        assert!((lhs - rhs).norm() < 1e-15);
        assert!(matches!(
            v.apply(&PureState::ket(3, 0).unwrap()),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn hyperdisk_examples() {
        let s = FRAC_1_SQRT_2;
        let plus = hyperdisk_state(&[s, s], &[0.0, 0.0]).unwrap();
        assert!((plus.amps()[1] - c(s)).norm() < 1e-16);
        let minus = hyperdisk_state(&[s, s], &[0.0, PI]).unwrap();
        assert!((minus.amps()[1] - c(-s)).norm() < 1e-15);
        let t = 1.0 / 3f64.sqrt();
        let q = hyperdisk_state(&[t, t, t], &[0.0, FRAC_PI_2, PI]).unwrap();
        let expect = [C64::new(t, 0.0), C64::new(0.0, t), C64::new(-t, 0.0)];
        for (a, b) in q.amps().iter().zip(expect) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!(matches!(
            hyperdisk_state(&[0.5, 0.5], &[0.0, 0.0]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(hyperdisk_state(&[1.0], &[0.0, 0.0]).is_err());
    }

    #[test]
    fn rejects_non_isometry() {
        let iso = DMatrix::from_element(4, 2, c(0.5));
        assert!(matches!(Masker::new(iso, 2, 2), Err(Error::NotIsometry { .. })));
    }
}
