use nalgebra::{DMatrix, DVector};

use super::param::isometry_columns;
use crate::error::{Error, Result};
use crate::masklib::{span_reference_basis, Mode};
use crate::qcore::{PureState, C64};

/// Smooth stand-in for the masking defect, minimised by the optimizer:
/// squared Frobenius deviations of every marginal from the first image's,
/// plus (span mode) squared Frobenius norms of all cross marginals between
/// span-basis images.
#[derive(Clone, Debug)]
pub struct SurrogateObjective {
    d_a: usize,
    d_b: usize,
    inputs: Vec<DVector<C64>>,
    basis: Vec<DVector<C64>>,
}

fn coeffs(v: &DVector<C64>, d_a: usize, d_b: usize) -> DMatrix<C64> {
    DMatrix::from_fn(d_a, d_b, |a, b| v[a * d_b + b])
}

fn frob_sq(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

impl SurrogateObjective {
    pub fn new(states: &[PureState], d_b: usize, mode: Mode) -> Result<Self> {
        let first = states.first().ok_or(Error::EmptyStateList)?;
        let d_a = first.dim();
        if let Some(bad) = states.iter().position(|s| s.dim() != d_a) {
            return Err(Error::DimensionMismatch(format!(
                "state {bad} has dimension {}, expected {d_a}",
                states[bad].dim()
            )));
        }
        if d_b == 0 {
            return Err(Error::InvalidArgument("dB must be positive".into()));
        }
        let basis = match mode {
            Mode::Set => Vec::new(),
            Mode::Span => span_reference_basis(states),
        };
        Ok(Self {
            d_a,
            d_b,
            inputs: states.iter().map(|s| s.amps().clone()).collect(),
            basis,
        })
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn n_params(&self) -> usize {
        super::param_count(self.d_a, self.d_b)
    }

    pub fn value(&self, params: &[f64]) -> f64 {
        match isometry_columns(params, self.d_a, self.d_b) {
            Ok(iso) => self.value_at(&iso),
            Err(_) => f64::INFINITY,
        }
    }

    /// Objective at a given isometry matrix.
    pub fn value_at(&self, iso: &DMatrix<C64>) -> f64 {
        let (da, db) = (self.d_a, self.d_b);
        let mut total = 0.0;

        let mut reference: Option<(DMatrix<C64>, DMatrix<C64>)> = None;
        for psi in &self.inputs {
            let m = coeffs(&(iso * psi), da, db);
            let rho_a = &m * m.adjoint();
            let rho_b = m.transpose() * m.conjugate();
            match &reference {
                None => reference = Some((rho_a, rho_b)),
                Some((ra, rb)) => total += frob_sq(&(rho_a - ra)) + frob_sq(&(rho_b - rb)),
            }
        }

        if self.basis.len() > 1 {
            let ms: Vec<DMatrix<C64>> = self
                .basis
                .iter()
                .map(|w| coeffs(&(iso * w), da, db))
                .collect();
            for i in 0..ms.len() {
                for j in i + 1..ms.len() {
                    total += frob_sq(&(&ms[i] * ms[j].adjoint()));
                    total += frob_sq(&(ms[i].transpose() * ms[j].conjugate()));
                }
            }
        }
        total
    }

    /// Central-difference gradient with step `h`.
    pub fn gradient(&self, params: &[f64], h: f64) -> Vec<f64> {
        let mut x = params.to_vec();
        (0..x.len())
            .map(|i| {
                let orig = x[i];
                x[i] = orig + h;
                let fp = self.value(&x);
                x[i] = orig - h;
                let fm = self.value(&x);
                x[i] = orig;
                (fp - fm) / (2.0 * h)
            })
            .collect()
    }

    /// Five-point-stencil gradient, used to cross-check [`Self::gradient`].
    pub fn gradient_5pt(&self, params: &[f64], h: f64) -> Vec<f64> {
        let mut x = params.to_vec();
        (0..x.len())
            .map(|i| {
                let orig = x[i];
                let mut at = |t: f64| {
                    x[i] = orig + t;
                    self.value(&x)
                };
                let (f2p, f1p, f1m, f2m) = (at(2.0 * h), at(h), at(-h), at(-2.0 * h));
                x[i] = orig;
                (-f2p + 8.0 * f1p - 8.0 * f1m + f2m) / (12.0 * h)
            })
            .collect()
    }
}
