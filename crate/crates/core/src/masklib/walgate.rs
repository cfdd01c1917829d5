use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::optim::nelder_mead;
use crate::qcore::reduce::require_bipartite;
use crate::qcore::{PureState, C64};

const RESIDUAL_TARGET: f64 = 1e-12;
const RESTARTS: usize = 20;
const DEFAULT_SEED: u64 = 0x5eed_0007;

/// Two orthogonal states written over a common qubit basis on `B`:
/// `Ψ0 = μ⊗b0 + ν⊗b1`, `Ψ1 = μ⊥⊗b0 + ν⊥⊗b1` with `⟨μ|μ⊥⟩ = ⟨ν|ν⊥⟩ = 0`.
/// The `H_A` vectors are unnormalized.
#[derive(Clone, Debug)]
pub struct WalgateDecomposition {
    pub basis_b: [DVector<C64>; 2],
    pub mu: DVector<C64>,
    pub nu: DVector<C64>,
    pub mu_perp: DVector<C64>,
    pub nu_perp: DVector<C64>,
    /// `|⟨μ|μ⊥⟩|² + |⟨ν|ν⊥⟩|²` at the returned basis.
    pub residual: f64,
}

impl WalgateDecomposition {
    /// Rebuilds `(Ψ0, Ψ1)` as raw amplitude vectors.
    pub fn reconstruct(&self) -> (DVector<C64>, DVector<C64>) {
        let kron = crate::qcore::linalg::kron_vec;
        let [b0, b1] = &self.basis_b;
        (
            kron(&self.mu, b0) + kron(&self.nu, b1),
            kron(&self.mu_perp, b0) + kron(&self.nu_perp, b1),
        )
    }
}

struct Split {
    m0: DMatrix<C64>,
    m1: DMatrix<C64>,
}

impl Split {
    /// `μ_j = (I ⊗ ⟨b_j|) Ψ`.
    fn components(&self, b0: &DVector<C64>, b1: &DVector<C64>) -> [DVector<C64>; 4] {
        let (c0, c1) = (b0.map(|z| z.conj()), b1.map(|z| z.conj()));
        [&self.m0 * &c0, &self.m0 * &c1, &self.m1 * &c0, &self.m1 * &c1]
    }

    fn residual(&self, b0: &DVector<C64>, b1: &DVector<C64>) -> f64 {
        let [mu, nu, mu_p, nu_p] = self.components(b0, b1);
        mu.dotc(&mu_p).norm_sqr() + nu.dotc(&nu_p).norm_sqr()
    }
}

/// Qubit basis from two Bloch angles and a relative phase on the second vector.
fn basis_from_angles(p: &[f64]) -> (DVector<C64>, DVector<C64>) {
    let (theta, phi, gamma) = (p[0], p[1], p[2]);
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let b0 = DVector::from_vec(vec![C64::new(c, 0.0), C64::from_polar(s, phi)]);
    let g = C64::from_polar(1.0, gamma);
    let b1 = DVector::from_vec(vec![C64::from_polar(-s, -phi) * g, C64::new(c, 0.0) * g]);
    (b0, b1)
}

fn canonical_bases() -> [(DVector<C64>, DVector<C64>); 3] {
    let s = FRAC_1_SQRT_2;
    let v = |a: C64, b: C64| DVector::from_vec(vec![a, b]);
    let r = |x: f64| C64::new(x, 0.0);
    [
        (v(r(1.0), r(0.0)), v(r(0.0), r(1.0))),
        (v(r(s), r(s)), v(r(s), r(-s))),
        (v(r(s), C64::new(0.0, s)), v(r(s), C64::new(0.0, -s))),
    ]
}

/// Decomposition of two orthogonal states on `H_A ⊗ C²` with a default seed.
pub fn walgate_decompose(psi0: &PureState, psi1: &PureState) -> Result<WalgateDecomposition> {
    walgate_decompose_seeded(psi0, psi1, DEFAULT_SEED)
}

/// Finds a qubit basis on `B` for which the paired `H_A` components are
/// orthogonal.
///
/// The computational, `|±⟩` and `|±i⟩` bases are tried first; among those
/// that already meet the residual target, the one with the most vanishing
/// components wins (earlier in that list on ties). Otherwise a multi-start
/// Nelder–Mead search over the Bloch angles and relative phase is run with
/// restarts seeded from `seed`.
pub fn walgate_decompose_seeded(
    psi0: &PureState,
    psi1: &PureState,
    seed: u64,
) -> Result<WalgateDecomposition> {
    require_bipartite(psi0.dims())?;
    if psi0.dims() != psi1.dims() {
        return Err(Error::DimensionMismatch(format!(
            "profiles {:?} and {:?} differ",
            psi0.dims().factors(),
            psi1.dims().factors()
        )));
    }
    let d_a = psi0.dims().factors()[0];
    if psi0.dims().factors()[1] != 2 {
        return Err(Error::DimensionMismatch(format!(
            "B must be a qubit, got dimension {}",
            psi0.dims().factors()[1]
        )));
    }
    let overlap = psi0.inner(psi1)?.norm();
    if overlap > crate::DEFAULT_TOL {
        return Err(Error::NotOrthogonal { overlap });
    }
    let split = Split {
        m0: DMatrix::from_fn(d_a, 2, |a, b| psi0.amps()[2 * a + b]),
        m1: DMatrix::from_fn(d_a, 2, |a, b| psi1.amps()[2 * a + b]),
    };

    let zero_tol = 1e-12;
    let mut chosen: Option<(usize, f64, DVector<C64>, DVector<C64>)> = None;
    for (b0, b1) in canonical_bases() {
        let res = split.residual(&b0, &b1);
        if res >= RESIDUAL_TARGET {
            continue;
        }
        let zeros = split
            .components(&b0, &b1)
            .iter()
            .filter(|v| v.norm() < zero_tol)
            .count();
        if chosen.as_ref().is_none_or(|(z, ..)| zeros > *z) {
            chosen = Some((zeros, res, b0, b1));
        }
    }

    let (residual, b0, b1) = match chosen {
        Some((_, res, b0, b1)) => (res, b0, b1),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut best: Option<(f64, Vec<f64>)> = None;
            for _ in 0..RESTARTS {
                let start = [
                    rng.random_range(0.0..PI),
                    rng.random_range(-PI..PI),
                    rng.random_range(-PI..PI),
                ];
                let m = nelder_mead(
                    |p| {
                        let (b0, b1) = basis_from_angles(p);
                        split.residual(&b0, &b1)
                    },
                    &start,
                    0.3,
                    0.0,
                    1e-28,
                    4000,
                );
                if best.as_ref().is_none_or(|(v, _)| m.value < *v) {
                    best = Some((m.value, m.x));
                }
                if best.as_ref().is_some_and(|(v, _)| *v < 1e-24) {
                    break;
                }
            }
            let (res, x) = best.expect("at least one restart");
            if !(res < RESIDUAL_TARGET) {
                return Err(Error::SearchFailed {
                    restarts: RESTARTS,
                    residual: res,
                });
            }
            let (b0, b1) = basis_from_angles(&x);
            (res, b0, b1)
        }
    };

    let [mu, nu, mu_perp, nu_perp] = split.components(&b0, &b1);
    Ok(WalgateDecomposition {
        basis_b: [b0, b1],
        mu,
        nu,
        mu_perp,
        nu_perp,
        residual,
    })
}
