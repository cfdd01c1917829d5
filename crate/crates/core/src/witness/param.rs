use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::masklib::Masker;
use crate::qcore::{linalg, C64};

/// Number of real generator coefficients for a `d_a × d_b` joint space.
pub fn param_count(d_a: usize, d_b: usize) -> usize {
    let n = d_a * d_b;
    n * n
}

/// Hermitian generator `H` from `n²` reals: the first `n` fill the diagonal,
/// then each upper-triangular pair `(j, k)`, row by row, takes a real and an
/// imaginary part.
fn generator(params: &[f64], n: usize) -> DMatrix<C64> {
    let mut h = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
    for k in 0..n {
        h[(k, k)] = C64::new(params[k], 0.0);
    }
    let mut p = n;
    for j in 0..n {
        for k in j + 1..n {
            let z = C64::new(params[p], params[p + 1]);
            h[(j, k)] = z;
            h[(k, j)] = z.conj();
            p += 2;
        }
    }
    h
}

/// Columns of `U = exp(iH)` that correspond to the ancilla state `|0⟩_B`,
/// i.e. the images of `|a⟩|0⟩` for `a = 0..d_a`.
pub fn isometry_columns(params: &[f64], d_a: usize, d_b: usize) -> Result<DMatrix<C64>> {
    let n = d_a * d_b;
    if params.len() != n * n {
        return Err(Error::InvalidArgument(format!(
            "expected {} generator coefficients for dA={d_a}, dB={d_b}, got {}",
            n * n,
            params.len()
        )));
    }
    if n == 0 {
        return Err(Error::InvalidDims("masker dimensions must be positive".into()));
    }
    let (evals, vecs) = linalg::hermitian_eigen(&generator(params, n));
    let phases: Vec<C64> = evals.iter().map(|&l| C64::from_polar(1.0, l)).collect();
    Ok(DMatrix::from_fn(n, d_a, |row, a| {
        let col = a * d_b;
        (0..n).fold(C64::new(0.0, 0.0), |acc, m| {
            acc + vecs[(row, m)] * phases[m] * vecs[(col, m)].conj()
        })
    }))
}

/// The masker obtained by exponentiating the anti-Hermitian generator `iH`
/// and fixing the ancilla to `|0⟩_B`.
pub fn parameterize_isometry(params: &[f64], d_a: usize, d_b: usize) -> Result<Masker> {
    let iso = isometry_columns(params, d_a, d_b)?;
    Masker::new(iso, d_a, d_b)
}
