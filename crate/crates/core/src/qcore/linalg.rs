//! Small dense helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{C64, ZERO};

pub fn kron_vec(u: &DVector<C64>, v: &DVector<C64>) -> DVector<C64> {
    let n = v.len();
    DVector::from_fn(u.len() * n, |i, _| u[i / n] * v[i % n])
}

pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending and
/// eigenvectors as the matching columns. Only the Hermitian part is used.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let h = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Largest singular value.
pub fn operator_norm(m: &DMatrix<C64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().iter().fold(0.0f64, |acc, &s| acc.max(s))
}

/// Frobenius norm squared.
pub fn frobenius_sq(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Max entry of `|V†V - I|`.
pub fn isometry_deviation(v: &DMatrix<C64>) -> f64 {
    let g = v.adjoint() * v;
    let n = g.nrows();
    max_abs(&(g - DMatrix::<C64>::identity(n, n)))
}

/// Modified Gram–Schmidt with column pivoting: at every step the remaining
/// vector with the largest residual norm is taken next (ties go to the lower
/// index). Directions whose residual falls below `drop_tol` are discarded.
pub fn orthonormalize_pivoted(vectors: &[DVector<C64>], drop_tol: f64) -> Vec<DVector<C64>> {
    let mut residual: Vec<DVector<C64>> = vectors.to_vec();
    let mut alive: Vec<bool> = vec![true; residual.len()];
    let mut basis: Vec<DVector<C64>> = Vec::new();
    loop {
        let mut best: Option<(usize, f64)> = None;
        for (i, r) in residual.iter().enumerate() {
            if !alive[i] {
                continue;
            }
            let n = r.norm();
            if best.is_none_or(|(_, bn)| n > bn) {
                best = Some((i, n));
            }
        }
        let Some((pivot, norm)) = best else { break };
        if norm < drop_tol {
            break;
        }
        alive[pivot] = false;
        let q = residual[pivot].unscale(norm);
        for (i, r) in residual.iter_mut().enumerate() {
            if alive[i] {
                let proj = q.dotc(r);
                r.axpy(-proj, &q, C64::new(1.0, 0.0));
            }
        }
        basis.push(q);
    }
    basis
}

/// Extends orthonormal columns to a full `n × n` unitary. The given columns
/// come first; the rest are drawn from the standard basis by pivoted
/// Gram–Schmidt.
pub fn complete_unitary(cols: &DMatrix<C64>) -> DMatrix<C64> {
    let n = cols.nrows();
    let k = cols.ncols();
    let mut basis: Vec<DVector<C64>> = (0..k).map(|j| cols.column(j).into_owned()).collect();
    let mut candidates: Vec<DVector<C64>> = (0..n)
        .map(|i| {
            let mut e = DVector::from_element(n, ZERO);
            e[i] = C64::new(1.0, 0.0);
            for q in &basis {
                let p = q.dotc(&e);
                e.axpy(-p, q, C64::new(1.0, 0.0));
            }
            e
        })
        .collect();
    // second projection pass for stability
    for e in &mut candidates {
        for q in &basis {
            let p = q.dotc(e);
            e.axpy(-p, q, C64::new(1.0, 0.0));
        }
    }
    let extra = orthonormalize_pivoted(&candidates, 1e-8);
    basis.extend(extra.into_iter().take(n - k));
    DMatrix::from_columns(&basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pivoted_gram_schmidt_drops_dependent() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = vec![
            DVector::from_vec(vec![C64::new(s, 0.0), C64::new(s, 0.0)]),
            DVector::from_vec(vec![C64::new(2.0 * s, 0.0), C64::new(2.0 * s, 0.0)]),
        ];
        let b = orthonormalize_pivoted(&v, 1e-10);
        assert_eq!(b.len(), 1);
        assert!((b[0].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn completion_is_unitary() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let col = DMatrix::from_column_slice(3, 1, &[C64::new(s, 0.0), C64::new(0.0, s), ZERO]);
        let u = complete_unitary(&col);
        assert_eq!(u.ncols(), 3);
        assert!(isometry_deviation(&u) < 1e-14);
        assert_eq!(u.column(0), col.column(0));
    }

    #[test]
    fn eigen_sorted() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![
            C64::new(0.7, 0.0),
            C64::new(-0.2, 0.0),
            C64::new(0.5, 0.0),
        ]));
        let (vals, _) = hermitian_eigen(&m);
        assert_eq!(vals.len(), 3);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        assert!((vals[0] + 0.2).abs() < 1e-15);
    }
}
