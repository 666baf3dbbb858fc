use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending; column `k` of the
/// returned matrix is the eigenvector for value `k`.
pub(crate) fn hermitian_eigen(h: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(h.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Ascending eigenvalues only.
pub(crate) fn hermitian_eigenvalues(h: &DMatrix<Complex64>) -> Vec<f64> {
    let mut v: Vec<f64> = h.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `ψ ← exp(−i H dt) ψ` given the eigendecomposition of `H`.
pub(crate) fn apply_exponential(
    values: &[f64],
    vectors: &DMatrix<Complex64>,
    dt: f64,
    psi: &mut [Complex64],
) {
    let v = DVector::from_column_slice(psi);
    let mut coeffs = vectors.ad_mul(&v);
    for (c, &e) in coeffs.iter_mut().zip(values) {
        *c *= Complex64::from_polar(1.0, -e * dt);
    }
    let out = vectors * coeffs;
    psi.copy_from_slice(out.as_slice());
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_x_rotation() {
        let x = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let (vals, vecs) = hermitian_eigen(&x);
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        let mut psi = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let t = 0.3;
        apply_exponential(&vals, &vecs, t, &mut psi);
        assert!((psi[0] - Complex64::new(t.cos(), 0.0)).norm() < 1e-14);
        assert!((psi[1] - Complex64::new(0.0, -t.sin())).norm() < 1e-14);
    }
}
