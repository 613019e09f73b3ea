//! Dense helpers over `nalgebra` for the collocation systems.

use nalgebra::{DMatrix, DVector};

/// `M[i, j] = exp(-gamma (x_i - c_j)²)`.
pub fn gaussian_collocation(points: &[f64], centres: &[f64], gamma: f64) -> DMatrix<f64> {
    DMatrix::from_fn(points.len(), centres.len(), |i, j| {
        (-gamma * (points[i] - centres[j]).powi(2)).exp()
    })
}

/// Largest and smallest singular value, where the smallest is taken over the
/// column space: a matrix with fewer rows than columns has a zero one.
pub fn extreme_singular_values(m: &DMatrix<f64>) -> (f64, f64) {
    if m.ncols() == 0 || m.nrows() == 0 {
        return (0.0, 0.0);
    }
    let sv = m.singular_values();
    let max = sv.max();
    let min = if m.nrows() < m.ncols() { 0.0 } else { sv.min() };
    (max, min)
}

/// Minimum-norm least-squares solution of `m x = b`.
pub fn least_squares(m: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let svd = m.clone().svd(true, true);
    let cutoff = f64::EPSILON * svd.singular_values.max() * m.nrows().max(m.ncols()) as f64;
    svd.solve(b, cutoff)
        .expect("both singular factors were requested")
}

/// Orthonormal basis of the numerical null space `{σ ≤ rel_tol σ_max}`,
/// returned as the columns of a matrix, together with `σ_min / σ_max`.
pub fn null_space(m: &DMatrix<f64>, rel_tol: f64) -> (DMatrix<f64>, f64) {
    let n = m.ncols();
    if m.nrows() == 0 {
        return (DMatrix::identity(n, n), 0.0);
    }
    // Pad to square so the SVD returns a full set of right singular vectors.
    let rows = m.nrows().max(n);
    let mut padded = DMatrix::zeros(rows, n);
    padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let sigma = &svd.singular_values;
    let max = sigma.max();
    if max == 0.0 {
        return (DMatrix::identity(n, n), 0.0);
    }
    let ratio = sigma.min() / max;
    let keep: Vec<usize> = (0..n).filter(|&i| sigma[i] <= rel_tol * max).collect();
    let mut basis = DMatrix::zeros(n, keep.len());
    for (col, &i) in keep.iter().enumerate() {
        basis.set_column(col, &v_t.row(i).transpose());
    }
    (basis, ratio)
}
