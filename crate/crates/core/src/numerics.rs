//! Dense small-matrix primitives: pseudoinverse, norms and symmetric
//! eigendecomposition.
//!
//! Everything here works on `nalgebra` dynamic matrices. The systems this
//! crate deals with have a handful of states, so no effort is spent on
//! blocking or sparsity.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Relative singular value cutoff used by [`pinv`].
pub const PINV_RCOND: f64 = 1e-12;

/// Tolerance on `|s_ij - s_ji|`, relative to the largest entry magnitude.
pub const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VecNorm {
    One,
    Two,
    Inf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InducedNorm {
    /// Maximum absolute column sum.
    One,
    /// Maximum absolute row sum.
    Inf,
}

/// Eigenpairs of a real symmetric matrix, eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vector,
    /// Orthonormal eigenvectors stored column-wise, matching `eigenvalues`.
    pub eigenvectors: Matrix,
}

impl SpectralDecomposition {
    /// `V Λ Vᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let v = &self.eigenvectors;
        v * Matrix::from_diagonal(&self.eigenvalues) * v.transpose()
    }
}

/// Singular triplets `(σ, u, v)` with `σ > 0`, read off the symmetric
/// eigendecomposition of `[[0, M], [Mᵀ, 0]]`, whose eigenpairs are
/// `±σ` with vectors `(u, ±v)/√2`.
///
/// Used instead of a direct SVD because the Golub–Kahan routine available
/// returns inaccurate factors for some exactly rank-deficient inputs.
fn singular_triplets(m: &Matrix) -> Vec<(f64, Vector, Vector)> {
    let (rows, cols) = m.shape();
    let mut jw = Matrix::zeros(rows + cols, rows + cols);
    jw.view_mut((0, rows), (rows, cols)).copy_from(m);
    jw.view_mut((rows, 0), (cols, rows))
        .copy_from(&m.transpose());
    let eig = SymmetricEigen::new(jw);
    let scale = std::f64::consts::SQRT_2;
    eig.eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > 0.0)
        .map(|(k, &l)| {
            let w = eig.eigenvectors.column(k);
            (l, w.rows(0, rows) * scale, w.rows(rows, cols) * scale)
        })
        .collect()
}

/// Moore–Penrose pseudoinverse from the singular triplets.
///
/// Singular values below `1e-12 · max(rows, cols) · σ_max` are treated as zero,
/// which makes the routine total: a zero matrix maps to a zero matrix of the
/// transposed shape.
pub fn pinv(m: &Matrix) -> Matrix {
    let (rows, cols) = m.shape();
    let mut out = Matrix::zeros(cols, rows);
    if m.is_empty() {
        return out;
    }
    let triplets = singular_triplets(m);
    let sigma_max = triplets.iter().map(|t| t.0).fold(0.0, f64::max);
    let cutoff = PINV_RCOND * rows.max(cols) as f64 * sigma_max;
    for (s, u, v) in triplets.iter().filter(|t| t.0 > cutoff) {
        out += v * u.transpose() / *s;
    }
    out
}

pub fn vec_norm(x: &Vector, p: VecNorm) -> f64 {
    match p {
        VecNorm::One => x.iter().map(|v| v.abs()).sum(),
        VecNorm::Two => x.norm(),
        VecNorm::Inf => x.iter().fold(0.0, |acc, v| acc.max(v.abs())),
    }
}

pub fn induced_norm(m: &Matrix, p: InducedNorm) -> f64 {
    match p {
        InducedNorm::One => m
            .column_iter()
            .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max),
        InducedNorm::Inf => m
            .row_iter()
            .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max),
    }
}

/// Largest singular value (induced 2-norm).
pub fn spectral_norm(m: &Matrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    singular_triplets(m).iter().map(|t| t.0).fold(0.0, f64::max)
}

fn check_symmetric(s: &Matrix) -> Result<()> {
    if !s.is_square() {
        return Err(Error::Dimension(format!(
            "expected a square matrix, got {}x{}",
            s.nrows(),
            s.ncols()
        )));
    }
    let scale = s.amax().max(1.0);
    let asymmetry = (s - s.transpose()).amax();
    if asymmetry > SYMMETRY_TOL * scale {
        return Err(Error::NotSymmetric { asymmetry });
    }
    Ok(())
}

/// Symmetric eigendecomposition with eigenvalues sorted descending.
pub fn sym_eig(s: &Matrix) -> Result<SpectralDecomposition> {
    check_symmetric(s)?;
    let sym = (s + s.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);

    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let n = order.len();
    let eigenvalues = Vector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut eigenvectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

pub fn lambda_max_sym(s: &Matrix) -> Result<f64> {
    Ok(sym_eig(s)?.eigenvalues[0])
}

/// Elementwise sign with `sign(0) = 0`.
pub fn sign(z: f64) -> f64 {
    if z > 0.0 {
        1.0
    } else if z < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Relative Frobenius distance `‖a - b‖_F / max(1, ‖b‖_F)`.
pub fn rel_frobenius(a: &Matrix, b: &Matrix) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

/// `‖M M† − I‖_max ≤ tol` with the pseudoinverse computed internally.
pub fn has_full_row_rank(m: &Matrix, tol: f64) -> bool {
    if m.nrows() > m.ncols() || m.is_empty() {
        return false;
    }
    let residual = m * pinv(m) - Matrix::identity(m.nrows(), m.nrows());
    residual.amax() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinv_identity_and_zero_row() {
        let i2 = Matrix::identity(2, 2);
        assert!(rel_frobenius(&pinv(&i2), &i2) < 1e-14);

        let d = Matrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.0]);
        let expect = Matrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.0]);
        assert!((pinv(&d) - expect).amax() < 1e-15);
    }

    #[test]
    fn pinv_of_zero_matrix_is_zero() {
        let z = Matrix::zeros(2, 3);
        let p = pinv(&z);
        assert_eq!(p.shape(), (3, 2));
        assert_eq!(p.amax(), 0.0);
    }

    #[test]
    fn vector_norms() {
        let x = Vector::from_vec(vec![3.0, -4.0]);
        assert_eq!(vec_norm(&x, VecNorm::Two), 5.0);
        assert_eq!(vec_norm(&x, VecNorm::Inf), 4.0);
        assert_eq!(vec_norm(&x, VecNorm::One), 7.0);
    }

    #[test]
    fn induced_norms() {
        let m = Matrix::from_row_slice(2, 2, &[1.0, -2.0, 3.0, 4.0]);
        assert_eq!(induced_norm(&m, InducedNorm::One), 6.0);
        assert_eq!(induced_norm(&m, InducedNorm::Inf), 7.0);
        let i4 = Matrix::identity(4, 4);
        assert_eq!(induced_norm(&i4, InducedNorm::One), 1.0);
        assert_eq!(induced_norm(&i4, InducedNorm::Inf), 1.0);
    }

    #[test]
    fn sym_eig_diagonal_is_sorted() {
        let d = Matrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 3.0]);
        let e = sym_eig(&d).unwrap();
        assert!((e.eigenvalues[0] - 3.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 2.0).abs() < 1e-15);
        // first eigenvector is ±e2, second is ±e1
        assert!((e.eigenvectors[(1, 0)].abs() - 1.0).abs() < 1e-15);
        assert!((e.eigenvectors[(0, 1)].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sym_eig_scalar() {
        let s = Matrix::from_element(1, 1, 2.0);
        let e = sym_eig(&s).unwrap();
        assert_eq!(e.eigenvalues[0], 2.0);
        assert_eq!(e.eigenvectors[(0, 0)].abs(), 1.0);
    }

    #[test]
    fn sym_eig_rejects_asymmetric() {
        let s = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(sym_eig(&s), Err(Error::NotSymmetric { .. })));
        assert!(lambda_max_sym(&s).is_err());
        let rect = Matrix::zeros(2, 3);
        assert!(matches!(sym_eig(&rect), Err(Error::Dimension(_))));
    }

    #[test]
    fn lambda_max_may_be_negative() {
        let s = -Matrix::identity(3, 3);
        assert!((lambda_max_sym(&s).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn sign_of_zero_is_zero() {
        assert_eq!(sign(0.0), 0.0);
        assert_eq!(sign(-2.5), -1.0);
        assert_eq!(sign(1e-300), 1.0);
    }
}
