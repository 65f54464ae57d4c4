//! Small dense linear-algebra helpers shared by the filters and fusion rules.
//!
//! Every covariance inversion goes through a Cholesky factorisation; a failed
//! factorisation is reported as [`Error::NotPositiveDefinite`] and never
//! regularised away.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

const LN_2PI: f64 = 1.837_877_066_409_345_3;

/// Cholesky factor of a symmetric positive-definite matrix.
pub fn cholesky(m: &Matrix, context: &str) -> Result<Cholesky<f64, Dyn>> {
    if !m.is_square() {
        return Err(Error::NotPositiveDefinite(format!(
            "{context}: {}x{} matrix is not square",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NotPositiveDefinite(format!(
            "{context}: non-finite entry"
        )));
    }
    Cholesky::new(m.clone()).ok_or_else(|| Error::NotPositiveDefinite(context.to_string()))
}

pub fn spd_inverse(m: &Matrix, context: &str) -> Result<Matrix> {
    Ok(cholesky(m, context)?.inverse())
}

/// `ln det` from a Cholesky factor.
pub fn ln_det(chol: &Cholesky<f64, Dyn>) -> f64 {
    2.0 * chol.l_dirty().diagonal().iter().map(|d| d.ln()).sum::<f64>()
}

/// Quadratic form `dᵀ M⁻¹ d` given the Cholesky factor of `M`.
pub fn quad_form(chol: &Cholesky<f64, Dyn>, d: &Vector) -> f64 {
    let mut y = d.clone();
    chol.l_dirty().solve_lower_triangular_mut(&mut y);
    y.norm_squared()
}

/// Log-density of `N(d; 0, M)` given the Cholesky factor of `M`.
pub fn ln_gaussian(chol: &Cholesky<f64, Dyn>, d: &Vector) -> f64 {
    let dim = d.len() as f64;
    -0.5 * (dim * LN_2PI + ln_det(chol) + quad_form(chol, d))
}

pub fn gaussian_pdf(x: &Vector, mean: &Vector, cov: &Matrix) -> Result<f64> {
    check_dim(mean.len(), x.len())?;
    let chol = cholesky(cov, "gaussian covariance")?;
    Ok(ln_gaussian(&chol, &(x - mean)).exp())
}

pub fn symmetrize(m: &Matrix) -> Matrix {
    (m + m.transpose()) * 0.5
}

/// True when `m` is symmetric to `rel_tol` relative to its largest entry.
pub fn is_symmetric(m: &Matrix, rel_tol: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    let scale = m.amax().max(f64::MIN_POSITIVE);
    (m - m.transpose()).amax() <= rel_tol * scale
}

pub(crate) fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

/// Numerically safe `ln(Σ exp(xᵢ))`; returns `-inf` for an empty or all `-inf` input.
pub fn log_sum_exp(values: impl IntoIterator<Item = f64>) -> f64 {
    let values: Vec<f64> = values.into_iter().collect();
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_normal_2d_at_origin() {
        let p = gaussian_pdf(
            &Vector::zeros(2),
            &Vector::zeros(2),
            &Matrix::identity(2, 2),
        )
        .unwrap();
        assert!((p - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
    }

    #[test]
    fn rejects_indefinite() {
        let m = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(
            spd_inverse(&m, "test"),
            Err(Error::NotPositiveDefinite(_))
        ));
    }

    #[test]
    fn log_sum_exp_handles_neg_infinity() {
        assert_eq!(log_sum_exp([f64::NEG_INFINITY]), f64::NEG_INFINITY);
        assert!((log_sum_exp([0.0, 0.0]) - 2f64.ln()).abs() < 1e-15);
    }
}
