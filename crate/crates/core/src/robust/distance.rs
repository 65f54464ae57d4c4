use crate::error::Result;
use crate::gm::GaussianComponent;
use crate::linalg;

/// Position of a Gaussian component: which node's mixture, and where in it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GcIndex {
    pub node: usize,
    pub component: usize,
}

impl GcIndex {
    pub fn new(node: usize, component: usize) -> Self {
        Self { node, component }
    }
}

/// `(m_a − m_b)ᵀ (P_a + P_b)⁻¹ (m_a − m_b)`.
///
/// Symmetric in its arguments; fails when `P_a + P_b` is not positive-definite.
pub fn corrected_mahalanobis(a: &GaussianComponent, b: &GaussianComponent) -> Result<f64> {
    linalg::check_dim(a.dim(), b.dim())?;
    let sum = &a.covariance + &b.covariance;
    let chol = linalg::cholesky(&sum, "summed component covariances")?;
    Ok(linalg::quad_form(&chol, &(&a.mean - &b.mean)))
}
