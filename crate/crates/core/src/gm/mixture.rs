use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};

const SYMMETRY_TOL: f64 = 1e-9;

/// Weighted Gaussian `α · N(x; m, P)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianComponent {
    pub weight: f64,
    pub mean: Vector,
    pub covariance: Matrix,
}

impl GaussianComponent {
    /// Checked constructor; see [`GaussianComponent::validate`].
    pub fn new(weight: f64, mean: Vector, covariance: Matrix) -> Result<Self> {
        let gc = Self {
            weight,
            mean,
            covariance,
        };
        gc.validate()?;
        Ok(gc)
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// Weight nonnegative and finite, covariance symmetric (1e-9 relative) and
    /// positive-definite.
    pub fn validate(&self) -> Result<()> {
        if !self.weight.is_finite() || self.weight < 0.0 {
            return Err(Error::invalid(
                "component weight",
                format!("{} is not a nonnegative number", self.weight),
            ));
        }
        if self.mean.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("component mean", "non-finite entry"));
        }
        linalg::check_dim(self.dim(), self.covariance.nrows())?;
        linalg::check_dim(self.dim(), self.covariance.ncols())?;
        if !linalg::is_symmetric(&self.covariance, SYMMETRY_TOL) {
            return Err(Error::NotPositiveDefinite(
                "component covariance is not symmetric".into(),
            ));
        }
        linalg::cholesky(&self.covariance, "component covariance").map(|_| ())
    }

    /// Unweighted Gaussian density at `x`.
    pub fn pdf(&self, x: &Vector) -> Result<f64> {
        linalg::gaussian_pdf(x, &self.mean, &self.covariance)
    }
}

/// Gaussian-mixture intensity `v(x) = Σ αₚ N(x; mₚ, Pₚ)`.
///
/// The empty mixture is the zero intensity.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GmIntensity {
    pub components: Vec<GaussianComponent>,
}

impl GmIntensity {
    pub fn new(components: Vec<GaussianComponent>) -> Self {
        Self { components }
    }

    /// `∫ v = Σ αₚ`, the expected number of targets.
    pub fn mass(&self) -> f64 {
        self.components.iter().map(|c| c.weight).sum()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GaussianComponent> {
        self.components.iter()
    }

    pub fn push(&mut self, c: GaussianComponent) {
        self.components.push(c);
    }

    pub fn extend(&mut self, other: GmIntensity) {
        self.components.extend(other.components);
    }

    /// Same mixture with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            components: self
                .components
                .iter()
                .map(|c| GaussianComponent {
                    weight: c.weight * factor,
                    ..c.clone()
                })
                .collect(),
        }
    }

    pub fn weights(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.weight).collect()
    }

    pub fn evaluate(&self, x: &Vector) -> Result<f64> {
        gm_evaluate(self, x)
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.components.first().map(|c| c.dim());
        for c in &self.components {
            if let Some(d) = dim {
                linalg::check_dim(d, c.dim())?;
            }
            c.validate()?;
        }
        Ok(())
    }
}

impl FromIterator<GaussianComponent> for GmIntensity {
    fn from_iter<I: IntoIterator<Item = GaussianComponent>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a GmIntensity {
    type Item = &'a GaussianComponent;
    type IntoIter = std::slice::Iter<'a, GaussianComponent>;

    fn into_iter(self) -> Self::IntoIter {
        self.components.iter()
    }
}

/// `Σ αₚ N(x; mₚ, Pₚ)`; fails on a singular covariance.
pub fn gm_evaluate(v: &GmIntensity, x: &Vector) -> Result<f64> {
    v.components
        .iter()
        .try_fold(0.0, |acc, c| Ok(acc + c.weight * c.pdf(x)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gc(w: f64, m: &[f64], var: f64) -> GaussianComponent {
        GaussianComponent::new(
            w,
            Vector::from_column_slice(m),
            Matrix::identity(m.len(), m.len()) * var,
        )
        .unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let x = Vector::zeros(2);
        assert_eq!(gm_evaluate(&GmIntensity::default(), &x).unwrap(), 0.0);

        let one = GmIntensity::new(vec![gc(1.0, &[0.0, 0.0], 1.0)]);
        let v = gm_evaluate(&one, &x).unwrap();
        assert!((v - 0.159_154_943_091_895_33).abs() < 1e-15);

        let halves = GmIntensity::new(vec![gc(0.5, &[0.0, 0.0], 1.0), gc(0.5, &[0.0, 0.0], 1.0)]);
        let y = Vector::from_column_slice(&[0.3, -1.1]);
        let a = gm_evaluate(&halves, &y).unwrap();
        let b = gm_evaluate(&one, &y).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn singular_covariance_is_an_error() {
        let bad = GaussianComponent {
            weight: 1.0,
            mean: Vector::zeros(2),
            covariance: Matrix::zeros(2, 2),
        };
        let v = GmIntensity::new(vec![bad]);
        assert!(gm_evaluate(&v, &Vector::zeros(2)).is_err());
        assert!(v.validate().is_err());
    }

    #[test]
    fn validation_catches_bad_components() {
        assert!(GaussianComponent::new(-0.1, Vector::zeros(2), Matrix::identity(2, 2)).is_err());
        let asym = Matrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0]);
        assert!(GaussianComponent::new(1.0, Vector::zeros(2), asym).is_err());
        assert!(GaussianComponent::new(1.0, Vector::zeros(3), Matrix::identity(2, 2)).is_err());
    }

    #[test]
    fn mass_and_scaling() {
        let v = GmIntensity::new(vec![gc(0.4, &[0.0], 1.0), gc(0.6, &[2.0], 1.0)]);
        assert!((v.mass() - 1.0).abs() < 1e-15);
        assert!((v.scaled(2.5).mass() - 2.5).abs() < 1e-15);
    }
}
