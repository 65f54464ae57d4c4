//! Density types and the cardinality algebra.
//!
//! A multi-target density is carried around as an [`IidClusterDensity`]: a
//! [`CardinalityDistribution`] over the number of targets together with a
//! [`GmIntensity`], the Gaussian-mixture intensity (PHD) whose integral is the
//! expected target count.

mod cardinality;
mod esf;
mod mixture;

pub use cardinality::{
    convolve_cardinality, expected_cardinality, map_cardinality, mb_cardinality, BernoulliSet,
    CardinalityDistribution, EXISTENCE_CLAMP,
};
pub use esf::{esf, esf_all};
pub use mixture::{gm_evaluate, GaussianComponent, GmIntensity};

use crate::error::Result;

/// Largest target count represented by a cardinality vector.
pub const DEFAULT_N_MAX: usize = 20;

/// IID cluster process `(p, v)`: cardinality law plus intensity.
#[derive(Debug, Clone, PartialEq)]
pub struct IidClusterDensity {
    pub cardinality: CardinalityDistribution,
    pub intensity: GmIntensity,
}

impl IidClusterDensity {
    pub fn new(cardinality: CardinalityDistribution, intensity: GmIntensity) -> Self {
        Self {
            cardinality,
            intensity,
        }
    }

    /// No targets: `δ₀` cardinality and zero intensity.
    pub fn empty(n_max: usize) -> Self {
        Self::new(CardinalityDistribution::delta(0, n_max), GmIntensity::default())
    }

    /// `μ = Σ n p(n)`.
    pub fn expected_cardinality(&self) -> f64 {
        self.cardinality.mean()
    }

    pub fn n_max(&self) -> usize {
        self.cardinality.n_max()
    }

    /// Location density `s = v / ∫v`, or `None` for the zero intensity.
    pub fn location_density(&self) -> Option<GmIntensity> {
        let mass = self.intensity.mass();
        (mass > 0.0).then(|| self.intensity.scaled(1.0 / mass))
    }

    pub fn validate(&self) -> Result<()> {
        self.cardinality.validate()?;
        self.intensity.validate()
    }
}
