//! Local per-node filtering: Gaussian-mixture CPHD and PHD recursions.
//!
//! Nonlinear sensors are handled by first-order linearization at each
//! predicted component mean, and the detection probability is read at the
//! component mean.

mod cphd;
mod models;
mod phd;
mod reduce;

pub use cphd::{cphd_predict, cphd_update, predict_cardinality};
pub use models::{
    BirthModel, ClutterModel, Fov, LinearPositionSensor, MeasurementModel, MotionModel,
    PolarRegion, RangeBearingSensor,
};
pub use phd::{phd_predict, phd_update};
pub(crate) use models::wrap_angle;
pub use reduce::{gm_reduce, ReduceParams};

use crate::error::Result;
use crate::gm::IidClusterDensity;
use crate::linalg::Vector;

/// Which recursion a node runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FilterKind {
    Phd,
    Cphd,
}

impl FilterKind {
    pub fn name(self) -> &'static str {
        match self {
            FilterKind::Phd => "phd",
            FilterKind::Cphd => "cphd",
        }
    }
}

/// A node's complete local filter: models plus reduction settings.
#[derive(Debug, Clone)]
pub struct LocalFilter<S> {
    pub kind: FilterKind,
    pub motion: MotionModel,
    pub sensor: S,
    pub clutter: ClutterModel,
    pub birth: BirthModel,
    pub reduce: ReduceParams,
}

impl<S: MeasurementModel> LocalFilter<S> {
    /// One predict/update/reduce cycle. Newborn components are seeded from
    /// `previous_scan`, the measurements of the scan before `scan`.
    pub fn step(
        &self,
        prior: &IidClusterDensity,
        previous_scan: &[Vector],
        scan: &[Vector],
    ) -> Result<IidClusterDensity> {
        let newborn = self.birth.components(previous_scan, &self.sensor);
        let mut posterior = match self.kind {
            FilterKind::Cphd => {
                let predicted = cphd_predict(prior, &self.motion, &self.birth, &newborn);
                cphd_update(&predicted, scan, &self.sensor, &self.clutter)?
            }
            FilterKind::Phd => {
                let predicted = phd_predict(prior, &self.motion, &newborn);
                phd_update(&predicted, scan, &self.sensor, &self.clutter)?
            }
        };
        posterior.intensity = gm_reduce(&posterior.intensity, &self.reduce)?;
        if self.kind == FilterKind::Phd {
            posterior.cardinality = crate::gm::CardinalityDistribution::poisson(
                posterior.intensity.mass(),
                posterior.n_max(),
            );
        }
        Ok(posterior)
    }
}
