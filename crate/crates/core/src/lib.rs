//! Multi-target tracking over sensor networks whose nodes see different,
//! unknown fields-of-view.
//!
//! The crate is organised bottom-up:
//!
//! - [`gm`]: Gaussian components, mixtures, cardinality distributions and the
//!   cardinality algebra (elementary symmetric functions, multi-Bernoulli
//!   cardinality, convolution).
//! - [`filter`]: local Gaussian-mixture PHD/CPHD recursions, sensor and motion
//!   models, measurement-driven birth and mixture reduction.
//! - [`fusion`]: the plain GCI (geometric average) and AA (arithmetic average)
//!   fusion rules for IID cluster densities.
//! - [`robust`]: clustering-based fusion that splits each density into
//!   well-separated groups, fuses group by group and merges the result by
//!   convolution, plus the split-error bound machinery.
//! - [`scenario`]: scenario files, ground truth, sensing and the consensus loop.
//! - [`metrics`]: OSPA, estimate extraction and Monte Carlo aggregation.
//! - [`cli`]: the `run`, `sweep` and `validate` batch front end.

pub mod cli;
pub mod error;
pub mod filter;
pub mod fusion;
pub mod gm;
pub mod linalg;
pub mod metrics;
pub mod robust;
pub mod scenario;

pub use error::{Error, Result};
pub use gm::{
    BernoulliSet, CardinalityDistribution, GaussianComponent, GmIntensity, IidClusterDensity,
    DEFAULT_N_MAX,
};
