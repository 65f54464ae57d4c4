//! Evaluation: OSPA distance, estimate extraction and Monte Carlo
//! aggregation.

mod aggregate;
mod assignment;
mod estimates;
mod ospa;

pub use aggregate::{aggregate, mean, standard_error, MethodSeries, RunRecord, Summary};
pub use assignment::hungarian;
pub use estimates::{extract_estimates, Extraction};
pub use ospa::{ospa, OspaParams};
