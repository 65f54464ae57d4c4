//! Plain GCI and AA fusion of IID cluster densities in Gaussian-mixture form.
//!
//! These rules ignore fields-of-view entirely. They are the baselines the
//! clustering-based fusion in [`crate::robust`] improves on, and also the
//! per-cluster kernel it delegates to.

mod aa;
mod gci;

pub use aa::{aa_fuse, aa_fuse_weighted};
pub use gci::{gci_fuse, gci_fuse_cardinality, gci_fuse_gm, gci_fuse_weighted};

use crate::error::{Error, Result};

/// Which fusion rule to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FusionRule {
    /// Generalized covariance intersection (weighted geometric average).
    Gci,
    /// Weighted arithmetic average.
    Aa,
}

impl FusionRule {
    pub fn name(self) -> &'static str {
        match self {
            FusionRule::Gci => "gci",
            FusionRule::Aa => "aa",
        }
    }
}

/// Per-node fusion weights: each in `(0, 1)`, summing to one within 1e-12.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionWeights(Vec<f64>);

impl FusionWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("fusion weights", "no weights"));
        }
        if weights.len() > 1 {
            if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && **w < 1.0)) {
                return Err(Error::invalid(
                    "fusion weights",
                    format!("{w} is outside (0, 1)"),
                ));
            }
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(
                "fusion weights",
                format!("weights sum to {total}"),
            ));
        }
        Ok(Self(weights))
    }

    /// Equal weights over `n` nodes.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0 / n as f64; n])
    }

    /// `[ω, 1 − ω]`.
    pub fn pairwise(omega: f64) -> Result<Self> {
        check_omega(omega)?;
        Self::new(vec![omega, 1.0 - omega])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub(crate) fn check_omega(omega: f64) -> Result<()> {
    if omega > 0.0 && omega < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "fusion weight",
            format!("omega = {omega} is outside (0, 1)"),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_validation() {
        assert!(FusionWeights::new(vec![0.3, 0.7]).is_ok());
        assert!(FusionWeights::new(vec![0.3, 0.6]).is_err());
        assert!(FusionWeights::new(vec![0.0, 1.0]).is_err());
        assert!(FusionWeights::new(vec![]).is_err());
        assert_eq!(FusionWeights::uniform(4).unwrap().as_slice(), &[0.25; 4]);
        assert!(FusionWeights::pairwise(1.0).is_err());
    }
}
