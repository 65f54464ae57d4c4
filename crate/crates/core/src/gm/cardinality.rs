use crate::error::{Error, Result};

use super::esf::esf_all;

/// Existence probabilities at or above `1 − EXISTENCE_CLAMP` are clamped to it
/// before entering the multi-Bernoulli formula, keeping `r / (1 − r)` finite.
pub const EXISTENCE_CLAMP: f64 = 1e-6;

const NORMALIZATION_TOL: f64 = 1e-9;
const TRUNCATION_TOL: f64 = 1e-12;

/// Probability vector over target counts `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct CardinalityDistribution {
    probs: Vec<f64>,
}

impl CardinalityDistribution {
    /// Checked constructor: entries in `[0, 1]`, summing to one within 1e-9.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let dist = Self { probs };
        dist.validate()?;
        Ok(dist)
    }

    /// Normalizes nonnegative weights into a distribution.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("cardinality", "empty weight vector"));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::invalid(
                "cardinality",
                "weights must be finite and nonnegative",
            ));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::invalid("cardinality", "all weights are zero"));
        }
        Ok(Self {
            probs: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    /// Point mass at `k`, padded to `n_max`.
    pub fn delta(k: usize, n_max: usize) -> Self {
        let mut probs = vec![0.0; n_max.max(k) + 1];
        probs[k] = 1.0;
        Self { probs }
    }

    /// Poisson law with the given mean, truncated at `n_max` and renormalized.
    pub fn poisson(mean: f64, n_max: usize) -> Self {
        if mean <= 0.0 {
            return Self::delta(0, n_max);
        }
        let ln_mean = mean.ln();
        let mut ln_fact = 0.0;
        let mut probs = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            if n > 0 {
                ln_fact += (n as f64).ln();
            }
            probs.push((n as f64 * ln_mean - mean - ln_fact).exp());
        }
        let total: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= total);
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }

    /// Probability of exactly `n` targets (0 beyond `n_max`).
    pub fn prob(&self, n: usize) -> f64 {
        self.probs.get(n).copied().unwrap_or(0.0)
    }

    pub fn n_max(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn mean(&self) -> f64 {
        expected_cardinality(self)
    }

    pub fn map(&self) -> usize {
        map_cardinality(self)
    }

    /// Resizes to `n_max`, renormalizing when the dropped tail carries more
    /// than 1e-12 of probability.
    pub fn truncated(&self, n_max: usize) -> Self {
        Self {
            probs: truncate_vec(self.probs.clone(), n_max),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.probs.is_empty() {
            return Err(Error::invalid("cardinality", "empty probability vector"));
        }
        if let Some((n, p)) = self
            .probs
            .iter()
            .enumerate()
            .find(|(_, p)| !(0.0..=1.0 + NORMALIZATION_TOL).contains(*p))
        {
            return Err(Error::invalid(
                "cardinality",
                format!("p({n}) = {p} is outside [0, 1]"),
            ));
        }
        let total: f64 = self.probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::invalid(
                "cardinality",
                format!("probabilities sum to {total}"),
            ));
        }
        Ok(())
    }
}

fn truncate_vec(mut probs: Vec<f64>, n_max: usize) -> Vec<f64> {
    if probs.len() <= n_max + 1 {
        probs.resize(n_max + 1, 0.0);
        return probs;
    }
    let dropped: f64 = probs[n_max + 1..].iter().sum();
    probs.truncate(n_max + 1);
    if dropped > TRUNCATION_TOL {
        let total: f64 = probs.iter().sum();
        if total > 0.0 {
            probs.iter_mut().for_each(|p| *p /= total);
        }
    }
    probs
}

/// Independent Bernoulli components given by their existence probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliSet {
    existence: Vec<f64>,
}

impl BernoulliSet {
    /// Rejects probabilities outside `[0, 1]`; values within `EXISTENCE_CLAMP`
    /// of one are clamped.
    pub fn new(existence: Vec<f64>) -> Result<Self> {
        if let Some(r) = existence
            .iter()
            .find(|r| !r.is_finite() || **r < 0.0 || **r > 1.0)
        {
            return Err(Error::invalid(
                "existence probability",
                format!("{r} is outside [0, 1]"),
            ));
        }
        Ok(Self::from_weights(&existence))
    }

    /// Reads Gaussian-mixture weights as existence probabilities. Weights at or
    /// above one are clamped to `1 − EXISTENCE_CLAMP`, negative ones to zero.
    pub fn from_weights(weights: &[f64]) -> Self {
        Self {
            existence: weights
                .iter()
                .map(|w| w.clamp(0.0, 1.0 - EXISTENCE_CLAMP))
                .collect(),
        }
    }

    pub fn existence(&self) -> &[f64] {
        &self.existence
    }

    pub fn len(&self) -> usize {
        self.existence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.existence.is_empty()
    }
}

/// Cardinality law of a multi-Bernoulli set:
/// `p(n) = Π(1 − rⱼ) · σₙ(r₁/(1 − r₁), …, r_M/(1 − r_M))`.
pub fn mb_cardinality(bernoullis: &BernoulliSet, n_max: usize) -> CardinalityDistribution {
    let odds: Vec<f64> = bernoullis
        .existence
        .iter()
        .map(|r| r / (1.0 - r))
        .collect();
    let miss: f64 = bernoullis.existence.iter().map(|r| 1.0 - r).product();
    let probs: Vec<f64> = esf_all(&odds).into_iter().map(|s| miss * s).collect();
    CardinalityDistribution {
        probs: truncate_vec(probs, n_max),
    }
}

/// Discrete convolution `p₁ * p₂ * … * p_G`, truncated at `n_max`.
///
/// The empty list yields `δ₀`, the identity element.
pub fn convolve_cardinality(
    dists: &[&CardinalityDistribution],
    n_max: usize,
) -> CardinalityDistribution {
    let mut acc = match dists.split_first() {
        None => return CardinalityDistribution::delta(0, n_max),
        Some((first, rest)) => {
            let mut acc = first.probs.clone();
            for d in rest {
                acc = convolve_pair(&acc, &d.probs, n_max);
            }
            acc
        }
    };
    acc = truncate_vec(acc, n_max);
    CardinalityDistribution { probs: acc }
}

// Mass landing above n_max is accumulated and then renormalized away by
// `truncate_vec`, so only the first n_max + 2 cells are tracked exactly.
fn convolve_pair(a: &[f64], b: &[f64], n_max: usize) -> Vec<f64> {
    let len = (a.len() + b.len() - 1).min(n_max + 2);
    let mut out = vec![0.0; len];
    for (i, &pa) in a.iter().enumerate() {
        if pa == 0.0 {
            continue;
        }
        for (j, &pb) in b.iter().enumerate() {
            let k = (i + j).min(len - 1);
            out[k] += pa * pb;
        }
    }
    out
}

/// `Σ n p(n)`.
pub fn expected_cardinality(p: &CardinalityDistribution) -> f64 {
    p.probs
        .iter()
        .enumerate()
        .map(|(n, pn)| n as f64 * pn)
        .sum()
}

/// Most probable target count; ties go to the smaller count.
pub fn map_cardinality(p: &CardinalityDistribution) -> usize {
    let mut best = 0;
    for (n, &pn) in p.probs.iter().enumerate() {
        if pn > p.probs[best] {
            best = n;
        }
    }
    best
}
