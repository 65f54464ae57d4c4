use crate::error::{Error, Result};
use crate::gm::{CardinalityDistribution, GmIntensity, IidClusterDensity};

use super::{check_omega, FusionWeights};

/// AA fusion: `v̄ = ω v_a + (1 − ω) v_b`, `p̄ = ω p_a + (1 − ω) p_b`. Exact.
pub fn aa_fuse(
    a: &IidClusterDensity,
    b: &IidClusterDensity,
    omega: f64,
) -> Result<IidClusterDensity> {
    check_omega(omega)?;
    let n_max = a.n_max().max(b.n_max());
    let probs = (0..=n_max)
        .map(|n| omega * a.cardinality.prob(n) + (1.0 - omega) * b.cardinality.prob(n))
        .collect();
    let mut intensity = a.intensity.scaled(omega);
    intensity.extend(b.intensity.scaled(1.0 - omega));
    Ok(IidClusterDensity::new(
        CardinalityDistribution::from_weights(probs)?,
        intensity,
    ))
}

/// AA fusion of any number of densities.
pub fn aa_fuse_weighted(
    densities: &[&IidClusterDensity],
    weights: &FusionWeights,
) -> Result<IidClusterDensity> {
    if densities.len() != weights.len() || densities.is_empty() {
        return Err(Error::invalid(
            "fusion weights",
            format!("{} weights for {} densities", weights.len(), densities.len()),
        ));
    }
    let n_max = densities.iter().map(|d| d.n_max()).max().unwrap_or(0);
    let probs = (0..=n_max)
        .map(|n| {
            densities
                .iter()
                .zip(weights.as_slice())
                .map(|(d, w)| w * d.cardinality.prob(n))
                .sum()
        })
        .collect();
    let mut intensity = GmIntensity::default();
    for (d, w) in densities.iter().zip(weights.as_slice()) {
        intensity.extend(d.intensity.scaled(*w));
    }
    Ok(IidClusterDensity::new(
        CardinalityDistribution::from_weights(probs)?,
        intensity,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gm::GaussianComponent;
    use crate::linalg::{Matrix, Vector};

    fn density(card: Vec<f64>, w: f64, m: f64) -> IidClusterDensity {
        IidClusterDensity::new(
            CardinalityDistribution::new(card).unwrap(),
            GmIntensity::new(vec![GaussianComponent::new(
                w,
                Vector::from_column_slice(&[m, 0.0]),
                Matrix::identity(2, 2),
            )
            .unwrap()]),
        )
    }

    #[test]
    fn aa_is_linear_pointwise() {
        let a = density(vec![0.2, 0.8], 0.8, 0.0);
        let b = density(vec![0.5, 0.4, 0.1], 0.6, 2.0);
        let omega = 0.3;
        let f = aa_fuse(&a, &b, omega).unwrap();
        for n in 0..=2 {
            let want = omega * a.cardinality.prob(n) + (1.0 - omega) * b.cardinality.prob(n);
            assert!((f.cardinality.prob(n) - want).abs() < 1e-15);
        }
        for x in [-1.0, 0.5, 2.0] {
            let x = Vector::from_column_slice(&[x, 0.3]);
            let want = omega * a.intensity.evaluate(&x).unwrap()
                + (1.0 - omega) * b.intensity.evaluate(&x).unwrap();
            assert!((f.intensity.evaluate(&x).unwrap() - want).abs() < 1e-15);
        }
        assert!((f.intensity.mass() - f.cardinality.mean()).abs() < 1e-12);
    }

    #[test]
    fn weighted_matches_pairwise() {
        let a = density(vec![0.2, 0.8], 0.8, 0.0);
        let b = density(vec![0.5, 0.5], 0.5, 2.0);
        let w = FusionWeights::pairwise(0.25).unwrap();
        let x = aa_fuse_weighted(&[&a, &b], &w).unwrap();
        let y = aa_fuse(&a, &b, 0.25).unwrap();
        for n in 0..=1 {
            assert!((x.cardinality.prob(n) - y.cardinality.prob(n)).abs() < 1e-15);
        }
        assert!(aa_fuse(&a, &b, 0.0).is_err());
    }
}
