use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gm::{CardinalityDistribution, GaussianComponent, GmIntensity, IidClusterDensity};
use crate::linalg::{self, log_sum_exp, Matrix, Vector};

use super::{check_omega, FusionWeights};

struct Prepared<'a> {
    component: &'a GaussianComponent,
    information: Matrix,
    information_mean: Vector,
    ln_det: f64,
}

fn prepare(v: &GmIntensity) -> Result<Vec<Prepared<'_>>> {
    v.iter()
        .map(|c| {
            let chol = linalg::cholesky(&c.covariance, "component covariance")?;
            let information = chol.inverse();
            let information_mean = &information * &c.mean;
            Ok(Prepared {
                component: c,
                information,
                information_mean,
                ln_det: linalg::ln_det(&chol),
            })
        })
        .collect()
}

/// `ln κ(ω, P) = ½ ln det(2πP/ω) − (ω/2) ln det(2πP)`.
fn ln_kappa(omega: f64, dim: usize, ln_det: f64) -> f64 {
    let d = dim as f64;
    0.5 * (d * (2.0 * PI / omega).ln() + ln_det) - 0.5 * omega * (d * (2.0 * PI).ln() + ln_det)
}

/// Geometric average `a^ω b^{1−ω}` of two Gaussian mixtures, approximated
/// pairwise. Component `(p, q)` has
///
/// ```text
/// P = [ω Pₚ⁻¹ + (1−ω) P_q⁻¹]⁻¹
/// m = P [ω Pₚ⁻¹ mₚ + (1−ω) P_q⁻¹ m_q]
/// α = αₚ^ω α_q^{1−ω} κ(ω, Pₚ) κ(1−ω, P_q) N(mₚ − m_q; 0, Pₚ/ω + P_q/(1−ω))
/// ```
///
/// Returns the unnormalized mixture together with its mass `C = Σ α`.
pub fn gci_fuse_gm(a: &GmIntensity, b: &GmIntensity, omega: f64) -> Result<(GmIntensity, f64)> {
    check_omega(omega)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid(
            "gci input",
            "both mixtures must have at least one component",
        ));
    }
    let pa = prepare(a)?;
    let pb = prepare(b)?;
    let mut out = GmIntensity::default();
    for p in &pa {
        for q in &pb {
            linalg::check_dim(p.component.dim(), q.component.dim())?;
            let dim = p.component.dim();
            let info = &p.information * omega + &q.information * (1.0 - omega);
            let covariance = linalg::symmetrize(&linalg::spd_inverse(&info, "fused information")?);
            let mean =
                &covariance * (&p.information_mean * omega + &q.information_mean * (1.0 - omega));
            let spread =
                &p.component.covariance / omega + &q.component.covariance / (1.0 - omega);
            let spread_chol = linalg::cholesky(&spread, "gci agreement covariance")?;
            let ln_weight = omega * p.component.weight.ln()
                + (1.0 - omega) * q.component.weight.ln()
                + ln_kappa(omega, dim, p.ln_det)
                + ln_kappa(1.0 - omega, dim, q.ln_det)
                + linalg::ln_gaussian(&spread_chol, &(&p.component.mean - &q.component.mean));
            out.push(GaussianComponent {
                weight: ln_weight.exp(),
                mean,
                covariance,
            });
        }
    }
    let mass = out.mass();
    Ok((out, mass))
}

/// `p̄(n) ∝ p_a(n)^ω p_b(n)^{1−ω} Cⁿ`, computed in log space.
///
/// `0⁰ = 1`, and a zero in either input forces a zero in the output. Fails
/// when every count is forced to zero.
pub fn gci_fuse_cardinality(
    pa: &CardinalityDistribution,
    pb: &CardinalityDistribution,
    omega: f64,
    mass: f64,
) -> Result<CardinalityDistribution> {
    check_omega(omega)?;
    if !(mass >= 0.0 && mass.is_finite()) {
        return Err(Error::invalid("gci mass", format!("C = {mass}")));
    }
    let n_max = pa.n_max().max(pb.n_max());
    let ln_c = mass.ln();
    let ln_p: Vec<f64> = (0..=n_max)
        .map(|n| {
            let (x, y) = (pa.prob(n), pb.prob(n));
            if x == 0.0 || y == 0.0 {
                return f64::NEG_INFINITY;
            }
            let ln_cn = if n == 0 { 0.0 } else { n as f64 * ln_c };
            omega * x.ln() + (1.0 - omega) * y.ln() + ln_cn
        })
        .collect();
    let total = log_sum_exp(ln_p.iter().copied());
    if !total.is_finite() {
        return Err(Error::DegenerateFusion(
            "cardinality supports do not overlap".into(),
        ));
    }
    CardinalityDistribution::from_weights(ln_p.iter().map(|l| (l - total).exp()).collect())
}

/// GCI fusion of two IID cluster densities: the location densities are
/// geometrically averaged with [`gci_fuse_gm`], the cardinalities with
/// [`gci_fuse_cardinality`], and the fused intensity is the normalized
/// location density times the fused expected count.
///
/// A zero intensity on either side leaves no overlap (`C = 0`).
pub fn gci_fuse(
    a: &IidClusterDensity,
    b: &IidClusterDensity,
    omega: f64,
) -> Result<IidClusterDensity> {
    check_omega(omega)?;
    let (mixture, mass) = match (a.location_density(), b.location_density()) {
        (Some(sa), Some(sb)) => gci_fuse_gm(&sa, &sb, omega)?,
        _ => (GmIntensity::default(), 0.0),
    };
    let cardinality = gci_fuse_cardinality(&a.cardinality, &b.cardinality, omega, mass)?;
    let intensity = if mass > 0.0 {
        mixture.scaled(cardinality.mean() / mass)
    } else {
        GmIntensity::default()
    };
    Ok(IidClusterDensity::new(cardinality, intensity))
}

/// GCI fusion of any number of densities as a chain of pairwise fusions whose
/// weights reproduce the requested geometric-average exponents.
pub fn gci_fuse_weighted(
    densities: &[&IidClusterDensity],
    weights: &FusionWeights,
) -> Result<IidClusterDensity> {
    if densities.len() != weights.len() || densities.is_empty() {
        return Err(Error::invalid(
            "fusion weights",
            format!("{} weights for {} densities", weights.len(), densities.len()),
        ));
    }
    let w = weights.as_slice();
    let mut acc = densities[0].clone();
    let mut cumulative = w[0];
    for (d, wk) in densities.iter().zip(w).skip(1) {
        let omega = cumulative / (cumulative + wk);
        acc = gci_fuse(&acc, d, omega)?;
        cumulative += wk;
    }
    Ok(acc)
}
