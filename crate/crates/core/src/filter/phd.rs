use crate::error::Result;
use crate::gm::{CardinalityDistribution, GaussianComponent, GmIntensity, IidClusterDensity};
use crate::linalg::Vector;

use super::cphd::{clutter_density, likelihoods, linearize, predict_intensity};
use super::models::{ClutterModel, MeasurementModel, MotionModel};

/// GM-PHD prediction. The cardinality field is set to Poisson(∫v) so PHD and
/// CPHD densities share one type.
pub fn phd_predict(
    prior: &IidClusterDensity,
    motion: &MotionModel,
    newborn: &GmIntensity,
) -> IidClusterDensity {
    let intensity = predict_intensity(&prior.intensity, motion, newborn);
    let cardinality = CardinalityDistribution::poisson(intensity.mass(), prior.n_max());
    IidClusterDensity::new(cardinality, intensity)
}

/// GM-PHD update: `(1 − p_D) v + Σ_z p_D wᵢ gᵢ(z) / (κ(z) + Σₖ p_D wₖ gₖ(z))`.
pub fn phd_update<S: MeasurementModel + ?Sized>(
    pred: &IidClusterDensity,
    measurements: &[Vector],
    sensor: &S,
    clutter: &ClutterModel,
) -> Result<IidClusterDensity> {
    let comps = &pred.intensity;
    let pds: Vec<f64> = comps
        .iter()
        .map(|c| sensor.detection_probability(&c.mean))
        .collect();
    let lin = linearize(comps, &pds, sensor)?;
    let g = likelihoods(measurements, &lin, sensor);

    let mut intensity = GmIntensity::default();
    for (c, pd) in comps.iter().zip(&pds) {
        let weight = (1.0 - pd) * c.weight;
        if weight > 0.0 {
            intensity.push(GaussianComponent {
                weight,
                ..c.clone()
            });
        }
    }
    for (z, gz) in measurements.iter().zip(&g) {
        let kappa = clutter.mean_count * clutter_density(sensor, clutter, z)?;
        let numer: Vec<f64> = lin
            .iter()
            .zip(gz)
            .map(|(l, gi)| l.pd * comps.components[l.index].weight * gi)
            .collect();
        let denom = kappa + numer.iter().sum::<f64>();
        if denom <= 0.0 {
            continue;
        }
        for (l, w) in lin.iter().zip(&numer) {
            let weight = w / denom;
            if weight > 0.0 {
                let c = &comps.components[l.index];
                let nu = sensor.innovation(z, &l.predicted);
                intensity.push(GaussianComponent {
                    weight,
                    mean: &c.mean + &l.gain * nu,
                    covariance: l.covariance.clone(),
                });
            }
        }
    }
    let cardinality = CardinalityDistribution::poisson(intensity.mass(), pred.n_max());
    Ok(IidClusterDensity::new(cardinality, intensity))
}
