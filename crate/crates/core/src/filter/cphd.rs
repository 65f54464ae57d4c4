//! Gaussian-mixture CPHD prediction and update.
//!
//! The cardinality corrector is evaluated in log space. With predicted
//! weights `w`, detection probabilities `p_D` read at each component mean,
//! `q = Σ (1 − p_D,i) wᵢ`, `W = Σ wᵢ` and `Λ(z) = Σ p_D,i wᵢ gᵢ(z) / c(z)`:
//!
//! ```text
//! Ψᵘ[Z](n) = Σⱼ λ^{|Z|−j} · n!/(n−j−u)! · q^{n−j−u} / Wⁿ · eⱼ(Λ(Z))
//! ```
//!
//! (the common `e^{−λ}` factor of the Poisson clutter law is dropped). The
//! posterior cardinality is `p(n) ∝ Ψ⁰[Z](n) p(n)`, missed-detection weights
//! are scaled by `⟨Ψ¹[Z], p⟩ / ⟨Ψ⁰[Z], p⟩` and the weight of component `i`
//! updated by `z` is `p_D,i wᵢ gᵢ(z) / c(z) · ⟨Ψ¹[Z∖z], p⟩ / ⟨Ψ⁰[Z], p⟩`.

use nalgebra::{Cholesky, Dyn};

use crate::error::{Error, Result};
use crate::gm::{
    esf_all, CardinalityDistribution, GaussianComponent, GmIntensity, IidClusterDensity,
};
use crate::linalg::{self, log_sum_exp, Matrix, Vector};

use super::models::{BirthModel, ClutterModel, MeasurementModel, MotionModel};

/// Survivor thinning and birth convolution of a cardinality law:
/// `p⁺(n) = Σⱼ p_birth(n − j) Σ_{l ≥ j} C(l, j) p_Sʲ (1 − p_S)^{l−j} p(l)`.
pub fn predict_cardinality(
    prior: &CardinalityDistribution,
    survival: f64,
    birth: &CardinalityDistribution,
    n_max: usize,
) -> CardinalityDistribution {
    let p = prior.probs();
    let mut survivors = vec![0.0; p.len()];
    for (l, &pl) in p.iter().enumerate() {
        if pl == 0.0 {
            continue;
        }
        let mut binom = 1.0;
        for (j, s) in survivors.iter_mut().enumerate().take(l + 1) {
            if j > 0 {
                binom = binom * (l + 1 - j) as f64 / j as f64;
            }
            *s += binom * survival.powi(j as i32) * (1.0 - survival).powi((l - j) as i32) * pl;
        }
    }
    let survivors = CardinalityDistribution::from_weights(survivors)
        .unwrap_or_else(|_| CardinalityDistribution::delta(0, n_max));
    crate::gm::convolve_cardinality(&[&survivors, birth], n_max)
}

/// Prediction: components propagated through the motion model with weights
/// scaled by `p_S`, newborn components appended, cardinality thinned and
/// convolved with the Poisson birth law of mean `birth.rate`.
pub fn cphd_predict(
    prior: &IidClusterDensity,
    motion: &MotionModel,
    birth: &BirthModel,
    newborn: &GmIntensity,
) -> IidClusterDensity {
    let n_max = prior.n_max();
    let intensity = predict_intensity(&prior.intensity, motion, newborn);
    let birth_card = CardinalityDistribution::poisson(birth.rate, n_max);
    let cardinality =
        predict_cardinality(&prior.cardinality, motion.survival_probability, &birth_card, n_max);
    IidClusterDensity::new(cardinality, intensity)
}

pub(crate) fn predict_intensity(
    prior: &GmIntensity,
    motion: &MotionModel,
    newborn: &GmIntensity,
) -> GmIntensity {
    let ps = motion.survival_probability;
    let mut out: GmIntensity = prior
        .iter()
        .map(|c| GaussianComponent {
            weight: ps * c.weight,
            mean: motion.predict_mean(&c.mean),
            covariance: motion.predict_covariance(&c.covariance),
        })
        .collect();
    out.extend(newborn.clone());
    out
}

/// Per-component linearized update quantities.
pub(crate) struct Linearized {
    pub index: usize,
    pub pd: f64,
    pub predicted: Vector,
    pub innovation_chol: Cholesky<f64, Dyn>,
    pub gain: Matrix,
    pub covariance: Matrix,
}

pub(crate) fn linearize<S: MeasurementModel + ?Sized>(
    intensity: &GmIntensity,
    pds: &[f64],
    sensor: &S,
) -> Result<Vec<Linearized>> {
    let r = sensor.noise_covariance();
    let mut out = Vec::new();
    for (index, (c, &pd)) in intensity.iter().zip(pds).enumerate() {
        if pd <= 0.0 || c.weight <= 0.0 {
            continue;
        }
        let h = sensor.jacobian(&c.mean);
        let pht = &c.covariance * h.transpose();
        let s = linalg::symmetrize(&(&h * &pht + r));
        let chol = Cholesky::new(s).ok_or(Error::SingularInnovation { index })?;
        let gain = chol.solve(&pht.transpose()).transpose();
        let ikh = Matrix::identity(c.dim(), c.dim()) - &gain * &h;
        let covariance =
            linalg::symmetrize(&(&ikh * &c.covariance * ikh.transpose() + &gain * r * gain.transpose()));
        out.push(Linearized {
            index,
            pd,
            predicted: sensor.predict(&c.mean),
            innovation_chol: chol,
            gain,
            covariance,
        });
    }
    Ok(out)
}

/// `gᵢ(z)` for every (measurement, linearized component) pair.
pub(crate) fn likelihoods<S: MeasurementModel + ?Sized>(
    measurements: &[Vector],
    lin: &[Linearized],
    sensor: &S,
) -> Vec<Vec<f64>> {
    measurements
        .iter()
        .map(|z| {
            lin.iter()
                .map(|l| {
                    let nu = sensor.innovation(z, &l.predicted);
                    linalg::ln_gaussian(&l.innovation_chol, &nu).exp()
                })
                .collect()
        })
        .collect()
}

struct Corrector {
    ln_fact: Vec<f64>,
    ln_w: f64,
    ln_q: f64,
    ln_lambda: f64,
}

impl Corrector {
    fn ln_clutter(&self, count: usize) -> f64 {
        if count == 0 {
            0.0
        } else {
            count as f64 * self.ln_lambda
        }
    }

    fn ln_q_pow(&self, exp: usize) -> f64 {
        if exp == 0 {
            0.0
        } else {
            exp as f64 * self.ln_q
        }
    }

    /// `ln Ψᵘ(n)` for `n = 0..=n_max`, given `ln eⱼ` of the measurement subset.
    fn ln_psi(&self, u: usize, ln_esf: &[f64]) -> Vec<f64> {
        let m = ln_esf.len() - 1;
        let n_max = self.ln_fact.len() - 1;
        (0..=n_max)
            .map(|n| {
                if n < u {
                    return f64::NEG_INFINITY;
                }
                let top = m.min(n - u);
                log_sum_exp((0..=top).map(|j| {
                    self.ln_clutter(m - j) + self.ln_fact[n] - self.ln_fact[n - j - u]
                        + self.ln_q_pow(n - j - u)
                        - n as f64 * self.ln_w
                        + ln_esf[j]
                }))
            })
            .collect()
    }
}

fn ln_esf(values: &[f64]) -> Vec<f64> {
    let scale = values.iter().copied().fold(0.0, f64::max);
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let scaled: Vec<f64> = values.iter().map(|v| v / scale).collect();
    esf_all(&scaled)
        .into_iter()
        .enumerate()
        .map(|(j, e)| e.ln() + j as f64 * scale.ln())
        .collect()
}

fn ln_inner(ln_p: &[f64], ln_psi: &[f64]) -> f64 {
    log_sum_exp(ln_p.iter().zip(ln_psi).map(|(a, b)| a + b))
}

/// GM-CPHD measurement update with Poisson clutter.
///
/// A zero predicted intensity carries no detectable targets and is returned
/// unchanged.
pub fn cphd_update<S: MeasurementModel + ?Sized>(
    pred: &IidClusterDensity,
    measurements: &[Vector],
    sensor: &S,
    clutter: &ClutterModel,
) -> Result<IidClusterDensity> {
    let comps = &pred.intensity;
    let total = comps.mass();
    if total <= 0.0 {
        return Ok(pred.clone());
    }
    let n_max = pred.n_max();
    let pds: Vec<f64> = comps
        .iter()
        .map(|c| sensor.detection_probability(&c.mean))
        .collect();
    let missed_mass: f64 = comps
        .iter()
        .zip(&pds)
        .map(|(c, pd)| (1.0 - pd) * c.weight)
        .sum();

    let lin = linearize(comps, &pds, sensor)?;
    let g = likelihoods(measurements, &lin, sensor);

    let density: Vec<f64> = measurements
        .iter()
        .map(|z| clutter_density(sensor, clutter, z))
        .collect::<Result<_>>()?;
    let lambda: Vec<f64> = g
        .iter()
        .zip(&density)
        .map(|(gz, c)| {
            lin.iter()
                .zip(gz)
                .map(|(l, gi)| l.pd * comps.components[l.index].weight * gi)
                .sum::<f64>()
                / c
        })
        .collect();

    let mut ln_fact = vec![0.0; n_max + 1];
    for n in 1..=n_max {
        ln_fact[n] = ln_fact[n - 1] + (n as f64).ln();
    }
    let corrector = Corrector {
        ln_fact,
        ln_w: total.ln(),
        ln_q: missed_mass.max(0.0).ln(),
        ln_lambda: clutter.mean_count.ln(),
    };

    let ln_p: Vec<f64> = pred.cardinality.probs().iter().map(|p| p.ln()).collect();
    let full = ln_esf(&lambda);
    let psi0 = corrector.ln_psi(0, &full);
    let psi1 = corrector.ln_psi(1, &full);
    let denom = ln_inner(&ln_p, &psi0);
    if !denom.is_finite() {
        return Err(Error::DegenerateUpdate(format!(
            "{} measurements cannot be explained by the predicted density",
            measurements.len()
        )));
    }

    let ln_post: Vec<f64> = ln_p.iter().zip(&psi0).map(|(a, b)| a + b - denom).collect();
    let cardinality =
        CardinalityDistribution::from_weights(ln_post.iter().map(|l| l.exp()).collect())?;

    let missed_factor = (ln_inner(&ln_p, &psi1) - denom).exp();
    let mut intensity = GmIntensity::default();
    for (c, pd) in comps.iter().zip(&pds) {
        let weight = (1.0 - pd) * c.weight * missed_factor;
        if weight > 0.0 {
            intensity.push(GaussianComponent {
                weight,
                ..c.clone()
            });
        }
    }

    for (j, z) in measurements.iter().enumerate() {
        let others: Vec<f64> = lambda
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != j)
            .map(|(_, v)| *v)
            .collect();
        let psi1_minus = corrector.ln_psi(1, &ln_esf(&others));
        let detect_factor = (ln_inner(&ln_p, &psi1_minus) - denom).exp() / density[j];
        for (l, gi) in lin.iter().zip(&g[j]) {
            let c = &comps.components[l.index];
            let weight = l.pd * c.weight * gi * detect_factor;
            if weight > 0.0 && weight.is_finite() {
                let nu = sensor.innovation(z, &l.predicted);
                intensity.push(GaussianComponent {
                    weight,
                    mean: &c.mean + &l.gain * nu,
                    covariance: l.covariance.clone(),
                });
            }
        }
    }

    Ok(IidClusterDensity::new(cardinality, intensity))
}

/// `c(z)`, falling back to a unit level when there is no clutter (it cancels
/// out of every ratio in that case).
pub(crate) fn clutter_density<S: MeasurementModel + ?Sized>(
    sensor: &S,
    clutter: &ClutterModel,
    z: &Vector,
) -> Result<f64> {
    let c = sensor.clutter_density(z);
    if c > 0.0 && c.is_finite() {
        Ok(c)
    } else if clutter.mean_count == 0.0 {
        Ok(1.0)
    } else {
        Err(Error::invalid(
            "clutter density",
            format!("c(z) = {c} with a positive clutter rate"),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filter::models::{LinearPositionSensor, RangeBearingSensor};

    fn gc4(w: f64, pos: [f64; 2], var: f64) -> GaussianComponent {
        GaussianComponent::new(
            w,
            Vector::from_column_slice(&[pos[0], 0.0, pos[1], 0.0]),
            Matrix::identity(4, 4) * var,
        )
        .unwrap()
    }

    fn bernoulli_card(r: f64, n_max: usize) -> CardinalityDistribution {
        let mut p = vec![0.0; n_max + 1];
        p[0] = 1.0 - r;
        p[1] = r;
        CardinalityDistribution::new(p).unwrap()
    }

    #[test]
    fn predict_empty_prior_gives_poisson_birth() {
        let motion = MotionModel::constant_velocity(1.0, 5.0, 0.95);
        let birth = BirthModel::with_std(0.15, &[50.0, 20.0, 50.0, 20.0]);
        let pred = cphd_predict(
            &IidClusterDensity::empty(20),
            &motion,
            &birth,
            &GmIntensity::default(),
        );
        assert_eq!(pred.intensity.mass(), 0.0);
        let expect = CardinalityDistribution::poisson(0.15, 20);
        for n in 0..=20 {
            assert!((pred.cardinality.prob(n) - expect.prob(n)).abs() < 1e-15);
        }
    }

    #[test]
    fn predict_single_component_mass_and_thinning() {
        let motion = MotionModel::constant_velocity(1.0, 5.0, 0.95);
        let birth = BirthModel::with_std(0.0, &[50.0, 20.0, 50.0, 20.0]);
        let prior = IidClusterDensity::new(
            CardinalityDistribution::delta(1, 20),
            GmIntensity::new(vec![gc4(1.0, [0.0, 0.0], 10.0)]),
        );
        let pred = cphd_predict(&prior, &motion, &birth, &GmIntensity::default());
        assert!((pred.intensity.mass() - 0.95).abs() < 1e-15);
        assert!((pred.cardinality.prob(1) - 0.95).abs() < 1e-15);
        assert!((pred.cardinality.prob(0) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn thinning_matches_binomial() {
        // δ₂ thinned with p_S = 0.5 is Binomial(2, 0.5).
        let p = predict_cardinality(
            &CardinalityDistribution::delta(2, 5),
            0.5,
            &CardinalityDistribution::delta(0, 5),
            5,
        );
        assert!((p.prob(0) - 0.25).abs() < 1e-15);
        assert!((p.prob(1) - 0.5).abs() < 1e-15);
        assert!((p.prob(2) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn no_detection_anywhere_is_identity() {
        let sensor = RangeBearingSensor::with_circular_fov([0.0, 0.0], 100.0, 0.01, 5.0, 0.95);
        let pred = IidClusterDensity::new(
            bernoulli_card(0.7, 20),
            GmIntensity::new(vec![gc4(0.7, [5000.0, 5000.0], 100.0)]),
        );
        let post = cphd_update(&pred, &[], &sensor, &ClutterModel::new(15.0)).unwrap();
        assert_eq!(post.intensity, pred.intensity);
        for n in 0..=20 {
            assert!((post.cardinality.prob(n) - pred.cardinality.prob(n)).abs() < 1e-14);
        }
    }

    #[test]
    fn misdetection_matches_bernoulli_corrector() {
        let sensor = RangeBearingSensor::with_circular_fov([0.0, 0.0], 1000.0, 0.01, 5.0, 0.95);
        let r = 0.8;
        let pred = IidClusterDensity::new(
            bernoulli_card(r, 20),
            GmIntensity::new(vec![gc4(r, [100.0, 200.0], 100.0)]),
        );
        let post = cphd_update(&pred, &[], &sensor, &ClutterModel::new(15.0)).unwrap();
        // Single-target Bernoulli filter with no measurement: r' = r(1 − p_D) / (1 − r p_D).
        let expect = r * 0.05 / (1.0 - r * 0.95);
        assert_eq!(post.intensity.len(), 1);
        assert!((post.intensity.mass() - expect).abs() < 1e-12);
        assert!((post.cardinality.prob(1) - expect).abs() < 1e-12);
        assert!(expect < 0.05 / (1.0 - 0.95 * 0.95));
    }

    #[test]
    fn measurement_at_prediction_confirms_target() {
        let sensor = LinearPositionSensor::new(Matrix::identity(2, 2) * 4.0, 0.99, 1e-8);
        let pred = IidClusterDensity::new(
            bernoulli_card(0.9, 20),
            GmIntensity::new(vec![gc4(0.9, [10.0, -20.0], 25.0)]),
        );
        let z = Vector::from_column_slice(&[10.0, -20.0]);
        let post = cphd_update(&pred, &[z], &sensor, &ClutterModel::new(1e-6)).unwrap();
        let best = post
            .intensity
            .iter()
            .max_by(|a, b| a.weight.total_cmp(&b.weight))
            .unwrap();
        assert!((best.mean[0] - 10.0).abs() < 1e-9);
        assert!((best.mean[2] + 20.0).abs() < 1e-9);
        assert!(best.weight > 0.999);
        assert!(post.cardinality.prob(1) > 0.999);
    }

    #[test]
    fn posterior_cardinality_stays_normalized_with_clutter() {
        let sensor = RangeBearingSensor::with_circular_fov([0.0, 0.0], 1000.0, 0.0175, 5.0, 0.95);
        let pred = IidClusterDensity::new(
            CardinalityDistribution::poisson(2.0, 20),
            GmIntensity::new(vec![
                gc4(1.0, [100.0, 200.0], 100.0),
                gc4(1.0, [-300.0, 400.0], 100.0),
            ]),
        );
        let zs: Vec<Vector> = (0..30)
            .map(|k| Vector::from_column_slice(&[-3.0 + 0.2 * k as f64, 30.0 * k as f64 + 5.0]))
            .collect();
        let post = cphd_update(&pred, &zs, &sensor, &ClutterModel::new(15.0)).unwrap();
        let total: f64 = post.cardinality.probs().iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert!(post.intensity.iter().all(|c| c.weight.is_finite()));
    }

    #[test]
    fn zero_clutter_without_targets_is_degenerate() {
        let sensor = LinearPositionSensor::new(Matrix::identity(2, 2), 1.0, 0.0);
        let pred = IidClusterDensity::new(
            CardinalityDistribution::delta(1, 1),
            GmIntensity::new(vec![gc4(1.0, [0.0, 0.0], 1.0)]),
        );
        let zs = vec![Vector::zeros(2), Vector::zeros(2)];
        assert!(matches!(
            cphd_update(&pred, &zs, &sensor, &ClutterModel::new(0.0)),
            Err(Error::DegenerateUpdate(_))
        ));
    }
}
