use rand::Rng;
use rand_distr::{Distribution, Normal, Poisson};

use crate::filter::{MeasurementModel, RangeBearingSensor};
use crate::linalg::Vector;

/// One scan of sensor `sensor`: a detection with probability `p_{D,0}` for
/// every target inside the FoV, plus Poisson(`clutter_rate`) false alarms
/// uniform over the sensor's measurement region. Target returns come first.
pub fn generate_scan<R: Rng + ?Sized>(
    targets: &[&Vector],
    sensor: &RangeBearingSensor,
    clutter_rate: f64,
    rng: &mut R,
) -> Vec<Vector> {
    let mut scan = Vec::new();
    for &x in targets {
        if !sensor.in_fov(x) || !rng.random_bool(sensor.pd0.clamp(0.0, 1.0)) {
            continue;
        }
        let mut z = sensor.predict(x);
        z[0] += sample_normal(rng, sensor.sigma_theta);
        z[1] += sample_normal(rng, sensor.sigma_r);
        if z[0].abs() > std::f64::consts::PI {
            z[0] = crate::filter::wrap_angle(z[0]);
        }
        scan.push(z);
    }
    if clutter_rate > 0.0 {
        let count = Poisson::new(clutter_rate)
            .map(|p| p.sample(rng) as usize)
            .unwrap_or(0);
        let region = sensor.measurement_region();
        for _ in 0..count {
            let theta = rng.random_range(region.bearing_min..region.bearing_max);
            let r = rng.random_range(0.0..region.max_range);
            scan.push(Vector::from_column_slice(&[theta, r]));
        }
    }
    scan
}

fn sample_normal<R: Rng + ?Sized>(rng: &mut R, sigma: f64) -> f64 {
    if sigma > 0.0 {
        Normal::new(0.0, sigma).expect("positive sigma").sample(rng)
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn target(x: f64, y: f64) -> Vector {
        Vector::from_column_slice(&[x, 0.0, y, 0.0])
    }

    #[test]
    fn outside_the_fov_is_never_seen() {
        let s = RangeBearingSensor::with_circular_fov([0.0, 0.0], 100.0, 0.01, 1.0, 1.0);
        let far = target(500.0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            assert!(generate_scan(&[&far], &s, 0.0, &mut rng).is_empty());
        }
    }

    #[test]
    fn noiseless_perfect_detection_is_exact() {
        let s = RangeBearingSensor::with_circular_fov([10.0, -5.0], 1000.0, 0.0, 0.0, 1.0);
        let x = target(40.0, 35.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let z = generate_scan(&[&x], &s, 0.0, &mut rng);
        assert_eq!(z.len(), 1);
        assert_eq!(z[0][0], 30f64.atan2(40.0));
        assert_eq!(z[0][1], 50.0);
    }

    #[test]
    fn detection_rate_matches_pd() {
        let s = RangeBearingSensor::with_circular_fov([0.0, 0.0], 1000.0, 0.01, 5.0, 0.95);
        let x = target(100.0, 100.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let hits: usize = (0..10_000)
            .map(|_| generate_scan(&[&x], &s, 0.0, &mut rng).len())
            .sum();
        assert!((hits as f64 / 1e4 - 0.95).abs() < 0.01);
    }

    #[test]
    fn mean_count_is_clutter_plus_detections() {
        let s = RangeBearingSensor::with_circular_fov([0.0, 0.0], 1000.0, 0.01, 5.0, 0.95);
        let (a, b, c) = (target(100.0, 0.0), target(0.0, 300.0), target(5000.0, 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 10_000;
        let total: usize = (0..n)
            .map(|_| generate_scan(&[&a, &b, &c], &s, 15.0, &mut rng).len())
            .sum();
        let mean = 15.0 + 2.0 * 0.95;
        // Variance: Poisson clutter plus two Bernoulli detections.
        let sd = ((15.0 + 2.0 * 0.95 * 0.05) / n as f64).sqrt();
        assert!((total as f64 / n as f64 - mean).abs() < 3.0 * sd);
    }
}
