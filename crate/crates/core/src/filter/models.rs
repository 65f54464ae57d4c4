use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gm::{GaussianComponent, GmIntensity};
use crate::linalg::{Matrix, Vector};

/// Linear-Gaussian single-target dynamics with constant survival probability.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionModel {
    pub transition: Matrix,
    pub process_noise: Matrix,
    /// Sampling interval `T_s` in seconds (`NaN` for custom models).
    pub sampling_interval: f64,
    /// Noise intensity `σ_w` (`NaN` for custom models).
    pub noise_intensity: f64,
    pub survival_probability: f64,
}

impl MotionModel {
    /// Nearly-constant-velocity model on `[px, vx, py, vy]`:
    /// `A = I₂ ⊗ [[1, T], [0, 1]]`, `Q = I₂ ⊗ σ_w² [[T⁴/4, T³/2], [T³/2, T²]]`,
    /// one position/velocity block per axis.
    pub fn constant_velocity(ts: f64, sigma_w: f64, survival: f64) -> Self {
        let f = Matrix::from_row_slice(2, 2, &[1.0, ts, 0.0, 1.0]);
        let g = Matrix::from_row_slice(
            2,
            2,
            &[
                ts.powi(4) / 4.0,
                ts.powi(3) / 2.0,
                ts.powi(3) / 2.0,
                ts * ts,
            ],
        ) * (sigma_w * sigma_w);
        let i2 = Matrix::identity(2, 2);
        Self {
            transition: i2.kronecker(&f),
            process_noise: i2.kronecker(&g),
            sampling_interval: ts,
            noise_intensity: sigma_w,
            survival_probability: survival,
        }
    }

    /// Arbitrary `A`, `Q`.
    pub fn new(transition: Matrix, process_noise: Matrix, survival: f64) -> Result<Self> {
        if !transition.is_square() || transition.shape() != process_noise.shape() {
            return Err(Error::invalid(
                "motion model",
                "transition and process noise must be square and equally sized",
            ));
        }
        if !(0.0..=1.0).contains(&survival) {
            return Err(Error::invalid(
                "survival probability",
                format!("{survival} is outside [0, 1]"),
            ));
        }
        Ok(Self {
            transition,
            process_noise,
            sampling_interval: f64::NAN,
            noise_intensity: f64::NAN,
            survival_probability: survival,
        })
    }

    pub fn state_dim(&self) -> usize {
        self.transition.nrows()
    }

    pub fn predict_mean(&self, x: &Vector) -> Vector {
        &self.transition * x
    }

    pub fn predict_covariance(&self, p: &Matrix) -> Matrix {
        let a = &self.transition;
        let p = a * p * a.transpose() + &self.process_noise;
        crate::linalg::symmetrize(&p)
    }
}

/// Sensor field-of-view in the plane.
#[derive(Debug, Clone, PartialEq)]
pub enum Fov {
    Circle { center: [f64; 2], radius: f64 },
    /// Simple polygon given by its vertices in order.
    Polygon { vertices: Vec<[f64; 2]> },
}

impl Fov {
    pub fn contains(&self, p: [f64; 2]) -> bool {
        match self {
            Fov::Circle { center, radius } => {
                let dx = p[0] - center[0];
                let dy = p[1] - center[1];
                dx * dx + dy * dy <= radius * radius
            }
            Fov::Polygon { vertices } => point_in_polygon(p, vertices),
        }
    }
}

fn point_in_polygon(p: [f64; 2], vertices: &[[f64; 2]]) -> bool {
    let mut inside = false;
    let n = vertices.len();
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + n - 1) % n];
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = (b[0] - a[0]) * (p[1] - a[1]) / (b[1] - a[1]) + a[0];
            if p[0] < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Rectangle `[bearing_min, bearing_max] × [0, max_range]` in measurement space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarRegion {
    pub bearing_min: f64,
    pub bearing_max: f64,
    pub max_range: f64,
}

impl PolarRegion {
    pub fn area(&self) -> f64 {
        (self.bearing_max - self.bearing_min) * self.max_range
    }
}

/// Single-target measurement model as seen by the GM filters.
pub trait MeasurementModel {
    fn measurement_dim(&self) -> usize;

    /// Noise-free measurement of state `x`.
    fn predict(&self, x: &Vector) -> Vector;

    /// Jacobian of [`MeasurementModel::predict`] at `x`.
    fn jacobian(&self, x: &Vector) -> Matrix;

    fn noise_covariance(&self) -> &Matrix;

    /// `z − ẑ`, with any angular wrapping applied.
    fn innovation(&self, z: &Vector, predicted: &Vector) -> Vector {
        z - predicted
    }

    fn detection_probability(&self, x: &Vector) -> f64;

    /// Spatial clutter density `c(z)` (integrates to one over the clutter
    /// support).
    fn clutter_density(&self, z: &Vector) -> f64;

    /// State whose noise-free measurement is `z`, with zero velocity. Seeds
    /// measurement-driven birth.
    fn birth_state(&self, z: &Vector) -> Vector;
}

/// TOA/DOA sensor: `z = [atan2(Δx, Δy), ‖Δ‖] + ε` with `R = diag(σ_θ², σ_r²)`.
///
/// Bearings are measured from the +y axis towards +x. Detection probability is
/// `p_{D,0}` inside the FoV and zero outside.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeBearingSensor {
    pub position: [f64; 2],
    pub sigma_theta: f64,
    pub sigma_r: f64,
    pub fov: Fov,
    pub pd0: f64,
    noise: Matrix,
}

impl RangeBearingSensor {
    pub fn new(position: [f64; 2], sigma_theta: f64, sigma_r: f64, fov: Fov, pd0: f64) -> Self {
        Self {
            position,
            sigma_theta,
            sigma_r,
            fov,
            pd0,
            noise: Matrix::from_diagonal(&Vector::from_column_slice(&[
                sigma_theta * sigma_theta,
                sigma_r * sigma_r,
            ])),
        }
    }

    /// Circular FoV centred on the sensor.
    pub fn with_circular_fov(
        position: [f64; 2],
        radius: f64,
        sigma_theta: f64,
        sigma_r: f64,
        pd0: f64,
    ) -> Self {
        Self::new(
            position,
            sigma_theta,
            sigma_r,
            Fov::Circle {
                center: position,
                radius,
            },
            pd0,
        )
    }

    pub fn in_fov(&self, x: &Vector) -> bool {
        self.fov.contains([x[0], x[2]])
    }

    /// Measurement-space image of the FoV used as clutter support.
    ///
    /// A FoV that contains the sensor spans every bearing; otherwise the
    /// bearing interval is the one subtended by the region.
    pub fn measurement_region(&self) -> PolarRegion {
        let [sx, sy] = self.position;
        match &self.fov {
            Fov::Circle { center, radius } => {
                let dx = center[0] - sx;
                let dy = center[1] - sy;
                let dist = dx.hypot(dy);
                if dist <= *radius {
                    PolarRegion {
                        bearing_min: -PI,
                        bearing_max: PI,
                        max_range: dist + radius,
                    }
                } else {
                    let mid = dx.atan2(dy);
                    let half = (radius / dist).asin();
                    PolarRegion {
                        bearing_min: mid - half,
                        bearing_max: mid + half,
                        max_range: dist + radius,
                    }
                }
            }
            Fov::Polygon { vertices } => {
                let max_range = vertices
                    .iter()
                    .map(|v| (v[0] - sx).hypot(v[1] - sy))
                    .fold(0.0, f64::max);
                PolarRegion {
                    bearing_min: -PI,
                    bearing_max: PI,
                    max_range,
                }
            }
        }
    }
}

pub(crate) fn wrap_angle(a: f64) -> f64 {
    let mut a = (a + PI).rem_euclid(2.0 * PI) - PI;
    if a < -PI {
        a += 2.0 * PI;
    }
    a
}

impl MeasurementModel for RangeBearingSensor {
    fn measurement_dim(&self) -> usize {
        2
    }

    fn predict(&self, x: &Vector) -> Vector {
        let dx = x[0] - self.position[0];
        let dy = x[2] - self.position[1];
        Vector::from_column_slice(&[dx.atan2(dy), dx.hypot(dy)])
    }

    fn jacobian(&self, x: &Vector) -> Matrix {
        let dx = x[0] - self.position[0];
        let dy = x[2] - self.position[1];
        let r2 = (dx * dx + dy * dy).max(1e-12);
        let r = r2.sqrt();
        let mut h = Matrix::zeros(2, x.len());
        h[(0, 0)] = dy / r2;
        h[(0, 2)] = -dx / r2;
        h[(1, 0)] = dx / r;
        h[(1, 2)] = dy / r;
        h
    }

    fn noise_covariance(&self) -> &Matrix {
        &self.noise
    }

    fn innovation(&self, z: &Vector, predicted: &Vector) -> Vector {
        Vector::from_column_slice(&[wrap_angle(z[0] - predicted[0]), z[1] - predicted[1]])
    }

    fn detection_probability(&self, x: &Vector) -> f64 {
        if self.in_fov(x) {
            self.pd0
        } else {
            0.0
        }
    }

    // Uniform level of the clutter support, evaluated everywhere so that a
    // target return pushed just outside the support by noise still has a
    // finite likelihood ratio.
    fn clutter_density(&self, _z: &Vector) -> f64 {
        1.0 / self.measurement_region().area()
    }

    fn birth_state(&self, z: &Vector) -> Vector {
        let (theta, r) = (z[0], z[1]);
        Vector::from_column_slice(&[
            self.position[0] + r * theta.sin(),
            0.0,
            self.position[1] + r * theta.cos(),
            0.0,
        ])
    }
}

/// Linear sensor observing position `[px, py]` directly. Used as a surrogate
/// for checking the GM recursions against a Kalman filter.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearPositionSensor {
    pub pd: f64,
    /// Uniform clutter density over the surveillance region.
    pub clutter_level: f64,
    observation: Matrix,
    noise: Matrix,
}

impl LinearPositionSensor {
    pub fn new(noise: Matrix, pd: f64, clutter_level: f64) -> Self {
        let mut observation = Matrix::zeros(2, 4);
        observation[(0, 0)] = 1.0;
        observation[(1, 2)] = 1.0;
        Self {
            pd,
            clutter_level,
            observation,
            noise,
        }
    }

    pub fn observation_matrix(&self) -> &Matrix {
        &self.observation
    }
}

impl MeasurementModel for LinearPositionSensor {
    fn measurement_dim(&self) -> usize {
        2
    }

    fn predict(&self, x: &Vector) -> Vector {
        &self.observation * x
    }

    fn jacobian(&self, _x: &Vector) -> Matrix {
        self.observation.clone()
    }

    fn noise_covariance(&self) -> &Matrix {
        &self.noise
    }

    fn detection_probability(&self, _x: &Vector) -> f64 {
        self.pd
    }

    fn clutter_density(&self, _z: &Vector) -> f64 {
        self.clutter_level
    }

    fn birth_state(&self, z: &Vector) -> Vector {
        Vector::from_column_slice(&[z[0], 0.0, z[1], 0.0])
    }
}

/// Poisson clutter with mean count `λ_c` per scan, spread over the sensor's
/// clutter support: `κ(z) = λ_c c(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClutterModel {
    pub mean_count: f64,
}

impl ClutterModel {
    pub fn new(mean_count: f64) -> Self {
        Self { mean_count }
    }

    pub fn intensity<S: MeasurementModel + ?Sized>(&self, z: &Vector, sensor: &S) -> f64 {
        self.mean_count * sensor.clutter_density(z)
    }
}

/// Measurement-driven birth: each measurement of the previous scan seeds one
/// newborn component, and the newborn mass per scan totals `rate`.
#[derive(Debug, Clone, PartialEq)]
pub struct BirthModel {
    pub rate: f64,
    pub covariance: Matrix,
}

impl BirthModel {
    pub fn new(rate: f64, covariance: Matrix) -> Self {
        Self { rate, covariance }
    }

    /// Birth covariance `diag(std)²`.
    pub fn with_std(rate: f64, std: &[f64]) -> Self {
        let var: Vec<f64> = std.iter().map(|s| s * s).collect();
        Self::new(rate, Matrix::from_diagonal(&Vector::from_vec(var)))
    }

    pub fn components<S: MeasurementModel + ?Sized>(
        &self,
        measurements: &[Vector],
        sensor: &S,
    ) -> GmIntensity {
        if measurements.is_empty() || self.rate <= 0.0 {
            return GmIntensity::default();
        }
        let weight = self.rate / measurements.len() as f64;
        measurements
            .iter()
            .map(|z| GaussianComponent {
                weight,
                mean: sensor.birth_state(z),
                covariance: self.covariance.clone(),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_velocity_blocks() {
        let m = MotionModel::constant_velocity(1.0, 5.0, 0.95);
        let a = &m.transition;
        assert_eq!(a[(0, 1)], 1.0);
        assert_eq!(a[(2, 3)], 1.0);
        assert_eq!(a[(0, 2)], 0.0);
        let q = &m.process_noise;
        assert_eq!(q[(0, 0)], 25.0 / 4.0);
        assert_eq!(q[(0, 1)], 25.0 / 2.0);
        assert_eq!(q[(1, 1)], 25.0);
        assert_eq!(q[(2, 2)], 25.0 / 4.0);
        assert_eq!(q[(0, 2)], 0.0);
        // Q is PSD: its 2x2 blocks have zero determinant and positive trace.
        let eig = q.clone().symmetric_eigenvalues();
        assert!(eig.iter().all(|e| *e > -1e-9));
    }

    #[test]
    fn range_bearing_round_trip() {
        let s = RangeBearingSensor::with_circular_fov([100.0, -50.0], 1000.0, 0.01, 5.0, 0.9);
        let x = Vector::from_column_slice(&[400.0, 3.0, 350.0, -1.0]);
        let z = s.predict(&x);
        let back = s.birth_state(&z);
        assert!((back[0] - 400.0).abs() < 1e-9);
        assert!((back[2] - 350.0).abs() < 1e-9);
        assert_eq!(back[1], 0.0);
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let s = RangeBearingSensor::with_circular_fov([10.0, 20.0], 1000.0, 0.01, 5.0, 0.9);
        let x = Vector::from_column_slice(&[-300.0, 1.0, 250.0, 2.0]);
        let h = s.jacobian(&x);
        let eps = 1e-5;
        for col in 0..4 {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[col] += eps;
            xm[col] -= eps;
            let d = s.innovation(&s.predict(&xp), &s.predict(&xm)) / (2.0 * eps);
            for row in 0..2 {
                assert!((h[(row, col)] - d[row]).abs() < 1e-7, "({row},{col})");
            }
        }
    }

    #[test]
    fn detection_is_zero_outside_fov() {
        let s = RangeBearingSensor::with_circular_fov([0.0, 0.0], 100.0, 0.01, 5.0, 0.95);
        let inside = Vector::from_column_slice(&[50.0, 0.0, 50.0, 0.0]);
        let outside = Vector::from_column_slice(&[150.0, 0.0, 0.0, 0.0]);
        assert_eq!(s.detection_probability(&inside), 0.95);
        assert_eq!(s.detection_probability(&outside), 0.0);
    }

    #[test]
    fn clutter_support_of_centred_circle() {
        let s = RangeBearingSensor::with_circular_fov([0.0, 0.0], 1000.0, 0.01, 5.0, 0.95);
        let region = s.measurement_region();
        assert!((region.area() - 2.0 * PI * 1000.0).abs() < 1e-9);
        let c = ClutterModel::new(15.0);
        let z = Vector::from_column_slice(&[0.1, 10.0]);
        assert!((c.intensity(&z, &s) - 15.0 / (2.0 * PI * 1000.0)).abs() < 1e-15);
    }

    #[test]
    fn angle_wrapping() {
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-12);
        assert!((wrap_angle(-3.0 * PI / 2.0) - PI / 2.0).abs() < 1e-12);
        assert_eq!(wrap_angle(0.25), 0.25);
    }

    #[test]
    fn polygon_containment() {
        let fov = Fov::Polygon {
            vertices: vec![[0.0, 0.0], [10.0, 0.0], [10.0, 10.0], [0.0, 10.0]],
        };
        assert!(fov.contains([5.0, 5.0]));
        assert!(!fov.contains([15.0, 5.0]));
    }

    #[test]
    fn birth_mass_is_rate() {
        let s = RangeBearingSensor::with_circular_fov([0.0, 0.0], 1000.0, 0.01, 5.0, 0.95);
        let b = BirthModel::with_std(0.15, &[50.0, 20.0, 50.0, 20.0]);
        let z: Vec<Vector> = (0..7)
            .map(|i| Vector::from_column_slice(&[0.1 * i as f64, 100.0]))
            .collect();
        let born = b.components(&z, &s);
        assert_eq!(born.len(), 7);
        assert!((born.mass() - 0.15).abs() < 1e-15);
        assert_eq!(born.components[0].covariance[(1, 1)], 400.0);
        assert!(b.components(&[], &s).is_empty());
    }
}
