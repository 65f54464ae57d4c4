//! How much mass is misplaced when a mixture is split along a clustering.
//!
//! Splitting node `i`'s intensity `v` into per-group mixtures `v̂_g` is
//! exact only if each group's components had all their mass inside a region
//! `X_g` of its own. With `δ = ρ/4`, the `δ`-ellipsoids of components from
//! different groups are disjoint, so the error is bounded by the mass lying
//! outside every component's own ellipsoid:
//!
//! ```text
//! ‖1_{X_g} v − v̂_g‖₁ ≤ μ (1 − F(δ, d))
//! ```
//!
//! where `μ = ∫ v` and `F(·, d)` is the χ² CDF with `d` degrees of freedom.
//!
//! The regions used for the numerical check assign each point to the group
//! of the component that is closest in Mahalanobis distance, which realizes
//! the disjoint-ellipsoid construction.

use rand::Rng;
use rand_distr::StandardNormal;
use statrs::function::gamma::gamma_lr;

use crate::error::{Error, Result};
use crate::gm::{GaussianComponent, GmIntensity};
use crate::linalg::{self, Matrix, Vector};

use super::clustering::ClusterPartition;

/// χ² CDF `F(δ, d)`, the regularized lower incomplete gamma `P(d/2, δ/2)`.
pub fn chi2_cdf(delta: f64, dof: usize) -> f64 {
    if delta <= 0.0 {
        0.0
    } else if delta.is_infinite() {
        1.0
    } else {
        gamma_lr(dof as f64 / 2.0, delta / 2.0)
    }
}

/// `μ (1 − F(δ, d))`, provided `δ ≤ ρ/4`.
pub fn split_error_bound(mass: f64, delta: f64, rho: f64, dof: usize) -> Result<f64> {
    let limit = rho / 4.0;
    if !(delta >= 0.0) || delta > limit {
        return Err(Error::BoundPrecondition { delta, limit });
    }
    Ok(mass * (1.0 - chi2_cdf(delta, dof)))
}

/// Per (node, group) error estimate next to its bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundEntry {
    pub node: usize,
    pub cluster: usize,
    /// Numerically integrated `‖1_{X_g} v − v̂_g‖₁`.
    pub numerical: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorBoundReport {
    pub delta: f64,
    pub dof: usize,
    pub entries: Vec<BoundEntry>,
}

impl ErrorBoundReport {
    /// Largest `numerical − bound` over all entries.
    pub fn worst_slack(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.numerical - e.bound)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `{x : (x − m)ᵀ P⁻¹ (x − m) ≤ δ}`.
#[derive(Debug, Clone)]
pub struct Ellipsoid {
    center: Vector,
    factor: Matrix,
    precision: Matrix,
    delta: f64,
}

impl Ellipsoid {
    pub fn new(gc: &GaussianComponent, delta: f64) -> Result<Self> {
        let chol = linalg::cholesky(&gc.covariance, "ellipsoid shape")?;
        Ok(Self {
            center: gc.mean.clone(),
            factor: chol.l(),
            precision: chol.inverse(),
            delta,
        })
    }

    pub fn contains(&self, x: &Vector) -> bool {
        let d = x - &self.center;
        d.dot(&(&self.precision * &d)) <= self.delta
    }

    /// Uniform sample: a uniform point of the unit ball, scaled by `√δ` and
    /// mapped through the Cholesky factor.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector {
        let dim = self.center.len();
        let dir = Vector::from_iterator(dim, (0..dim).map(|_| rng.sample(StandardNormal)));
        let radius = rng.random::<f64>().powf(1.0 / dim as f64);
        let u = dir.normalize() * radius;
        &self.center + &self.factor * u * self.delta.sqrt()
    }
}

struct Whitened {
    mean: [f64; 2],
    precision: [f64; 3],
    norm: f64,
    weight: f64,
}

impl Whitened {
    fn new(gc: &GaussianComponent) -> Result<Self> {
        let chol = linalg::cholesky(&gc.covariance, "bound grid component")?;
        let p = chol.inverse();
        Ok(Self {
            mean: [gc.mean[0], gc.mean[1]],
            precision: [p[(0, 0)], p[(0, 1)], p[(1, 1)]],
            norm: (-(2.0 * std::f64::consts::PI).ln() - 0.5 * linalg::ln_det(&chol)).exp(),
            weight: gc.weight,
        })
    }

    fn mahalanobis(&self, x: f64, y: f64) -> f64 {
        let (dx, dy) = (x - self.mean[0], y - self.mean[1]);
        let [a, b, c] = self.precision;
        a * dx * dx + 2.0 * b * dx * dy + c * dy * dy
    }

    fn value(&self, x: f64, y: f64) -> f64 {
        self.weight * self.norm * (-0.5 * self.mahalanobis(x, y)).exp()
    }
}

/// Bound report for 2-D mixtures, with the L1 errors integrated on a
/// midpoint grid of `cells × cells` over the box enclosing every mean ± 6σ.
///
/// `delta` must not exceed `ρ/4` of the partition.
pub fn error_bound_report(
    nodes: &[&GmIntensity],
    partition: &ClusterPartition,
    delta: f64,
    cells: usize,
) -> Result<ErrorBoundReport> {
    let comps: Vec<Vec<Whitened>> = nodes
        .iter()
        .map(|v| {
            v.iter()
                .map(|c| {
                    linalg::check_dim(2, c.dim())?;
                    Whitened::new(c)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut group: Vec<Vec<usize>> = nodes.iter().map(|v| vec![0; v.len()]).collect();
    for (g, members) in partition.clusters().iter().enumerate() {
        for ix in members {
            group[ix.node][ix.component] = g;
        }
    }

    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for c in nodes.iter().flat_map(|v| v.iter()) {
        for k in 0..2 {
            let s = 6.0 * c.covariance[(k, k)].sqrt();
            lo[k] = lo[k].min(c.mean[k] - s);
            hi[k] = hi[k].max(c.mean[k] + s);
        }
    }

    let n_groups = partition.len();
    let mut l1 = vec![vec![0.0; n_groups]; nodes.len()];
    if n_groups > 0 {
        let h = [(hi[0] - lo[0]) / cells as f64, (hi[1] - lo[1]) / cells as f64];
        let area = h[0] * h[1];
        let mut in_group = vec![0.0; n_groups];
        for i in 0..cells {
            let x = lo[0] + (i as f64 + 0.5) * h[0];
            for j in 0..cells {
                let y = lo[1] + (j as f64 + 0.5) * h[1];
                // Region of the point: group of the nearest component overall.
                let mut owner = 0;
                let mut best = f64::INFINITY;
                for (node, cs) in comps.iter().enumerate() {
                    for (p, c) in cs.iter().enumerate() {
                        let d = c.mahalanobis(x, y);
                        if d < best {
                            best = d;
                            owner = group[node][p];
                        }
                    }
                }
                for (node, cs) in comps.iter().enumerate() {
                    in_group.iter_mut().for_each(|v| *v = 0.0);
                    for (p, c) in cs.iter().enumerate() {
                        in_group[group[node][p]] += c.value(x, y);
                    }
                    let total: f64 = in_group.iter().sum();
                    for g in 0..n_groups {
                        let restricted = if g == owner { total } else { 0.0 };
                        l1[node][g] += (restricted - in_group[g]).abs() * area;
                    }
                }
            }
        }
    }

    let mut entries = Vec::new();
    for (node, v) in nodes.iter().enumerate() {
        let bound = split_error_bound(v.mass(), delta, partition.rho(), 2)?;
        for (g, numerical) in l1[node].iter().enumerate() {
            entries.push(BoundEntry {
                node,
                cluster: g,
                numerical: *numerical,
                bound,
            });
        }
    }
    Ok(ErrorBoundReport {
        delta,
        dof: 2,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::robust::cluster_components;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn chi2_examples() {
        assert_eq!(chi2_cdf(0.0, 3), 0.0);
        assert!((chi2_cdf(2.0, 2) - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
        assert!((chi2_cdf(1e4, 4) - 1.0).abs() < 1e-12);
        assert_eq!(chi2_cdf(f64::INFINITY, 4), 1.0);
        // d = 4 closed form: 1 − e^{−x/2}(1 + x/2).
        for x in [0.5, 3.0, 9.0] {
            let want = 1.0 - (-x / 2.0f64).exp() * (1.0 + x / 2.0);
            assert!((chi2_cdf(x, 4) - want).abs() < 1e-10);
        }
    }

    #[test]
    fn bound_examples() {
        let b = split_error_bound(1.0, 2.0, 8.0, 2).unwrap();
        assert!((b - (-1.0f64).exp()).abs() < 1e-12);
        assert_eq!(split_error_bound(0.0, 2.0, 8.0, 2).unwrap(), 0.0);
        assert!(split_error_bound(1.0, 1e3, 1e4, 2).unwrap() < 1e-100);
        assert!(matches!(
            split_error_bound(1.0, 3.0, 8.0, 2),
            Err(Error::BoundPrecondition { .. })
        ));
    }

    #[test]
    fn ellipsoid_samples_stay_inside() {
        let gc = GaussianComponent::new(
            1.0,
            Vector::from_column_slice(&[1.0, -2.0]),
            Matrix::from_row_slice(2, 2, &[4.0, 1.0, 1.0, 2.0]),
        )
        .unwrap();
        let e = Ellipsoid::new(&gc, 3.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            assert!(e.contains(&e.sample(&mut rng)));
        }
    }

    #[test]
    fn separated_groups_respect_the_bound() {
        let gc = |w: f64, x: f64, y: f64, s: f64| {
            GaussianComponent::new(
                w,
                Vector::from_column_slice(&[x, y]),
                Matrix::identity(2, 2) * s,
            )
            .unwrap()
        };
        let a = GmIntensity::new(vec![gc(0.9, 0.0, 0.0, 1.0), gc(0.7, 8.0, 1.0, 2.0)]);
        let b = GmIntensity::new(vec![gc(0.8, 0.5, 0.0, 1.5)]);
        let rho = 10.0;
        let part = cluster_components(&[&a, &b], rho).unwrap();
        assert_eq!(part.len(), 2);
        let r = error_bound_report(&[&a, &b], &part, rho / 4.0, 300).unwrap();
        assert!(r.worst_slack() <= 1e-3, "{r:?}");
        assert!(r.entries.iter().all(|e| e.numerical > 0.0));
    }
}
