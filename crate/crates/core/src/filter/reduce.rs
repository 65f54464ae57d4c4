use crate::error::Result;
use crate::gm::{GaussianComponent, GmIntensity};
use crate::linalg::{self, Matrix, Vector};

/// Pruning, merging and capping settings for [`gm_reduce`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReduceParams {
    /// Components with weight at or below this are dropped.
    pub prune_threshold: f64,
    /// Squared Mahalanobis radius for merging.
    pub merge_threshold: f64,
    pub max_components: usize,
}

impl Default for ReduceParams {
    fn default() -> Self {
        Self {
            prune_threshold: 1e-5,
            merge_threshold: 4.0,
            max_components: 40,
        }
    }
}

/// Prune, greedily merge, then cap a mixture.
///
/// Merging repeatedly takes the heaviest remaining component `j` and fuses
/// every `i` with `(mᵢ − mⱼ)ᵀ Pᵢ⁻¹ (mᵢ − mⱼ) ≤ merge_threshold` into one
/// moment-matched component. The `max_components` heaviest survivors are
/// kept. Pruned or capped mass is discarded, not redistributed. Survivors keep
/// the relative order of their heaviest member in the input.
pub fn gm_reduce(v: &GmIntensity, params: &ReduceParams) -> Result<GmIntensity> {
    let kept: Vec<&GaussianComponent> = v
        .iter()
        .filter(|c| c.weight > params.prune_threshold)
        .collect();
    let chols = kept
        .iter()
        .map(|c| linalg::cholesky(&c.covariance, "component covariance"))
        .collect::<Result<Vec<_>>>()?;
    let traces: Vec<f64> = kept.iter().map(|c| c.covariance.trace()).collect();

    let mut remaining: Vec<usize> = (0..kept.len()).collect();
    let mut groups: Vec<(usize, GaussianComponent)> = Vec::new();
    while !remaining.is_empty() {
        let anchor = *remaining
            .iter()
            .reduce(|best, i| {
                if kept[*i].weight > kept[*best].weight {
                    i
                } else {
                    best
                }
            })
            .expect("non-empty");
        let (members, rest): (Vec<usize>, Vec<usize>) = remaining.iter().partition(|&&i| {
            if i == anchor {
                return true;
            }
            // |d|² / tr(Pᵢ) is a lower bound on the Mahalanobis form.
            if squared_gap(&kept[i].mean, &kept[anchor].mean)
                > params.merge_threshold * traces[i]
            {
                return false;
            }
            let d = &kept[i].mean - &kept[anchor].mean;
            linalg::quad_form(&chols[i], &d) <= params.merge_threshold
        });
        remaining = rest;
        groups.push((anchor, merge(&members.iter().map(|&i| kept[i]).collect::<Vec<_>>())));
    }

    if groups.len() > params.max_components {
        groups.sort_by(|a, b| b.1.weight.total_cmp(&a.1.weight).then(a.0.cmp(&b.0)));
        groups.truncate(params.max_components);
    }
    groups.sort_by_key(|g| g.0);
    Ok(groups.into_iter().map(|g| g.1).collect())
}

fn squared_gap(a: &Vector, b: &Vector) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Moment-preserving merge of a group of components.
fn merge(members: &[&GaussianComponent]) -> GaussianComponent {
    if let [only] = members {
        return (*only).clone();
    }
    let weight: f64 = members.iter().map(|c| c.weight).sum();
    let dim = members[0].dim();
    let mean = members
        .iter()
        .fold(Vector::zeros(dim), |acc, c| acc + &c.mean * c.weight)
        / weight;
    let covariance = members.iter().fold(Matrix::zeros(dim, dim), |acc, c| {
        let d = &c.mean - &mean;
        acc + (&c.covariance + &d * d.transpose()) * c.weight
    }) / weight;
    GaussianComponent {
        weight,
        mean,
        covariance: linalg::symmetrize(&covariance),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gc(w: f64, x: f64) -> GaussianComponent {
        GaussianComponent::new(
            w,
            Vector::from_column_slice(&[x, 0.0]),
            Matrix::identity(2, 2),
        )
        .unwrap()
    }

    #[test]
    fn far_apart_components_pass_through() {
        let v = GmIntensity::new(vec![gc(0.2, 0.0), gc(0.9, 100.0), gc(0.5, 200.0)]);
        assert_eq!(gm_reduce(&v, &ReduceParams::default()).unwrap(), v);
    }

    #[test]
    fn identical_components_merge() {
        let v = GmIntensity::new(vec![gc(0.3, 5.0), gc(0.3, 5.0)]);
        let out = gm_reduce(&v, &ReduceParams::default()).unwrap();
        assert_eq!(out.len(), 1);
        let c = &out.components[0];
        assert!((c.weight - 0.6).abs() < 1e-15);
        assert!((c.mean[0] - 5.0).abs() < 1e-15);
        assert!((&c.covariance - Matrix::identity(2, 2)).amax() < 1e-15);
    }

    #[test]
    fn merge_preserves_moments() {
        let v = GmIntensity::new(vec![gc(0.25, 0.0), gc(0.75, 1.0)]);
        let out = gm_reduce(&v, &ReduceParams::default()).unwrap();
        let c = &out.components[0];
        assert!((c.mean[0] - 0.75).abs() < 1e-15);
        // 1 + Σ w (x − x̄)² = 1 + 0.25·0.5625 + 0.75·0.0625
        assert!((c.covariance[(0, 0)] - 1.1875).abs() < 1e-15);
    }

    #[test]
    fn cap_keeps_heaviest() {
        let v: GmIntensity = (0..50).map(|i| gc(0.01 * (i + 1) as f64, 100.0 * i as f64)).collect();
        let out = gm_reduce(&v, &ReduceParams::default()).unwrap();
        assert_eq!(out.len(), 40);
        let min_kept = out.iter().map(|c| c.weight).fold(f64::INFINITY, f64::min);
        assert!((min_kept - 0.11).abs() < 1e-12);
    }

    #[test]
    fn prune_discards_mass() {
        let v = GmIntensity::new(vec![gc(1e-6, 0.0), gc(0.5, 100.0)]);
        let out = gm_reduce(&v, &ReduceParams::default()).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out.mass(), 0.5);
    }
}
