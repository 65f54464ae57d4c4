use crate::error::{Error, Result};
use crate::filter::{gm_reduce, ReduceParams};
use crate::fusion::{aa_fuse, check_omega, gci_fuse, FusionRule};
use crate::gm::{convolve_cardinality, GmIntensity, IidClusterDensity};

use super::clustering::cluster_components;
use super::split::{split_by_clusters, SubCardinality, SubIidCluster};

/// Settings of [`robust_fuse`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobustFusion {
    pub rule: FusionRule,
    /// Weight of the first density, in `(0, 1)`.
    pub omega: f64,
    /// Gating threshold on the corrected Mahalanobis distance.
    pub rho: f64,
    pub sub_cardinality: SubCardinality,
    /// Mixture reduction applied to the fused intensity; `None` keeps every
    /// component.
    pub reduce: Option<ReduceParams>,
}

impl Default for RobustFusion {
    fn default() -> Self {
        Self {
            rule: FusionRule::Gci,
            omega: 0.5,
            rho: 20.0,
            sub_cardinality: SubCardinality::MultiBernoulli,
            reduce: Some(ReduceParams::default()),
        }
    }
}

impl RobustFusion {
    pub fn with_rule(rule: FusionRule) -> Self {
        Self {
            rule,
            ..Self::default()
        }
    }
}

/// Fuses one group. A group seen by a single node is returned as that
/// node's sub-density; a group seen by two nodes is fused with `rule`, the
/// lower-indexed node receiving weight `omega`.
pub fn fuse_cluster(
    sub: &SubIidCluster,
    rule: FusionRule,
    omega: f64,
) -> Result<IidClusterDensity> {
    match sub.participants.as_slice() {
        [] => Err(Error::EmptyCluster(sub.id)),
        [i] => Ok(sub.density(*i)),
        [i, j] => {
            let (a, b) = (sub.density(*i), sub.density(*j));
            match rule {
                FusionRule::Gci => gci_fuse(&a, &b, omega),
                FusionRule::Aa => aa_fuse(&a, &b, omega),
            }
        }
        more => Err(Error::TooManyParticipants {
            cluster: sub.id,
            count: more.len(),
        }),
    }
}

/// Clustering-based fusion of two densities: cluster, split, fuse each
/// group, then sum the fused intensities and convolve the fused
/// cardinalities.
pub fn robust_fuse(
    a: &IidClusterDensity,
    b: &IidClusterDensity,
    params: &RobustFusion,
) -> Result<IidClusterDensity> {
    check_omega(params.omega)?;
    let n_max = a.n_max().max(b.n_max());
    let partition = cluster_components(&[&a.intensity, &b.intensity], params.rho)?;
    let subs = split_by_clusters(&[a, b], &partition, params.sub_cardinality)?;
    let fused = subs
        .iter()
        .map(|s| fuse_cluster(s, params.rule, params.omega))
        .collect::<Result<Vec<_>>>()?;

    let mut intensity = GmIntensity::default();
    for f in &fused {
        intensity.extend(f.intensity.clone());
    }
    let cards: Vec<_> = fused.iter().map(|f| &f.cardinality).collect();
    let cardinality = convolve_cardinality(&cards, n_max);
    let intensity = match &params.reduce {
        Some(r) => gm_reduce(&intensity, r)?,
        None => intensity,
    };
    Ok(IidClusterDensity::new(cardinality, intensity))
}
