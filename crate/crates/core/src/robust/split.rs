use crate::error::{Error, Result};
use crate::gm::{
    mb_cardinality, BernoulliSet, CardinalityDistribution, GmIntensity, IidClusterDensity,
};

use super::clustering::ClusterPartition;

/// How a node's cardinality is reconstructed for a group that holds only
/// part of its components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SubCardinality {
    /// Multi-Bernoulli with existence probabilities equal to the (clamped)
    /// component weights. Suited to CPHD densities.
    #[default]
    MultiBernoulli,
    /// Poisson with mean equal to the sub-intensity mass, matching the
    /// Poisson assumption of a PHD density.
    Poisson,
}

/// One group of components viewed from every node.
#[derive(Debug, Clone, PartialEq)]
pub struct SubIidCluster {
    pub id: usize,
    /// Per node, that node's components falling in this group (possibly none).
    pub sub_intensities: Vec<GmIntensity>,
    /// Per node, the reconstructed cardinality of the group.
    pub cardinalities: Vec<CardinalityDistribution>,
    /// Nodes holding at least one component of the group, ascending.
    pub participants: Vec<usize>,
}

impl SubIidCluster {
    /// Node `i`'s sub-density of this group.
    pub fn density(&self, node: usize) -> IidClusterDensity {
        IidClusterDensity::new(
            self.cardinalities[node].clone(),
            self.sub_intensities[node].clone(),
        )
    }
}

/// Splits each node's density along the partition.
///
/// A node's share of a group is the sum of its components in that group.
/// Its cardinality is rebuilt according to `mode`, except when the group
/// holds all of the node's components: then the share is the whole density
/// and the node's own cardinality is used as is. Nodes with no component in
/// a group get the zero intensity and `δ₀`, and do not participate.
pub fn split_by_clusters(
    nodes: &[&IidClusterDensity],
    partition: &ClusterPartition,
    mode: SubCardinality,
) -> Result<Vec<SubIidCluster>> {
    let n_max = nodes.iter().map(|d| d.n_max()).max().unwrap_or(0);
    partition
        .clusters()
        .iter()
        .enumerate()
        .map(|(g, members)| {
            let mut sub = vec![GmIntensity::default(); nodes.len()];
            for ix in members {
                let comp = nodes
                    .get(ix.node)
                    .and_then(|d| d.intensity.components.get(ix.component))
                    .ok_or(Error::IndexOutOfRange {
                        node: ix.node,
                        component: ix.component,
                    })?;
                sub[ix.node].push(comp.clone());
            }
            let cardinalities = sub
                .iter()
                .zip(nodes)
                .map(|(v, node)| {
                    if v.is_empty() {
                        CardinalityDistribution::delta(0, n_max)
                    } else if v.len() == node.intensity.len() {
                        node.cardinality.truncated(n_max)
                    } else {
                        match mode {
                            SubCardinality::MultiBernoulli => mb_cardinality(
                                &BernoulliSet::from_weights(&v.weights()),
                                n_max,
                            ),
                            SubCardinality::Poisson => {
                                CardinalityDistribution::poisson(v.mass(), n_max)
                            }
                        }
                    }
                })
                .collect();
            let participants = (0..nodes.len()).filter(|&i| !sub[i].is_empty()).collect();
            Ok(SubIidCluster {
                id: g,
                sub_intensities: sub,
                cardinalities,
                participants,
            })
        })
        .collect()
}
