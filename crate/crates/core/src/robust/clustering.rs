use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::gm::GmIntensity;

use super::distance::{corrected_mahalanobis, GcIndex};

/// Grouping of the Gaussian components of several nodes.
///
/// A valid partition with gating threshold `ρ` satisfies:
///
/// 1. inside a cluster with more than one member, every member has another
///    member at distance `≤ ρ`;
/// 2. any two members of different clusters are more than `ρ` apart.
///
/// Clusters are ordered by their smallest member, members in ascending
/// `(node, component)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterPartition {
    clusters: Vec<Vec<GcIndex>>,
    rho: f64,
}

impl ClusterPartition {
    pub fn clusters(&self) -> &[Vec<GcIndex>] {
        &self.clusters
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Cluster containing `index`, if any.
    pub fn cluster_of(&self, index: GcIndex) -> Option<usize> {
        self.clusters
            .iter()
            .position(|c| c.binary_search(&index).is_ok())
    }

    /// Checks that the partition covers every component of `nodes` exactly
    /// once and satisfies both clustering conditions.
    pub fn validate(&self, nodes: &[&GmIntensity]) -> Result<()> {
        let mut seen: Vec<Vec<bool>> = nodes.iter().map(|v| vec![false; v.len()]).collect();
        for idx in self.clusters.iter().flatten() {
            let slot = seen
                .get_mut(idx.node)
                .and_then(|s| s.get_mut(idx.component))
                .ok_or(Error::IndexOutOfRange {
                    node: idx.node,
                    component: idx.component,
                })?;
            if *slot {
                return Err(Error::invalid(
                    "cluster partition",
                    format!("{idx:?} appears twice"),
                ));
            }
            *slot = true;
        }
        if seen.iter().flatten().any(|s| !s) {
            return Err(Error::invalid("cluster partition", "a component is unassigned"));
        }

        let dist = |a: GcIndex, b: GcIndex| {
            corrected_mahalanobis(
                &nodes[a.node].components[a.component],
                &nodes[b.node].components[b.component],
            )
        };
        for (g, cluster) in self.clusters.iter().enumerate() {
            if cluster.len() > 1 {
                for &a in cluster {
                    let mut linked = false;
                    for &b in cluster {
                        if a != b && dist(a, b)? <= self.rho {
                            linked = true;
                            break;
                        }
                    }
                    if !linked {
                        return Err(Error::invalid(
                            "cluster partition",
                            format!("{a:?} is isolated inside cluster {g}"),
                        ));
                    }
                }
            }
            for other in &self.clusters[g + 1..] {
                for &a in cluster {
                    for &b in other {
                        if dist(a, b)? <= self.rho {
                            return Err(Error::invalid(
                                "cluster partition",
                                format!("{a:?} and {b:?} are within the gate but split"),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Groups the components of all `nodes` with gating threshold `rho`.
///
/// Seeds are taken greedily in `(node, component)` order: the lowest
/// unassigned component opens a cluster and pulls in every unassigned
/// component closer than `rho`. The greedy pass can leave two clusters with
/// members within `rho` of each other, so such clusters are then unioned
/// until no cross-cluster pair is within the gate.
pub fn cluster_components(nodes: &[&GmIntensity], rho: f64) -> Result<ClusterPartition> {
    if !(rho > 0.0) {
        return Err(Error::invalid("gating threshold", format!("rho = {rho}")));
    }
    let indices: Vec<GcIndex> = nodes
        .iter()
        .enumerate()
        .flat_map(|(i, v)| (0..v.len()).map(move |p| GcIndex::new(i, p)))
        .collect();
    let comps: Vec<_> = indices
        .iter()
        .map(|ix| &nodes[ix.node].components[ix.component])
        .collect();
    let n = comps.len();
    // |Δ|² / tr(Pa + Pb) never exceeds the corrected distance, so pairs it
    // already puts past the gate skip the factorisation.
    let traces: Vec<f64> = comps.iter().map(|c| c.covariance.trace()).collect();
    let mut dist = vec![0.0; n * n];
    for a in 0..n {
        for b in a + 1..n {
            let gap: f64 = comps[a]
                .mean
                .iter()
                .zip(comps[b].mean.iter())
                .map(|(x, y)| (x - y) * (x - y))
                .sum();
            let d = if gap > rho * (traces[a] + traces[b]) {
                f64::INFINITY
            } else {
                corrected_mahalanobis(comps[a], comps[b])?
            };
            dist[a * n + b] = d;
            dist[b * n + a] = d;
        }
    }

    let mut label = vec![usize::MAX; n];
    let mut seeds = 0;
    for seed in 0..n {
        if label[seed] != usize::MAX {
            continue;
        }
        label[seed] = seeds;
        for j in seed + 1..n {
            if label[j] == usize::MAX && dist[seed * n + j] < rho {
                label[j] = seeds;
            }
        }
        seeds += 1;
    }

    let mut uf = UnionFind::<usize>::new(seeds);
    for a in 0..n {
        for b in a + 1..n {
            if label[a] != label[b] && dist[a * n + b] <= rho {
                uf.union(label[a], label[b]);
            }
        }
    }

    // Index order is (node, component) order, so clusters come out sorted
    // by smallest member and with sorted members.
    let mut root_to_cluster = vec![usize::MAX; seeds];
    let mut clusters: Vec<Vec<GcIndex>> = Vec::new();
    for (k, ix) in indices.into_iter().enumerate() {
        let root = uf.find(label[k]);
        if root_to_cluster[root] == usize::MAX {
            root_to_cluster[root] = clusters.len();
            clusters.push(Vec::new());
        }
        clusters[root_to_cluster[root]].push(ix);
    }
    Ok(ClusterPartition { clusters, rho })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gm::GaussianComponent;
    use crate::linalg::{Matrix, Vector};
    use proptest::prelude::*;

    // With unit covariances the corrected distance is |Δm|²/2.
    fn at(xs: &[f64]) -> GmIntensity {
        xs.iter()
            .map(|&x| {
                GaussianComponent::new(
                    0.9,
                    Vector::from_column_slice(&[x, 0.0]),
                    Matrix::identity(2, 2),
                )
                .unwrap()
            })
            .collect()
    }

    #[test]
    fn close_pair_is_one_cluster() {
        let (a, b) = (at(&[0.0]), at(&[2f64.sqrt()]));
        let p = cluster_components(&[&a, &b], 4.0).unwrap();
        assert_eq!(p.len(), 1);
        p.validate(&[&a, &b]).unwrap();
    }

    #[test]
    fn distant_pair_is_two_singletons() {
        let (a, b) = (at(&[0.0]), at(&[20f64.sqrt()]));
        let p = cluster_components(&[&a, &b], 4.0).unwrap();
        assert_eq!(
            p.clusters(),
            &[vec![GcIndex::new(0, 0)], vec![GcIndex::new(1, 0)]]
        );
    }

    #[test]
    fn chains_are_closed_transitively() {
        // d(a,b) = d(b,c) = 3, d(a,c) = 12: the greedy seed at `a` misses
        // `c`, and the union step must bring it back.
        let s = 6f64.sqrt();
        let (n0, n1) = (at(&[0.0, 2.0 * s]), at(&[s]));
        let p = cluster_components(&[&n0, &n1], 4.0).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.clusters()[0].len(), 3);
        p.validate(&[&n0, &n1]).unwrap();
    }

    #[test]
    fn empty_nodes_give_no_clusters() {
        let e = GmIntensity::default();
        assert!(cluster_components(&[&e, &e], 20.0).unwrap().is_empty());
        assert!(cluster_components(&[&e], 0.0).is_err());
    }

    #[test]
    fn validation_rejects_bad_partitions() {
        let (a, b) = (at(&[0.0]), at(&[1.0]));
        let split = ClusterPartition {
            clusters: vec![vec![GcIndex::new(0, 0)], vec![GcIndex::new(1, 0)]],
            rho: 4.0,
        };
        assert!(split.validate(&[&a, &b]).is_err());
        let missing = ClusterPartition {
            clusters: vec![vec![GcIndex::new(0, 0)]],
            rho: 4.0,
        };
        assert!(missing.validate(&[&a, &b]).is_err());
    }

    proptest! {
        #[test]
        fn output_is_always_valid(
            xa in prop::collection::vec(-30.0f64..30.0, 0..8),
            xb in prop::collection::vec(-30.0f64..30.0, 0..8),
            rho in 0.5f64..40.0,
        ) {
            let (a, b) = (at(&xa), at(&xb));
            let p = cluster_components(&[&a, &b], rho).unwrap();
            prop_assert!(p.validate(&[&a, &b]).is_ok());
        }
    }
}
