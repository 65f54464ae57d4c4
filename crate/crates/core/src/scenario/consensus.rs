use crate::error::Result;
use crate::gm::IidClusterDensity;
use crate::robust::{robust_fuse, RobustFusion};

use super::graph::NetworkGraph;

/// One synchronous consensus round: node `i` fuses its density with each
/// in-neighbor's, one pairwise fusion at a time in ascending neighbor order.
/// Every fusion reads the densities as they were before the round.
pub fn run_consensus_step(
    states: &[IidClusterDensity],
    graph: &NetworkGraph,
    params: &RobustFusion,
) -> Result<Vec<IidClusterDensity>> {
    (0..states.len())
        .map(|i| {
            graph
                .in_neighbors(i)
                .iter()
                .try_fold(states[i].clone(), |acc, &j| {
                    robust_fuse(&acc, &states[j], params)
                        .map_err(|e| e.context(format!("fusing node {j} into node {i}")))
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filter::RangeBearingSensor;
    use crate::gm::{CardinalityDistribution, GaussianComponent, GmIntensity};
    use crate::linalg::{Matrix, Vector};

    fn graph(n: usize, arcs: Vec<(usize, usize)>) -> NetworkGraph {
        let s = RangeBearingSensor::with_circular_fov([0.0, 0.0], 1000.0, 0.01, 5.0, 0.9);
        NetworkGraph::new((0..n).collect(), vec![s; n], arcs).unwrap()
    }

    fn density(w: f64, x: f64) -> IidClusterDensity {
        IidClusterDensity::new(
            CardinalityDistribution::new(vec![1.0 - w, w]).unwrap().truncated(20),
            GmIntensity::new(vec![GaussianComponent::new(
                w,
                Vector::from_column_slice(&[x, 0.0, 0.0, 0.0]),
                Matrix::identity(4, 4) * 25.0,
            )
            .unwrap()]),
        )
    }

    #[test]
    fn isolated_node_is_unchanged() {
        let s = vec![density(0.9, 0.0)];
        let out = run_consensus_step(&s, &graph(1, vec![]), &RobustFusion::default()).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn identical_pair_is_a_fixed_point() {
        let s = vec![density(0.9, 0.0), density(0.9, 0.0)];
        let g = graph(2, vec![(0, 1), (1, 0)]);
        let out = run_consensus_step(&s, &g, &RobustFusion::default()).unwrap();
        for d in &out {
            assert!((d.cardinality.prob(1) - 0.9).abs() < 1e-12);
            let c = &d.intensity.components[0];
            assert!((c.weight - 0.9).abs() < 1e-12);
            assert!((&c.covariance - &s[0].intensity.components[0].covariance).norm() < 1e-9);
        }
    }

    #[test]
    fn rounds_read_the_snapshot() {
        let s = vec![density(0.9, 0.0), density(0.6, 3.0), density(0.8, 900.0)];
        let g = graph(3, vec![(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]);
        let p = RobustFusion::default();
        let out = run_consensus_step(&s, &g, &p).unwrap();
        // Process nodes in reverse, each against the untouched snapshot.
        for i in (0..3).rev() {
            let mut acc = s[i].clone();
            for &j in g.in_neighbors(i) {
                acc = robust_fuse(&acc, &s[j], &p).unwrap();
            }
            assert_eq!(acc, out[i]);
        }
    }
}
