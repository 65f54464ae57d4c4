use crate::error::{Error, Result};
use crate::filter::{Fov, RangeBearingSensor};

use super::config::ScenarioConfig;

/// Sensor network: one sensor per node plus directed communication arcs.
///
/// Nodes are addressed by their position in the configuration (`0..len`);
/// `ids` keeps the configured identifiers.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkGraph {
    pub ids: Vec<usize>,
    pub sensors: Vec<RangeBearingSensor>,
    /// `(from, to)` node indices.
    pub arcs: Vec<(usize, usize)>,
    in_neighbors: Vec<Vec<usize>>,
}

impl NetworkGraph {
    pub fn new(
        ids: Vec<usize>,
        sensors: Vec<RangeBearingSensor>,
        arcs: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let n = sensors.len();
        if ids.len() != n {
            return Err(Error::invalid("network", "one id per sensor is required"));
        }
        let mut in_neighbors = vec![Vec::new(); n];
        for &(from, to) in &arcs {
            if from >= n || to >= n {
                return Err(Error::invalid(
                    "network",
                    format!("arc ({from}, {to}) leaves the node set"),
                ));
            }
            if from != to && !in_neighbors[to].contains(&from) {
                in_neighbors[to].push(from);
            }
        }
        in_neighbors.iter_mut().for_each(|v| v.sort_unstable());
        Ok(Self {
            ids,
            sensors,
            arcs,
            in_neighbors,
        })
    }

    pub fn from_config(cfg: &ScenarioConfig) -> Result<Self> {
        let nodes = &cfg.network.nodes;
        let index_of = |id: usize| {
            nodes
                .iter()
                .position(|n| n.id == id)
                .ok_or_else(|| Error::config("network.arcs", format!("unknown node id {id}")))
        };
        let sensors = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let fov = match &n.fov_polygon {
                    Some(vertices) => Fov::Polygon {
                        vertices: vertices.clone(),
                    },
                    None => Fov::Circle {
                        center: n.position,
                        radius: n.fov_radius,
                    },
                };
                RangeBearingSensor::new(n.position, n.sigma_theta, n.sigma_r, fov, cfg.node_pd0(i))
            })
            .collect();
        let arcs = cfg
            .network
            .arcs
            .iter()
            .map(|[from, to]| Ok((index_of(*from)?, index_of(*to)?)))
            .collect::<Result<_>>()?;
        Self::new(nodes.iter().map(|n| n.id).collect(), sensors, arcs)
    }

    pub fn len(&self) -> usize {
        self.sensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sensors.is_empty()
    }

    /// `{ j : (j, i) ∈ A }`, ascending.
    pub fn in_neighbors(&self, i: usize) -> &[usize] {
        &self.in_neighbors[i]
    }

    /// Whether `p` lies in node `i`'s FoV.
    pub fn sees(&self, i: usize, p: [f64; 2]) -> bool {
        self.sensors[i].fov.contains(p)
    }

    /// Common FoV of `i` and `j`.
    pub fn in_common_fov(&self, i: usize, j: usize, p: [f64; 2]) -> bool {
        self.sees(i, p) && self.sees(j, p)
    }

    /// Exclusive FoV of `i` with respect to `j`.
    pub fn in_exclusive_fov(&self, i: usize, j: usize, p: [f64; 2]) -> bool {
        self.sees(i, p) && !self.sees(j, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn neighborhoods_follow_the_arcs() {
        let cfg = ScenarioConfig::default_scenario();
        let g = NetworkGraph::from_config(&cfg).unwrap();
        assert_eq!(g.in_neighbors(0), &[1, 3]);
        assert_eq!(g.in_neighbors(2), &[1, 3]);
        let lone = NetworkGraph::new(vec![7], vec![g.sensors[0].clone()], vec![]).unwrap();
        assert!(lone.in_neighbors(0).is_empty());
        assert!(NetworkGraph::new(vec![1], vec![g.sensors[0].clone()], vec![(0, 1)]).is_err());
    }

    #[test]
    fn fov_pieces_partition_the_union() {
        let g = NetworkGraph::from_config(&ScenarioConfig::default_scenario()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20_000 {
            let p = [rng.random_range(-2000.0..2000.0), rng.random_range(-2000.0..2000.0)];
            let (c, ei, ej) = (
                g.in_common_fov(0, 1, p),
                g.in_exclusive_fov(0, 1, p),
                g.in_exclusive_fov(1, 0, p),
            );
            assert!(u8::from(c) + u8::from(ei) + u8::from(ej) <= 1);
            assert_eq!(c || ei || ej, g.sees(0, p) || g.sees(1, p));
        }
    }
}
