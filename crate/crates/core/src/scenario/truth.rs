use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::filter::MotionModel;
use crate::linalg::Vector;

use super::config::ScenarioConfig;
use super::seeds::{stream, TRUTH_STREAM};

/// True trajectories over the scan horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    /// `states[t][k]`: state of target `t` at scan `k`, `None` when absent.
    pub states: Vec<Vec<Option<Vector>>>,
    pub scans: usize,
}

impl GroundTruth {
    /// States of the targets alive at scan `k`.
    pub fn targets_at(&self, k: usize) -> Vec<&Vector> {
        self.states.iter().filter_map(|s| s[k].as_ref()).collect()
    }

    /// Positions `[px, py]` of the targets alive at scan `k`.
    pub fn positions_at(&self, k: usize) -> Vec<[f64; 2]> {
        self.targets_at(k).iter().map(|x| [x[0], x[2]]).collect()
    }

    pub fn cardinality(&self, k: usize) -> usize {
        self.states.iter().filter(|s| s[k].is_some()).count()
    }
}

/// Propagates each configured target from its birth scan with the
/// constant-velocity mean dynamics plus process noise of intensity
/// `motion.truth_sigma_w`, drawn from the truth stream of `seed`.
pub fn generate_truth(cfg: &ScenarioConfig, seed: u64) -> Result<GroundTruth> {
    let scans = cfg.run.scans;
    let motion = MotionModel::constant_velocity(cfg.motion.ts, 0.0, 1.0);
    let (ts, sigma) = (cfg.motion.ts, cfg.motion.truth_sigma_w);
    let mut rng = stream(seed, TRUTH_STREAM, 0);
    let mut states = Vec::with_capacity(cfg.targets.len());
    for t in &cfg.targets {
        let mut track = vec![None; scans];
        let mut x = Vector::from_column_slice(&t.initial_state);
        for (k, slot) in track.iter_mut().enumerate().take(t.death_scan.min(scans)) {
            if k < t.birth_scan {
                continue;
            }
            if k > t.birth_scan {
                x = motion.predict_mean(&x);
                if sigma > 0.0 {
                    // Piecewise-constant white acceleration: the noise enters
                    // through G = [T²/2, T] on each axis.
                    for axis in 0..2 {
                        let a: f64 = sigma * rng.sample::<f64, _>(StandardNormal);
                        x[2 * axis] += 0.5 * ts * ts * a;
                        x[2 * axis + 1] += ts * a;
                    }
                }
            }
            *slot = Some(x.clone());
        }
        states.push(track);
    }
    Ok(GroundTruth { states, scans })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_tracks_are_straight_lines() {
        let cfg = ScenarioConfig::default_scenario();
        let truth = generate_truth(&cfg, 1).unwrap();
        let a = truth.states[0][10].as_ref().unwrap();
        let b = truth.states[0][11].as_ref().unwrap();
        let motion = MotionModel::constant_velocity(1.0, 0.0, 1.0);
        assert!((motion.predict_mean(a) - b).norm() < 1e-9);
        assert_eq!(truth.cardinality(0), 1);
        assert_eq!(truth.cardinality(99), 5);
        assert!(truth.states[1][5].is_none());
        assert!(truth.states[1][6].is_some());
    }

    #[test]
    fn no_targets_no_truth() {
        let mut cfg = ScenarioConfig::default_scenario();
        cfg.targets.clear();
        let truth = generate_truth(&cfg, 1).unwrap();
        assert!((0..cfg.run.scans).all(|k| truth.cardinality(k) == 0));
    }

    #[test]
    fn seeded_noise_is_reproducible() {
        let mut cfg = ScenarioConfig::default_scenario();
        cfg.motion.truth_sigma_w = 0.5;
        let a = generate_truth(&cfg, 9).unwrap();
        assert_eq!(a, generate_truth(&cfg, 9).unwrap());
        assert_ne!(a, generate_truth(&cfg, 10).unwrap());
    }
}
