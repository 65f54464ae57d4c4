//! Scenario files, ground truth, sensing and the distributed consensus loop.
//!
//! A [`ScenarioConfig`] describes the sensor network, the motion, clutter and
//! birth models, the true targets and the Monte Carlo protocol.
//! [`run_experiment`] executes that protocol and returns per-run, per-scan
//! statistics for every filter/fusion method.

mod config;
mod consensus;
mod experiment;
mod graph;
mod sensing;
pub mod seeds;
mod truth;

pub use config::{
    BirthConfig, ClutterConfig, Method, MotionConfig, NetworkConfig, NodeConfig, OneOrMany,
    OspaConfig, ReduceConfig, RunConfig, ScenarioConfig, TargetConfig, DEFAULT_SCENARIO,
    SCENARIO_VERSION,
};
pub use consensus::run_consensus_step;
pub use experiment::{
    evaluate_method, extraction_for, fusion_params, generate_run_scans, local_filters,
    run_experiment, run_method, ExperimentResult, RunScans,
};
pub use graph::NetworkGraph;
pub use sensing::generate_scan;
pub use truth::{generate_truth, GroundTruth};
