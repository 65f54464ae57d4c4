use rayon::prelude::*;

use crate::error::Result;
use crate::filter::{
    BirthModel, ClutterModel, FilterKind, LocalFilter, MotionModel, RangeBearingSensor,
};
use crate::gm::IidClusterDensity;
use crate::linalg::{Matrix, Vector};
use crate::metrics::{aggregate, extract_estimates, ospa, Extraction, OspaParams, RunRecord, Summary};
use crate::robust::{RobustFusion, SubCardinality};

use super::config::{Method, ScenarioConfig};
use super::consensus::run_consensus_step;
use super::graph::NetworkGraph;
use super::sensing::generate_scan;
use super::seeds::stream;
use super::truth::{generate_truth, GroundTruth};

/// Raw output of [`run_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub truth: GroundTruth,
    pub methods: Vec<Method>,
    /// One record per (run, method), runs outermost.
    pub records: Vec<RunRecord>,
}

impl ExperimentResult {
    pub fn true_cardinality(&self) -> Vec<usize> {
        (0..self.truth.scans).map(|k| self.truth.cardinality(k)).collect()
    }

    pub fn summary(&self) -> Summary {
        aggregate(&self.records, &self.true_cardinality())
    }
}

/// Measurements of one Monte Carlo run: `scans[node][k]`.
pub type RunScans = Vec<Vec<Vec<Vector>>>;

/// Draws every node's measurements for run `run`.
pub fn generate_run_scans(
    cfg: &ScenarioConfig,
    graph: &NetworkGraph,
    truth: &GroundTruth,
    run: usize,
) -> RunScans {
    graph
        .sensors
        .iter()
        .enumerate()
        .map(|(i, sensor)| {
            let mut rng = stream(cfg.run.seed, run as u64, i as u64);
            (0..cfg.run.scans)
                .map(|k| generate_scan(&truth.targets_at(k), sensor, cfg.clutter.lambda_c, &mut rng))
                .collect()
        })
        .collect()
}

/// Local filter of every node for the given recursion.
pub fn local_filters(
    cfg: &ScenarioConfig,
    graph: &NetworkGraph,
    kind: FilterKind,
) -> Vec<LocalFilter<RangeBearingSensor>> {
    let motion = MotionModel::constant_velocity(cfg.motion.ts, cfg.motion.sigma_w, cfg.motion.ps);
    let birth = BirthModel::new(
        cfg.birth.rate,
        Matrix::from_diagonal(&Vector::from_column_slice(&cfg.birth.pb_diag)),
    );
    graph
        .sensors
        .iter()
        .map(|sensor| LocalFilter {
            kind,
            motion: motion.clone(),
            sensor: sensor.clone(),
            clutter: ClutterModel::new(cfg.clutter.lambda_c),
            birth: birth.clone(),
            reduce: cfg.reduce.into(),
        })
        .collect()
}

/// Fusion settings a method uses; `None` for local-only methods.
pub fn fusion_params(cfg: &ScenarioConfig, method: Method) -> Option<RobustFusion> {
    method.rule.map(|rule| RobustFusion {
        rule,
        omega: cfg.run.omega,
        rho: cfg.run.rho,
        sub_cardinality: SubCardinality::MultiBernoulli,
        reduce: Some(cfg.reduce.into()),
    })
}

/// How estimates are read off a method's densities.
pub fn extraction_for(kind: FilterKind) -> Extraction {
    match kind {
        FilterKind::Cphd => Extraction::Map,
        FilterKind::Phd => Extraction::Eap,
    }
}

/// Per-scan, per-node densities of one method over one run.
///
/// Each scan every node runs its local filter from its previous density,
/// then, for fused methods, the network performs `consensus_steps` rounds of
/// robust fusion. The final density of a scan is the node's prior for the
/// next one. `observe` is called with `(scan, densities)` after each scan.
pub fn run_method(
    cfg: &ScenarioConfig,
    graph: &NetworkGraph,
    scans: &RunScans,
    method: Method,
    mut observe: impl FnMut(usize, &[IidClusterDensity]),
) -> Result<()> {
    let filters = local_filters(cfg, graph, method.filter);
    let fusion = fusion_params(cfg, method);
    let mut states = vec![IidClusterDensity::empty(cfg.n_max); graph.len()];
    for k in 0..cfg.run.scans {
        states = filters
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let previous: &[Vector] = if k > 0 { &scans[i][k - 1] } else { &[] };
                f.step(&states[i], previous, &scans[i][k])
                    .map_err(|e| e.context(format!("scan {k}, node {i}, local filter")))
            })
            .collect::<Result<_>>()?;
        if let Some(params) = &fusion {
            for step in 0..cfg.run.consensus_steps {
                states = run_consensus_step(&states, graph, params)
                    .map_err(|e| e.context(format!("scan {k}, consensus step {step}")))?;
            }
        }
        observe(k, &states);
    }
    Ok(())
}

/// Network-averaged OSPA and estimated cardinality per scan of one method.
pub fn evaluate_method(
    cfg: &ScenarioConfig,
    graph: &NetworkGraph,
    truth: &GroundTruth,
    scans: &RunScans,
    method: Method,
    run: usize,
) -> Result<RunRecord> {
    let params = OspaParams {
        cutoff: cfg.ospa.cutoff,
        order: cfg.ospa.order,
    };
    let mode = extraction_for(method.filter);
    let mut ospa_series = Vec::with_capacity(cfg.run.scans);
    let mut card_series = Vec::with_capacity(cfg.run.scans);
    run_method(cfg, graph, scans, method, |k, states| {
        let truth_k = truth.positions_at(k);
        let (mut o, mut c) = (0.0, 0.0);
        for d in states {
            let est = extract_estimates(d, mode);
            o += ospa(&est, &truth_k, &params);
            c += est.len() as f64;
        }
        ospa_series.push(o / states.len() as f64);
        card_series.push(c / states.len() as f64);
    })
    .map_err(|e| e.context(format!("run {run}, method {}", method.name())))?;
    Ok(RunRecord {
        run,
        method: method.name(),
        ospa: ospa_series,
        cardinality: card_series,
    })
}

/// The full Monte Carlo protocol: one shared ground truth, independent
/// measurements per run (shared by all methods within a run), every method
/// evaluated on every run. Runs execute on the current rayon pool; results
/// do not depend on scheduling.
pub fn run_experiment(cfg: &ScenarioConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let graph = NetworkGraph::from_config(cfg)?;
    let truth = generate_truth(cfg, cfg.run.seed)?;
    let methods = cfg.methods()?;
    let per_run: Vec<Vec<RunRecord>> = (0..cfg.run.mc_runs)
        .into_par_iter()
        .map(|run| {
            let scans = generate_run_scans(cfg, &graph, &truth, run);
            methods
                .iter()
                .map(|&m| evaluate_method(cfg, &graph, &truth, &scans, m, run))
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(ExperimentResult {
        truth,
        methods,
        records: per_run.into_iter().flatten().collect(),
    })
}
