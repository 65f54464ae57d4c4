use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter::{FilterKind, ReduceParams};
use crate::fusion::FusionRule;

/// Scenario file schema version understood by this crate.
pub const SCENARIO_VERSION: u32 = 1;

/// A complete scenario: network, models, targets and run protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub version: u32,
    pub network: NetworkConfig,
    pub motion: MotionConfig,
    pub clutter: ClutterConfig,
    pub birth: BirthConfig,
    #[serde(default)]
    pub targets: Vec<TargetConfig>,
    pub run: RunConfig,
    #[serde(default)]
    pub reduce: ReduceConfig,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default)]
    pub ospa: OspaConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    pub nodes: Vec<NodeConfig>,
    /// Directed links `[from, to]`: `to` receives `from`'s density.
    #[serde(default)]
    pub arcs: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeConfig {
    pub id: usize,
    pub position: [f64; 2],
    /// Radius of the circular FoV centred on the sensor.
    pub fov_radius: f64,
    /// Polygonal FoV; replaces the circle when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fov_polygon: Option<Vec<[f64; 2]>>,
    /// Range noise standard deviation, m.
    pub sigma_r: f64,
    /// Bearing noise standard deviation, rad.
    pub sigma_theta: f64,
    pub pd0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotionConfig {
    #[serde(rename = "Ts")]
    pub ts: f64,
    /// Process noise the filters assume.
    pub sigma_w: f64,
    pub ps: f64,
    /// Process noise used to draw the true trajectories.
    #[serde(default)]
    pub truth_sigma_w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClutterConfig {
    pub lambda_c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BirthConfig {
    /// Expected newborn targets per scan.
    pub rate: f64,
    /// Diagonal of the newborn covariance (variances).
    pub pb_diag: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetConfig {
    /// `[px, vx, py, vy]` at `birth_scan`.
    pub initial_state: [f64; 4],
    pub birth_scan: usize,
    /// First scan at which the target no longer exists.
    pub death_scan: usize,
}

/// A single value or a list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scans: usize,
    pub mc_runs: usize,
    pub consensus_steps: usize,
    /// `"gci"`, `"aa"` or a list of both.
    pub rule: OneOrMany<String>,
    /// `"phd"`, `"cphd"` or a list of both.
    pub filter: OneOrMany<String>,
    pub rho: f64,
    pub omega: f64,
    pub seed: u64,
    /// Overrides every node's `pd0` when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pd0: Option<f64>,
    /// Also report each filter without fusion.
    #[serde(default = "yes")]
    pub include_local: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReduceConfig {
    pub prune_threshold: f64,
    pub merge_threshold: f64,
    pub max_components: usize,
}

impl Default for ReduceConfig {
    fn default() -> Self {
        let r = ReduceParams::default();
        Self {
            prune_threshold: r.prune_threshold,
            merge_threshold: r.merge_threshold,
            max_components: r.max_components,
        }
    }
}

impl From<ReduceConfig> for ReduceParams {
    fn from(r: ReduceConfig) -> Self {
        ReduceParams {
            prune_threshold: r.prune_threshold,
            merge_threshold: r.merge_threshold,
            max_components: r.max_components,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OspaConfig {
    pub cutoff: f64,
    pub order: f64,
}

impl Default for OspaConfig {
    fn default() -> Self {
        Self {
            cutoff: 600.0,
            order: 1.0,
        }
    }
}

fn default_n_max() -> usize {
    crate::gm::DEFAULT_N_MAX
}

fn yes() -> bool {
    true
}

/// One filter/fusion combination evaluated by an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Method {
    pub filter: FilterKind,
    /// `None` runs the local filter without fusion.
    pub rule: Option<FusionRule>,
}

impl Method {
    /// `local-cphd`, `cphd-gci`, ...
    pub fn name(&self) -> String {
        match self.rule {
            None => format!("local-{}", self.filter.name()),
            Some(r) => format!("{}-{}", self.filter.name(), r.name()),
        }
    }
}

fn parse_rule(s: &str) -> Result<FusionRule> {
    match s {
        "gci" => Ok(FusionRule::Gci),
        "aa" => Ok(FusionRule::Aa),
        _ => Err(Error::config("run.rule", format!("unknown rule {s:?} (gci|aa)"))),
    }
}

fn parse_filter(s: &str) -> Result<FilterKind> {
    match s {
        "phd" => Ok(FilterKind::Phd),
        "cphd" => Ok(FilterKind::Cphd),
        _ => Err(Error::config("run.filter", format!("unknown filter {s:?} (phd|cphd)"))),
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| Error::config("<document>", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Methods in output order: per filter, local first, then each rule.
    pub fn methods(&self) -> Result<Vec<Method>> {
        let mut filters = self
            .run
            .filter
            .to_vec()
            .iter()
            .map(|s| parse_filter(s))
            .collect::<Result<Vec<_>>>()?;
        let mut rules = self
            .run
            .rule
            .to_vec()
            .iter()
            .map(|s| parse_rule(s))
            .collect::<Result<Vec<_>>>()?;
        filters.dedup();
        rules.dedup();
        let mut out = Vec::new();
        for filter in filters {
            if self.run.include_local {
                out.push(Method { filter, rule: None });
            }
            for &rule in &rules {
                out.push(Method {
                    filter,
                    rule: Some(rule),
                });
            }
        }
        Ok(out)
    }

    /// Detection probability node `i` actually uses.
    pub fn node_pd0(&self, i: usize) -> f64 {
        self.run.pd0.unwrap_or(self.network.nodes[i].pd0)
    }

    /// Schema and invariant checks; errors name the offending field.
    pub fn validate(&self) -> Result<()> {
        if self.version != SCENARIO_VERSION {
            return Err(Error::config(
                "version",
                format!("expected {SCENARIO_VERSION}, found {}", self.version),
            ));
        }
        let nodes = &self.network.nodes;
        if nodes.is_empty() {
            return Err(Error::config("network.nodes", "at least one node is required"));
        }
        for (i, n) in nodes.iter().enumerate() {
            let f = |name: &str| format!("network.nodes[{i}].{name}");
            if nodes[..i].iter().any(|m| m.id == n.id) {
                return Err(Error::config(f("id"), format!("duplicate id {}", n.id)));
            }
            finite(&f("position"), &n.position)?;
            positive(&f("fov_radius"), n.fov_radius)?;
            positive(&f("sigma_r"), n.sigma_r)?;
            positive(&f("sigma_theta"), n.sigma_theta)?;
            probability(&f("pd0"), n.pd0)?;
            if let Some(poly) = &n.fov_polygon {
                if poly.len() < 3 {
                    return Err(Error::config(f("fov_polygon"), "needs at least 3 vertices"));
                }
                for v in poly {
                    finite(&f("fov_polygon"), v)?;
                }
            }
        }
        for (k, [from, to]) in self.network.arcs.iter().enumerate() {
            for id in [from, to] {
                if !nodes.iter().any(|n| n.id == *id) {
                    return Err(Error::config(
                        format!("network.arcs[{k}]"),
                        format!("unknown node id {id}"),
                    ));
                }
            }
            if from == to {
                return Err(Error::config(format!("network.arcs[{k}]"), "self-loop"));
            }
        }

        positive("motion.Ts", self.motion.ts)?;
        non_negative("motion.sigma_w", self.motion.sigma_w)?;
        non_negative("motion.truth_sigma_w", self.motion.truth_sigma_w)?;
        probability("motion.ps", self.motion.ps)?;
        non_negative("clutter.lambda_c", self.clutter.lambda_c)?;
        non_negative("birth.rate", self.birth.rate)?;
        for v in self.birth.pb_diag {
            positive("birth.pb_diag", v)?;
        }

        for (k, t) in self.targets.iter().enumerate() {
            finite(&format!("targets[{k}].initial_state"), &t.initial_state)?;
            if t.death_scan <= t.birth_scan {
                return Err(Error::config(
                    format!("targets[{k}].death_scan"),
                    "must come after birth_scan",
                ));
            }
        }

        let run = &self.run;
        if run.scans == 0 {
            return Err(Error::config("run.scans", "must be positive"));
        }
        if run.mc_runs == 0 {
            return Err(Error::config("run.mc_runs", "must be positive"));
        }
        positive("run.rho", run.rho)?;
        if !(run.omega > 0.0 && run.omega < 1.0) {
            return Err(Error::config("run.omega", "pairwise weights must lie in (0, 1)"));
        }
        if let Some(pd) = run.pd0 {
            probability("run.pd0", pd)?;
        }
        if run.rule.to_vec().is_empty() {
            return Err(Error::config("run.rule", "no fusion rule given"));
        }
        if run.filter.to_vec().is_empty() {
            return Err(Error::config("run.filter", "no filter given"));
        }
        self.methods()?;

        non_negative("reduce.prune_threshold", self.reduce.prune_threshold)?;
        positive("reduce.merge_threshold", self.reduce.merge_threshold)?;
        if self.reduce.max_components == 0 {
            return Err(Error::config("reduce.max_components", "must be positive"));
        }
        if self.n_max == 0 {
            return Err(Error::config("n_max", "must be positive"));
        }
        positive("ospa.cutoff", self.ospa.cutoff)?;
        if !(self.ospa.order >= 1.0) {
            return Err(Error::config("ospa.order", "must be at least 1"));
        }
        Ok(())
    }

    /// The bundled four-node scenario: partially overlapping circular FoVs on
    /// a ring network, five targets born at staggered times that cross from
    /// exclusive into common FoVs.
    pub fn default_scenario() -> Self {
        Self::from_json(DEFAULT_SCENARIO).expect("bundled scenario is valid")
    }
}

/// Text of `scenarios/default.json`.
pub const DEFAULT_SCENARIO: &str = include_str!("../../scenarios/default.json");

fn finite(field: &str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::config(field, "non-finite value"))
    }
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(field, format!("{v} is not positive")))
    }
}

fn non_negative(field: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(field, format!("{v} is negative")))
    }
}

fn probability(field: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::config(field, format!("{v} is not a probability")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_scenario_is_valid() {
        let cfg = ScenarioConfig::default_scenario();
        assert_eq!(cfg.network.nodes.len(), 4);
        assert_eq!(cfg.targets.len(), 5);
        let names: Vec<_> = cfg.methods().unwrap().iter().map(|m| m.name()).collect();
        assert_eq!(
            names,
            ["local-phd", "phd-gci", "phd-aa", "local-cphd", "cphd-gci", "cphd-aa"]
        );
        let round = ScenarioConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(round, cfg);
    }

    fn edited(f: impl FnOnce(&mut serde_json::Value)) -> Result<ScenarioConfig> {
        let mut v: serde_json::Value = serde_json::from_str(DEFAULT_SCENARIO).unwrap();
        f(&mut v);
        ScenarioConfig::from_json(&v.to_string())
    }

    fn field_of(r: Result<ScenarioConfig>) -> String {
        match r {
            Err(Error::Config { field, .. }) => field,
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn errors_name_the_field() {
        assert_eq!(
            field_of(edited(|v| v["clutter"]["lambda_c"] = (-1.0).into())),
            "clutter.lambda_c"
        );
        assert_eq!(
            field_of(edited(|v| v["network"]["arcs"][0][1] = 99.into())),
            "network.arcs[0]"
        );
        assert_eq!(
            field_of(edited(|v| v["run"]["rule"] = "median".into())),
            "run.rule"
        );
        assert_eq!(
            field_of(edited(|v| v["network"]["nodes"][2]["pd0"] = 1.5.into())),
            "network.nodes[2].pd0"
        );
        assert_eq!(field_of(edited(|v| v["surprise"] = 1.into())), "<document>");
    }

    #[test]
    fn single_rule_and_no_locals() {
        let cfg = edited(|v| {
            v["run"]["rule"] = "aa".into();
            v["run"]["filter"] = "cphd".into();
            v["run"]["include_local"] = false.into();
        })
        .unwrap();
        let names: Vec<_> = cfg.methods().unwrap().iter().map(|m| m.name()).collect();
        assert_eq!(names, ["cphd-aa"]);
    }
}
