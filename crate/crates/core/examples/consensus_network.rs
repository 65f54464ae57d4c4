//! Distributed tracking over the bundled four-node ring.
//!
//! Every scan each node filters its own measurements and then runs the
//! configured number of robust-fusion consensus rounds with its neighbours.
//! The table follows one run and prints the per-node MAP cardinality and
//! the network-averaged OSPA for the chosen fusion rule.
//!
//! ```text
//! cargo run --release --example consensus_network -- [gci|aa] [pd0]
//! ```

use mosaic::filter::FilterKind;
use mosaic::fusion::FusionRule;
use mosaic::metrics::{extract_estimates, ospa, OspaParams};
use mosaic::scenario::{
    extraction_for, generate_run_scans, generate_truth, run_method, Method, NetworkGraph,
    ScenarioConfig,
};

fn main() -> mosaic::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let rule = match args.get(1).map(String::as_str) {
        Some("aa") => FusionRule::Aa,
        _ => FusionRule::Gci,
    };
    let mut cfg = ScenarioConfig::default_scenario();
    cfg.run.pd0 = args.get(2).and_then(|s| s.parse().ok());

    let graph = NetworkGraph::from_config(&cfg)?;
    for i in 0..graph.len() {
        println!("node {i} listens to {:?}", graph.in_neighbors(i));
    }
    let truth = generate_truth(&cfg, cfg.run.seed)?;
    let scans = generate_run_scans(&cfg, &graph, &truth, 0);
    let params = OspaParams {
        cutoff: cfg.ospa.cutoff,
        order: cfg.ospa.order,
    };
    let method = Method {
        filter: FilterKind::Cphd,
        rule: Some(rule),
    };

    println!("{:>5} {:>6} {:>14} {:>8}", "scan", "truth", "MAP per node", "OSPA");
    run_method(&cfg, &graph, &scans, method, |k, states| {
        if k % 5 != 4 {
            return;
        }
        let truth_k = truth.positions_at(k);
        let maps: Vec<String> = states.iter().map(|d| d.cardinality.map().to_string()).collect();
        let avg = states
            .iter()
            .map(|d| ospa(&extract_estimates(d, extraction_for(method.filter)), &truth_k, &params))
            .sum::<f64>()
            / states.len() as f64;
        println!("{k:>5} {:>6} {:>14} {avg:>8.1}", truth_k.len(), maps.join(" "));
    })?;
    Ok(())
}
