//! A single range-bearing sensor running the GM-CPHD filter on its own.
//!
//! Prints, every ten scans, the true number of targets in the field of
//! view, the MAP cardinality, the estimated positions and the OSPA error.
//!
//! ```text
//! cargo run --release --example local_cphd -- [node] [phd|cphd]
//! ```

use mosaic::filter::FilterKind;
use mosaic::gm::IidClusterDensity;
use mosaic::metrics::{extract_estimates, ospa, OspaParams};
use mosaic::scenario::{
    extraction_for, generate_run_scans, generate_truth, local_filters, NetworkGraph, ScenarioConfig,
};

fn main() -> mosaic::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let node: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let kind = match args.get(2).map(String::as_str) {
        Some("phd") => FilterKind::Phd,
        _ => FilterKind::Cphd,
    };

    let cfg = ScenarioConfig::default_scenario();
    let graph = NetworkGraph::from_config(&cfg)?;
    let truth = generate_truth(&cfg, cfg.run.seed)?;
    let scans = generate_run_scans(&cfg, &graph, &truth, 0);
    let filter = &local_filters(&cfg, &graph, kind)[node];
    let params = OspaParams {
        cutoff: cfg.ospa.cutoff,
        order: cfg.ospa.order,
    };

    let mut density = IidClusterDensity::empty(cfg.n_max);
    for k in 0..cfg.run.scans {
        let previous = if k > 0 { scans[node][k - 1].as_slice() } else { &[] };
        density = filter.step(&density, previous, &scans[node][k])?;
        if k % 10 != 9 {
            continue;
        }
        let all = truth.positions_at(k);
        let seen = all.iter().filter(|p| graph.sees(node, **p)).count();
        let est = extract_estimates(&density, extraction_for(kind));
        let pts: Vec<String> = est.iter().map(|p| format!("({:.0},{:.0})", p[0], p[1])).collect();
        println!(
            "scan {k:>3}: {} meas, in view {seen}/{}, MAP {}, OSPA vs all {:.1}  {}",
            scans[node][k].len(),
            all.len(),
            density.cardinality.map(),
            ospa(&est, &all, &params),
            pts.join(" ")
        );
    }
    Ok(())
}
