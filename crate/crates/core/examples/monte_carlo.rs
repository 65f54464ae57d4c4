//! Monte Carlo comparison of local and fused filters on the bundled scenario.
//!
//! ```text
//! cargo run --release --example monte_carlo -- [runs] [pd0]
//! ```

use std::time::Instant;

use mosaic::scenario::{run_experiment, ScenarioConfig};

fn main() -> mosaic::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let mut cfg = ScenarioConfig::default_scenario();
    cfg.run.mc_runs = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    if let Some(pd) = args.get(2).and_then(|s| s.parse().ok()) {
        cfg.run.pd0 = Some(pd);
    }

    let start = Instant::now();
    let result = run_experiment(&cfg)?;
    let summary = result.summary();
    println!(
        "{} runs x {} scans in {:.1?}",
        cfg.run.mc_runs,
        cfg.run.scans,
        start.elapsed()
    );

    let truth = &summary.true_cardinality;
    let tail = 30;
    let true_tail = truth[truth.len() - tail..].iter().sum::<usize>() as f64 / tail as f64;
    println!("{:<12} {:>10} {:>14} (truth {true_tail:.2})", "method", "avg OSPA", "tail card");
    for m in &summary.methods {
        let tail_card = m.per_run_tail_cardinality(tail);
        println!(
            "{:<12} {:>10.2} {:>14.3}",
            m.method,
            m.time_avg_ospa,
            mosaic::metrics::mean(&tail_card)
        );
    }
    Ok(())
}
