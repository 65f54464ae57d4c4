//! How much density the gating throws away, measured against its bound.
//!
//! For a random two-node scene the report compares, per node and group,
//! the L1 gap between the node's intensity restricted to the group's region
//! and the group's sub-mixture with the analytic bound `mu (1 - F(delta, 2))`. The second table shows the bound for a
//! unit-mass component shrinking as the gate widens.
//!
//! ```text
//! cargo run --example error_bound -- [seed]
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mosaic::gm::{GaussianComponent, GmIntensity};
use mosaic::linalg::{Matrix, Vector};
use mosaic::robust::{chi2_cdf, cluster_components, error_bound_report, split_error_bound};

fn random_node(rng: &mut ChaCha8Rng) -> mosaic::Result<GmIntensity> {
    (0..rng.random_range(1..5))
        .map(|_| {
            let s = rng.random_range(1.0..9.0);
            GaussianComponent::new(
                rng.random_range(0.2..1.0),
                Vector::from_column_slice(&[rng.random_range(0.0..40.0), rng.random_range(0.0..40.0)]),
                Matrix::identity(2, 2) * s,
            )
        })
        .collect()
}

fn main() -> mosaic::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = (random_node(&mut rng)?, random_node(&mut rng)?);
    let rho = 16.0;
    let partition = cluster_components(&[&a, &b], rho)?;
    let report = error_bound_report(&[&a, &b], &partition, rho / 4.0, 300)?;
    println!("{} groups at rho = {rho}", partition.len());
    println!("{:>5} {:>6} {:>12} {:>12}", "node", "group", "numerical", "bound");
    for e in &report.entries {
        println!("{:>5} {:>6} {:>12.3e} {:>12.3e}", e.node, e.cluster, e.numerical, e.bound);
    }
    println!("worst numerical - bound: {:.3e}", report.worst_slack());

    println!("\n{:>6} {:>14} {:>12}", "rho", "chi2 F(rho/4)", "bound");
    for rho in [4.0, 10.0, 20.0, 40.0, 80.0, 160.0] {
        println!(
            "{rho:>6} {:>14.6} {:>12.3e}",
            chi2_cdf(rho / 4.0, 2),
            split_error_bound(1.0, rho / 4.0, rho, 2)?
        );
    }
    Ok(())
}
