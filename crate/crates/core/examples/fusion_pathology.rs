//! Why plain GCI and AA fusion fail when sensors see different regions.
//!
//! Two nodes each track one target that only they can see. Geometric
//! averaging wipes both out; arithmetic averaging halves them. Clustering
//! first and fusing only what overlaps keeps both.
//!
//! ```text
//! cargo run --example fusion_pathology
//! ```

use mosaic::fusion::{aa_fuse, gci_fuse};
use mosaic::gm::{CardinalityDistribution, GaussianComponent, GmIntensity, IidClusterDensity};
use mosaic::linalg::{Matrix, Vector};
use mosaic::robust::{robust_fuse, RobustFusion};
use mosaic::fusion::FusionRule;

fn node(x: f64) -> mosaic::Result<IidClusterDensity> {
    let cov = Matrix::from_diagonal(&Vector::from_column_slice(&[100.0, 25.0, 100.0, 25.0]));
    let gc = GaussianComponent::new(0.9, Vector::from_column_slice(&[x, 0.0, 0.0, 0.0]), cov)?;
    Ok(IidClusterDensity::new(
        CardinalityDistribution::new(vec![0.1, 0.9])?.truncated(20),
        GmIntensity::new(vec![gc]),
    ))
}

fn report(label: &str, d: &IidClusterDensity) {
    println!(
        "{label:<12} MAP {}  E[n] {:.3}  components {}",
        d.cardinality.map(),
        d.expected_cardinality(),
        d.intensity.len()
    );
}

fn main() -> mosaic::Result<()> {
    let (a, b) = (node(-500.0)?, node(500.0)?);
    report("node a", &a);
    report("node b", &b);
    report("GCI", &gci_fuse(&a, &b, 0.5)?);
    report("AA", &aa_fuse(&a, &b, 0.5)?);
    for rule in [FusionRule::Gci, FusionRule::Aa] {
        let fused = robust_fuse(&a, &b, &RobustFusion::with_rule(rule))?;
        report(&format!("robust {}", rule.name()), &fused);
    }
    Ok(())
}
