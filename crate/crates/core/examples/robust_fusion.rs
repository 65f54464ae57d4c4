//! The clustering-based fusion pipeline, one stage at a time.
//!
//! Node a sees targets at x = 0 and x = 300; node b sees the one at x = 0
//! and another at x = -400. Clustering pairs up the shared target and leaves
//! the others as singletons, which pass through fusion untouched.
//!
//! ```text
//! cargo run --example robust_fusion
//! ```

use mosaic::fusion::FusionRule;
use mosaic::gm::{mb_cardinality, BernoulliSet, GaussianComponent, GmIntensity, IidClusterDensity};
use mosaic::linalg::{Matrix, Vector};
use mosaic::robust::{
    cluster_components, corrected_mahalanobis, fuse_cluster, robust_fuse, split_by_clusters,
    RobustFusion, SubCardinality,
};

fn density(tracks: &[(f64, f64)]) -> mosaic::Result<IidClusterDensity> {
    let cov = Matrix::from_diagonal(&Vector::from_column_slice(&[64.0, 16.0, 64.0, 16.0]));
    let v = tracks
        .iter()
        .map(|&(w, x)| GaussianComponent::new(w, Vector::from_column_slice(&[x, 0.0, 50.0, 0.0]), cov.clone()))
        .collect::<mosaic::Result<GmIntensity>>()?;
    let card = mb_cardinality(&BernoulliSet::from_weights(&v.weights()), 20);
    Ok(IidClusterDensity::new(card, v))
}

fn main() -> mosaic::Result<()> {
    let a = density(&[(0.95, 0.0), (0.8, 300.0)])?;
    let b = density(&[(0.9, 4.0), (0.7, -400.0)])?;
    let params = RobustFusion::with_rule(FusionRule::Gci);

    let d = corrected_mahalanobis(&a.intensity.components[0], &b.intensity.components[0])?;
    println!("distance between the shared-target components: {d:.3} (gate rho = {})", params.rho);

    let partition = cluster_components(&[&a.intensity, &b.intensity], params.rho)?;
    for (g, members) in partition.clusters().iter().enumerate() {
        let names: Vec<String> = members.iter().map(|ix| format!("node{}#{}", ix.node, ix.component)).collect();
        println!("group {g}: {}", names.join(" "));
    }

    let subs = split_by_clusters(&[&a, &b], &partition, SubCardinality::MultiBernoulli)?;
    for sub in &subs {
        let fused = fuse_cluster(sub, params.rule, params.omega)?;
        println!(
            "group {} seen by {:?}: fused E[n] {:.3}",
            sub.id,
            sub.participants,
            fused.expected_cardinality()
        );
    }

    let fused = robust_fuse(&a, &b, &params)?;
    println!(
        "network density: MAP {}  E[n] {:.3}  components {}",
        fused.cardinality.map(),
        fused.expected_cardinality(),
        fused.intensity.len()
    );
    Ok(())
}
