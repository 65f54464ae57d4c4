//! Cardinality bookkeeping: multi-Bernoulli counts, elementary symmetric
//! functions, and the convolution used to add independent groups.
//!
//! ```text
//! cargo run --example cardinality_algebra
//! ```

use mosaic::gm::{
    convolve_cardinality, esf_all, mb_cardinality, BernoulliSet, CardinalityDistribution,
};

fn show(label: &str, p: &CardinalityDistribution) {
    let head: Vec<String> = p.probs().iter().take(6).map(|x| format!("{x:.4}")).collect();
    println!(
        "{label:<28} mean {:.3}  MAP {}  p = [{} ...]",
        p.mean(),
        p.map(),
        head.join(", ")
    );
}

fn main() -> mosaic::Result<()> {
    // Three tracks with existence probabilities 0.9, 0.6, 0.2.
    let tracks = BernoulliSet::new(vec![0.9, 0.6, 0.2])?;
    let mb = mb_cardinality(&tracks, 20);
    show("multi-Bernoulli {0.9,0.6,0.2}", &mb);

    // The same numbers through the symmetric functions of the odds r/(1-r).
    let odds: Vec<f64> = tracks.existence().iter().map(|r| r / (1.0 - r)).collect();
    let e = esf_all(&odds);
    let none: f64 = tracks.existence().iter().map(|r| 1.0 - r).product();
    println!("odds ESF * prod(1-r):        {:?}", e.iter().map(|x| format!("{:.4}", x * none)).collect::<Vec<_>>());

    // Mixture weights >= 1 are clamped just below one before use.
    let from_weights = mb_cardinality(&BernoulliSet::from_weights(&[1.3, 0.5]), 20);
    show("weights {1.3, 0.5}", &from_weights);

    // Independent groups add; their cardinalities convolve.
    let poisson = CardinalityDistribution::poisson(1.5, 20);
    show("Poisson(1.5)", &poisson);
    show("MB (*) Poisson", &convolve_cardinality(&[&mb, &poisson], 20));

    // Mass beyond n_max is cut and the remainder renormalised.
    let tight = convolve_cardinality(&[&CardinalityDistribution::delta(3, 4), &mb], 4);
    show("delta(3) (*) MB, n_max 4", &tight);
    Ok(())
}
