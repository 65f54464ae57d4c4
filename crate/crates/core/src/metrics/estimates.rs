use crate::gm::IidClusterDensity;

/// How many targets to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Extraction {
    /// The most probable count. Natural for CPHD densities.
    #[default]
    Map,
    /// The expected count, rounded. A PHD density carries no cardinality law
    /// beyond its mass.
    Eap,
}

/// Position estimates: the means of the `n̂` heaviest components, where `n̂`
/// comes from `mode` and is capped by the number of components.
pub fn extract_estimates(d: &IidClusterDensity, mode: Extraction) -> Vec<[f64; 2]> {
    let n_hat = match mode {
        Extraction::Map => d.cardinality.map(),
        Extraction::Eap => d.intensity.mass().round().max(0.0) as usize,
    };
    let mut order: Vec<usize> = (0..d.intensity.len()).collect();
    // Stable sort: equal weights keep mixture order.
    order.sort_by(|&a, &b| {
        d.intensity.components[b]
            .weight
            .total_cmp(&d.intensity.components[a].weight)
    });
    order
        .into_iter()
        .take(n_hat)
        .map(|i| {
            let m = &d.intensity.components[i].mean;
            [m[0], m[2.min(m.len() - 1)]]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gm::{CardinalityDistribution, GaussianComponent, GmIntensity};
    use crate::linalg::{Matrix, Vector};

    fn gc(w: f64, x: f64) -> GaussianComponent {
        GaussianComponent::new(
            w,
            Vector::from_column_slice(&[x, 0.0, -x, 0.0]),
            Matrix::identity(4, 4),
        )
        .unwrap()
    }

    #[test]
    fn examples() {
        let none = IidClusterDensity::empty(5);
        assert!(extract_estimates(&none, Extraction::Map).is_empty());

        let one = IidClusterDensity::new(
            CardinalityDistribution::new(vec![0.1, 0.9]).unwrap(),
            GmIntensity::new(vec![gc(0.9, 3.0)]),
        );
        assert_eq!(extract_estimates(&one, Extraction::Map), vec![[3.0, -3.0]]);

        let three = IidClusterDensity::new(
            CardinalityDistribution::new(vec![0.0, 0.2, 0.8]).unwrap(),
            GmIntensity::new(vec![gc(0.1, 1.0), gc(0.9, 2.0), gc(0.8, 3.0)]),
        );
        assert_eq!(
            extract_estimates(&three, Extraction::Map),
            vec![[2.0, -2.0], [3.0, -3.0]]
        );
        // Mass 1.8 rounds to 2.
        assert_eq!(extract_estimates(&three, Extraction::Eap).len(), 2);
    }
}
