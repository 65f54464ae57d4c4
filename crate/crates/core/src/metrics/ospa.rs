use super::assignment::hungarian;

/// Cutoff `c` and order `p` of the OSPA distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OspaParams {
    pub cutoff: f64,
    pub order: f64,
}

impl Default for OspaParams {
    fn default() -> Self {
        Self {
            cutoff: 600.0,
            order: 1.0,
        }
    }
}

/// OSPA distance between two finite point sets.
///
/// With `|X| = m ≤ n = |Y|`,
///
/// ```text
/// d(X, Y) = ( (min_π Σᵢ min(c, ‖xᵢ − y_π(i)‖)^p + c^p (n − m)) / n )^{1/p}
/// ```
///
/// and `d(∅, ∅) = 0`.
pub fn ospa(x: &[[f64; 2]], y: &[[f64; 2]], params: &OspaParams) -> f64 {
    let (small, large) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    let (m, n) = (small.len(), large.len());
    if n == 0 {
        return 0.0;
    }
    let (c, p) = (params.cutoff, params.order);
    let cost: Vec<f64> = small
        .iter()
        .flat_map(|a| {
            large.iter().map(move |b| {
                let d = (a[0] - b[0]).hypot(a[1] - b[1]);
                d.min(c).powf(p)
            })
        })
        .collect();
    let (assignment, _) = hungarian(&cost, m, n);
    // Summing the matched costs in sorted order makes the result exactly
    // symmetric in its arguments.
    let mut matched_costs: Vec<f64> = assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| cost[i * n + j])
        .collect();
    matched_costs.sort_by(f64::total_cmp);
    let matched: f64 = matched_costs.iter().sum();
    ((matched + c.powf(p) * (n - m) as f64) / n as f64).powf(1.0 / p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: OspaParams = OspaParams {
        cutoff: 600.0,
        order: 1.0,
    };

    #[test]
    fn examples() {
        assert_eq!(ospa(&[], &[], &P), 0.0);
        assert_eq!(ospa(&[[1.0, 2.0]], &[], &P), 600.0);
        assert!((ospa(&[[0.0, 0.0]], &[[60.0, 80.0]], &P) - 100.0).abs() < 1e-12);
        // One matched pair at 100 m and one unmatched target: (100 + 600) / 2.
        let d = ospa(&[[0.0, 0.0]], &[[60.0, 80.0], [5000.0, 0.0]], &P);
        assert!((d - 350.0).abs() < 1e-12);
    }

    fn points() -> impl Strategy<Value = Vec<[f64; 2]>> {
        prop::collection::vec(prop::array::uniform2(-1000.0f64..1000.0), 0..6)
    }

    proptest! {
        #[test]
        fn metric_axioms(x in points(), y in points(), z in points(), p in 1.0f64..3.0) {
            let params = OspaParams { cutoff: 600.0, order: p };
            let xy = ospa(&x, &y, &params);
            prop_assert_eq!(xy, ospa(&y, &x, &params));
            prop_assert!(ospa(&x, &x, &params) < 1e-9);
            prop_assert!(xy <= params.cutoff + 1e-9);
            if x.is_empty() != y.is_empty() {
                prop_assert!((xy - params.cutoff).abs() < 1e-9);
            }
            let xz = ospa(&x, &z, &params);
            let zy = ospa(&z, &y, &params);
            prop_assert!(xy <= xz + zy + 1e-9);
        }
    }
}
