/// Elementary symmetric function of the given degree over `values`.
///
/// `esf(v, 0) = 1`, and any degree above `v.len()` yields 0.
pub fn esf(values: &[f64], degree: usize) -> f64 {
    if degree > values.len() {
        return 0.0;
    }
    // Only degrees up to `degree` are needed.
    let mut e = vec![0.0; degree + 1];
    e[0] = 1.0;
    for (m, &beta) in values.iter().enumerate() {
        let top = (m + 1).min(degree);
        for n in (1..=top).rev() {
            e[n] += beta * e[n - 1];
        }
    }
    e[degree]
}

/// All elementary symmetric functions `[σ₀, σ₁, …, σₘ]` in one pass.
///
/// Uses `σ_{m,n} = σ_{m−1,n} + β_m σ_{m−1,n−1}`, O(m²) overall.
pub fn esf_all(values: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; values.len() + 1];
    e[0] = 1.0;
    for (m, &beta) in values.iter().enumerate() {
        for n in (1..=m + 1).rev() {
            e[n] += beta * e[n - 1];
        }
    }
    e
}
