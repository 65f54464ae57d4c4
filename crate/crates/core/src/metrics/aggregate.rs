/// Per-scan results of one method in one Monte Carlo run, already averaged
/// over the network's nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub run: usize,
    pub method: String,
    pub ospa: Vec<f64>,
    pub cardinality: Vec<f64>,
}

/// Monte Carlo statistics of one method.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSeries {
    pub method: String,
    /// Mean over runs, per scan.
    pub mean_ospa: Vec<f64>,
    pub mean_cardinality: Vec<f64>,
    /// Mean over runs and scans.
    pub time_avg_ospa: f64,
    /// Raw per-run series, in run order.
    pub runs_ospa: Vec<Vec<f64>>,
    pub runs_cardinality: Vec<Vec<f64>>,
}

impl MethodSeries {
    /// Time-averaged OSPA of each run.
    pub fn per_run_time_avg_ospa(&self) -> Vec<f64> {
        self.runs_ospa.iter().map(|r| mean(r)).collect()
    }

    /// Mean estimated cardinality over the last `scans` scans, per run.
    pub fn per_run_tail_cardinality(&self, scans: usize) -> Vec<f64> {
        self.runs_cardinality
            .iter()
            .map(|r| mean(&r[r.len().saturating_sub(scans)..]))
            .collect()
    }
}

/// Aggregated experiment: one series per method, in first-seen order.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub methods: Vec<MethodSeries>,
    pub true_cardinality: Vec<usize>,
}

impl Summary {
    pub fn method(&self, name: &str) -> Option<&MethodSeries> {
        self.methods.iter().find(|m| m.method == name)
    }
}

/// Arithmetic means over runs, per method and scan.
pub fn aggregate(records: &[RunRecord], true_cardinality: &[usize]) -> Summary {
    let mut names: Vec<&str> = Vec::new();
    for r in records {
        if !names.contains(&r.method.as_str()) {
            names.push(&r.method);
        }
    }
    let methods = names
        .into_iter()
        .map(|name| {
            let mut runs: Vec<&RunRecord> = records.iter().filter(|r| r.method == name).collect();
            runs.sort_by_key(|r| r.run);
            let runs_ospa: Vec<Vec<f64>> = runs.iter().map(|r| r.ospa.clone()).collect();
            let runs_cardinality: Vec<Vec<f64>> =
                runs.iter().map(|r| r.cardinality.clone()).collect();
            let mean_ospa = column_means(&runs_ospa);
            let mean_cardinality = column_means(&runs_cardinality);
            MethodSeries {
                method: name.to_string(),
                time_avg_ospa: mean(&mean_ospa),
                mean_ospa,
                mean_cardinality,
                runs_ospa,
                runs_cardinality,
            }
        })
        .collect();
    Summary {
        methods,
        true_cardinality: true_cardinality.to_vec(),
    }
}

fn column_means(rows: &[Vec<f64>]) -> Vec<f64> {
    let len = rows.iter().map(Vec::len).min().unwrap_or(0);
    (0..len)
        .map(|k| rows.iter().map(|r| r[k]).sum::<f64>() / rows.len() as f64)
        .collect()
}

/// Arithmetic mean; `NaN` for an empty slice.
pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Standard error of the mean (sample standard deviation over `√n`).
pub fn standard_error(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return f64::INFINITY;
    }
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (var / n).sqrt()
}
