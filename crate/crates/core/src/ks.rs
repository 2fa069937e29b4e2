//! One-sample Kolmogorov–Smirnov comparison against an analytic cdf.

use serde::{Deserialize, Serialize};

/// Asymptotic critical value coefficient at level 0.01.
pub const KS_COEFF_001: f64 = 1.628;

/// Outcome of a KS comparison. Field names and order are part of the JSON output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    pub n_trials: usize,
    pub statistic: f64,
    pub critical_value: f64,
    pub pass: bool,
}

impl KsReport {
    pub fn from_statistic(n_trials: usize, statistic: f64) -> Self {
        let critical_value = KS_COEFF_001 / (n_trials as f64).sqrt();
        Self {
            n_trials,
            statistic,
            critical_value,
            pass: statistic < critical_value,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("KsReport serializes")
    }
}

/// Supremum distance between the empirical cdf of `sample` and `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64 + Sync>(sample: &[f64], cdf: F) -> f64 {
    use rayon::prelude::*;
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .par_iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i as f64 + 1.0) / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .reduce(|| 0.0, f64::max)
}

/// Runs the comparison and packages the report.
pub fn ks_test<F: Fn(f64) -> f64 + Sync>(sample: &[f64], cdf: F) -> KsReport {
    KsReport::from_statistic(sample.len(), ks_statistic(sample, cdf))
}
