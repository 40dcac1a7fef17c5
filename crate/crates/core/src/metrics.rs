//! Visual complexity of a timeslicing: how many events each slice carries and
//! how evenly they are spread.

use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::event_model::DynamicGraph;
use crate::slicing::{equal_event_partition, histeq_slicing, uniform_slicing, Method, Timeslicing};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexityReport {
    pub method: Method,
    pub per_slice_counts: Vec<usize>,
    pub mean: f64,
    /// Population variance of the per-slice counts.
    pub variance: f64,
    /// Largest count over smallest; infinite when some slice is empty.
    #[serde(serialize_with = "ratio")]
    pub max_min_ratio: f64,
    pub interval_durations: Vec<f64>,
}

fn ratio<S: Serializer>(value: &f64, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    if value.is_finite() {
        serializer.serialize_f64(*value)
    } else {
        serializer.serialize_str("inf")
    }
}

impl ComplexityReport {
    pub fn from_counts(method: Method, counts: Vec<usize>, durations: Vec<f64>) -> Self {
        let (mean, variance) = mean_variance(&counts);
        let max = counts.iter().copied().max().unwrap_or(0);
        let min = counts.iter().copied().min().unwrap_or(0);
        let max_min_ratio = if min == 0 {
            f64::INFINITY
        } else {
            max as f64 / min as f64
        };
        Self {
            method,
            per_slice_counts: counts,
            mean,
            variance,
            max_min_ratio,
            interval_durations: durations,
        }
    }

    pub fn k(&self) -> usize {
        self.per_slice_counts.len()
    }

    pub fn total(&self) -> usize {
        self.per_slice_counts.iter().sum()
    }
}

/// Mean and population variance.
pub fn mean_variance(counts: &[usize]) -> (f64, f64) {
    if counts.is_empty() {
        return (0.0, 0.0);
    }
    let n = counts.len() as f64;
    let mean = counts.iter().sum::<usize>() as f64 / n;
    let variance = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - mean;
            d * d
        })
        .sum::<f64>()
        / n;
    (mean, variance)
}

/// Per-slice event counts of `s` applied to `g`, counted through the slice
/// projections.
pub fn complexity_report(g: &DynamicGraph, s: &Timeslicing) -> Result<ComplexityReport> {
    if s.extent() != g.extent() {
        return Err(Error::InvalidArgument(format!(
            "timeslicing extent {} does not match graph extent {}",
            s.extent(),
            g.extent()
        )));
    }
    let counts = (0..s.k())
        .map(|l| s.project(g, l, false).map(|slice| slice.event_count()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ComplexityReport::from_counts(s.method(), counts, s.durations()))
}

/// Runs all three slicing methods with the same `k` and bin width.
pub fn compare_methods(g: &DynamicGraph, k: usize, bin_width: f64) -> Result<Vec<ComplexityReport>> {
    let slicings = [
        uniform_slicing(g, k)?,
        equal_event_partition(g, k)?,
        histeq_slicing(g, k, bin_width)?,
    ];
    slicings.iter().map(|s| complexity_report(g, s)).collect()
}

/// Aligned plain-text table, one row per report.
pub fn format_table(reports: &[ComplexityReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<13} {:>4} {:>8} {:>12} {:>16} {:>9}  counts",
        "method", "k", "events", "mean", "variance", "max/min"
    );
    for r in reports {
        let ratio = if r.max_min_ratio.is_finite() {
            format!("{:.3}", r.max_min_ratio)
        } else {
            "inf".to_owned()
        };
        let counts: Vec<String> = r.per_slice_counts.iter().map(usize::to_string).collect();
        let _ = writeln!(
            out,
            "{:<13} {:>4} {:>8} {:>12.3} {:>16.3} {:>9}  {}",
            r.method.name(),
            r.k(),
            r.total(),
            r.mean,
            r.variance,
            ratio,
            counts.join(" ")
        );
    }
    out
}
