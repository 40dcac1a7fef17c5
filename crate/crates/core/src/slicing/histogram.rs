//! Event histograms, histogram equalization, and CDF-sampled slicing.

use log::warn;

use super::{between, check_k, Method, Resolution, Timeslicing};
use crate::error::{Error, Result};
use crate::event_model::DynamicGraph;

/// Upper bound on histogram size; finer bins are almost certainly a unit mistake.
const MAX_BINS: usize = 100_000_000;

/// Relative slack when comparing a bin width against the native resolution.
const RESOLUTION_SLACK: f64 = 1e-9;

/// Event counts over `B + 1` bins of equal width covering `[0, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EventHistogram {
    bin_width: f64,
    counts: Vec<u64>,
    total: u64,
}

impl EventHistogram {
    pub fn from_counts(bin_width: f64, counts: Vec<u64>) -> Result<Self> {
        if !(bin_width > 0.0 && bin_width.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "bin width must be positive, got {bin_width}"
            )));
        }
        if counts.is_empty() {
            return Err(Error::InvalidArgument("a histogram needs at least one bin".into()));
        }
        let total = counts.iter().sum();
        Ok(Self {
            bin_width,
            counts,
            total,
        })
    }

    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of bins, `B + 1`.
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    /// Bin index of timestamp `t`.
    pub fn bin_of(&self, t: f64) -> usize {
        ((t / self.bin_width).floor().max(0.0) as usize).min(self.counts.len() - 1)
    }

    /// Running event totals: `cumulative()[i] = sum of counts[0..=i]`.
    pub fn cumulative(&self) -> Vec<u64> {
        self.counts
            .iter()
            .scan(0u64, |acc, &c| {
                *acc += c;
                Some(*acc)
            })
            .collect()
    }

    /// `p(i) = |E_i| / |E|`.
    pub fn pdf(&self) -> Vec<f64> {
        let total = self.total as f64;
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }

    /// `P(i) = sum_{j <= i} p(j)`, evaluated as a ratio of integers so the
    /// last entry is exactly 1.
    pub fn cdf(&self) -> Vec<f64> {
        let total = self.total as f64;
        self.cumulative().into_iter().map(|c| c as f64 / total).collect()
    }

    /// Indices of bins holding at least one event.
    pub fn occupied(&self) -> Vec<usize> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Histogram after equalization: bin `i` maps to level `s_i = floor(B * P(i))`.
///
/// The levels span `0..=B`, one per bin of the source histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct EqualizedHistogram {
    source: EventHistogram,
    levels: Vec<u64>,
}

impl EqualizedHistogram {
    pub fn source(&self) -> &EventHistogram {
        &self.source
    }

    pub fn levels(&self) -> &[u64] {
        &self.levels
    }

    /// Events per equalized level.
    pub fn transformed_counts(&self) -> Vec<u64> {
        let mut out = vec![0; self.levels.len()];
        for (&level, &c) in self.levels.iter().zip(self.source.counts()) {
            out[level as usize] += c;
        }
        out
    }
}

/// Counts the events of `g` in bins of `bin_width` starting at 0.
///
/// Bin `i` covers `[i * w, (i + 1) * w)`; there are `floor(T / w) + 1` bins so
/// the last one holds `t = T`.
pub fn build_histogram(g: &DynamicGraph, bin_width: f64) -> Result<EventHistogram> {
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "bin width must be positive, got {bin_width}"
        )));
    }
    // The smallest observed gap only bounds the measurement precision from
    // above, so finer bins are allowed; they just add empty bins.
    match g.native_resolution() {
        Ok(res) if bin_width < res * (1.0 - RESOLUTION_SLACK) => {
            warn!("bin width {bin_width} is finer than the smallest event gap {res}")
        }
        Ok(_) => {}
        Err(_) => warn!("native resolution undefined; using bin width {bin_width} as given"),
    }
    let bins = (g.extent() / bin_width).floor() + 1.0;
    if bins > MAX_BINS as f64 {
        return Err(Error::InvalidArgument(format!(
            "bin width {bin_width} yields {bins} bins (limit {MAX_BINS})"
        )));
    }
    let mut counts = vec![0u64; bins as usize];
    let last = counts.len() - 1;
    for t in g.timestamps() {
        let i = ((t / bin_width).floor() as usize).min(last);
        counts[i] += 1;
    }
    EventHistogram::from_counts(bin_width, counts)
}

/// Maps every bin to `floor(B * P(i))`, spreading the cumulative distribution
/// evenly over the bin index range `0..=B`.
pub fn equalize(h: &EventHistogram) -> Result<EqualizedHistogram> {
    if h.total() == 0 {
        return Err(Error::NoEvents);
    }
    let top = (h.bins() - 1) as u128;
    let total = u128::from(h.total());
    let levels = h
        .cumulative()
        .into_iter()
        .map(|c| (top * u128::from(c) / total) as u64)
        .collect();
    Ok(EqualizedHistogram {
        source: h.clone(),
        levels,
    })
}

/// Nonuniform slicing by sampling the equalized time axis at `k` even steps.
///
/// Cut `l` sits at the end of the earliest bin whose CDF reaches `l / k`. A
/// cut that does not advance past the previous one moves to the next occupied
/// bin, and a cut is held back far enough that every later slice still gets
/// an occupied bin; together these keep exactly `k` non-empty slices. When a
/// bin end coincides with `T` the cut is pulled back midway between the last
/// event before it and the first event after it.
pub fn histeq_slicing(g: &DynamicGraph, k: usize, bin_width: f64) -> Result<Timeslicing> {
    check_k(k)?;
    let h = build_histogram(g, bin_width)?;
    let occupied = h.occupied();
    let m = occupied.len();
    if m < k {
        return Err(Error::ResolutionTooCoarse { k, occupied: m });
    }
    let cumulative = h.cumulative();
    let total = u128::from(h.total());
    let times: Vec<f64> = g.timestamps().collect();
    let t_max = g.extent();

    let mut boundaries = Vec::with_capacity(k + 1);
    boundaries.push(0.0);
    // position in `occupied` of the previous cut
    let mut prev: Option<usize> = None;
    for l in 1..k {
        let level = l as u128 * total;
        // P(b) >= l / k  <=>  cum(b) * k >= l * |E|
        let candidate = occupied.partition_point(|&b| u128::from(cumulative[b]) * (k as u128) < level);
        let earliest = prev.map_or(0, |p| p + 1);
        let latest = m - k + l - 1;
        let j = candidate.max(earliest).min(latest);
        prev = Some(j);

        let bin = occupied[j];
        let left = cumulative[bin] as usize;
        let before = times[left - 1];
        let after = times[left];
        let edge = (bin + 1) as f64 * bin_width;
        let boundary = if edge > before && edge <= after && edge < t_max {
            edge
        } else {
            between(before, after)
        };
        boundaries.push(boundary);
    }
    boundaries.push(t_max);
    Timeslicing::new(boundaries, Method::HistEq, Resolution::BinWidth(bin_width))
}
