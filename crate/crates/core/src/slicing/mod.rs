//! Uniform and nonuniform timeslicings of a [`DynamicGraph`].
//!
//! A timeslicing with `k` intervals is a sequence of boundaries
//! `0 = t_0 < t_1 < ... < t_k = T`. Intervals are half-open `[t_{l-1}, t_l)`
//! except the last, which is closed `[t_{k-1}, T]`, so every event belongs to
//! exactly one interval. An event sitting exactly on an interior boundary
//! belongs to the interval on its right.

mod document;
mod histogram;
mod projection;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::event_model::DynamicGraph;

pub use document::SlicingDocument;
pub use histogram::{build_histogram, equalize, histeq_slicing, EqualizedHistogram, EventHistogram};
pub use projection::{project_slice, AggregatedEdge, SliceGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Uniform,
    EqualEvents,
    HistEq,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Uniform, Method::EqualEvents, Method::HistEq];

    pub fn name(self) -> &'static str {
        match self {
            Method::Uniform => "uniform",
            Method::EqualEvents => "equal-events",
            Method::HistEq => "hist-eq",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method `{s}`")))
    }
}

/// The temporal resolution a slicing was computed at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Resolution {
    /// Continuous time; uniform slicing needs no resolution.
    Continuous,
    /// Events were counted in sequence, independent of their spacing.
    EventSequence,
    /// Histogram bin width.
    BinWidth(f64),
}

/// Ordered interval boundaries over `[0, T]` plus the method that made them.
#[derive(Debug, Clone, PartialEq)]
pub struct Timeslicing {
    boundaries: Vec<f64>,
    method: Method,
    resolution: Resolution,
}

impl Timeslicing {
    /// Validates and wraps a boundary sequence. Boundaries must start at 0 and
    /// strictly increase; the single degenerate slicing `[0, 0]` is allowed.
    pub fn new(boundaries: Vec<f64>, method: Method, resolution: Resolution) -> Result<Self> {
        if boundaries.len() < 2 {
            return Err(Error::InvalidArgument(
                "a timeslicing needs at least two boundaries".into(),
            ));
        }
        if boundaries.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidArgument("non-finite boundary".into()));
        }
        if boundaries[0] != 0.0 {
            return Err(Error::InvalidArgument("first boundary must be 0".into()));
        }
        let degenerate = boundaries.len() == 2 && boundaries[1] == 0.0;
        if !degenerate && boundaries.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "boundaries must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            boundaries,
            method,
            resolution,
        })
    }

    pub fn k(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn extent(&self) -> f64 {
        self.boundaries[self.k()]
    }

    /// Bounds of the `l`-th interval, 0-based.
    pub fn interval(&self, l: usize) -> (f64, f64) {
        (self.boundaries[l], self.boundaries[l + 1])
    }

    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.boundaries.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn durations(&self) -> Vec<f64> {
        self.intervals().map(|(lo, hi)| hi - lo).collect()
    }

    /// 0-based index of the interval containing `t`.
    pub fn slice_of(&self, t: f64) -> usize {
        let interior = &self.boundaries[1..self.k()];
        interior.partition_point(|&b| b <= t)
    }

    /// Number of events of `g` in each interval.
    pub fn counts(&self, g: &DynamicGraph) -> Vec<usize> {
        let mut counts = vec![0; self.k()];
        for t in g.timestamps() {
            counts[self.slice_of(t)] += 1;
        }
        counts
    }

    /// Static projection of interval `l`.
    pub fn project(&self, g: &DynamicGraph, l: usize, all_nodes: bool) -> Result<SliceGraph> {
        let (lo, hi) = self.interval(l);
        project_slice(g, lo, hi, all_nodes)
    }
}

fn check_k(k: usize) -> Result<()> {
    if k < 1 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    Ok(())
}

/// A value strictly above `lo` and at most `hi`, normally their midpoint.
/// Falls back to `hi` when the two are adjacent floats.
pub(crate) fn between(lo: f64, hi: f64) -> f64 {
    let mid = lo + (hi - lo) / 2.0;
    if mid <= lo {
        hi
    } else {
        mid
    }
}

/// Equal-duration intervals `t_l = l * T / k`.
pub fn uniform_slicing(g: &DynamicGraph, k: usize) -> Result<Timeslicing> {
    check_k(k)?;
    let t_max = g.extent();
    if t_max == 0.0 && k > 1 {
        return Err(Error::DegenerateExtent { k });
    }
    let mut boundaries: Vec<f64> = (0..k).map(|l| l as f64 * t_max / k as f64).collect();
    boundaries.push(t_max);
    Timeslicing::new(boundaries, Method::Uniform, Resolution::Continuous)
}

/// Per-slice event counts for `n` events in `k` slices with error diffusion.
///
/// Each slice takes the integer count nearest to its quota `n / k` plus the
/// error carried from the previous slice (halfway rounds up), and passes the
/// new rounding error on. Arithmetic is done in units of `1 / k`, so the
/// counts always sum to `n`.
pub fn equal_event_counts(n: usize, k: usize) -> Vec<usize> {
    let (n, k) = (n as i128, k as i128);
    // carried error, scaled by k
    let mut carry = 0i128;
    (0..k)
        .map(|_| {
            let target = n + carry;
            let count = (2 * target + k).div_euclid(2 * k);
            carry = target - count * k;
            count as usize
        })
        .collect()
}

/// Cuts the ordered event sequence every `|E| / k` events, diffusing the
/// fractional remainder into the following slice.
///
/// A cut between two events with different timestamps lands midway between
/// them. When the two events share a timestamp no time boundary can separate
/// them; the cut then lands half a native resolution after that timestamp,
/// which keeps the whole tie group in the earlier slice. A cut that would not
/// advance past the previous boundary is moved midway towards the next event,
/// leaving an empty slice.
pub fn equal_event_partition(g: &DynamicGraph, k: usize) -> Result<Timeslicing> {
    check_k(k)?;
    let n = g.len();
    if n < k {
        return Err(Error::InsufficientEvents { events: n, k });
    }
    let t_max = g.extent();
    if t_max == 0.0 && k > 1 {
        return Err(Error::DegenerateExtent { k });
    }
    let times: Vec<f64> = g.timestamps().collect();
    let counts = equal_event_counts(n, k);

    let mut boundaries = Vec::with_capacity(k + 1);
    boundaries.push(0.0);
    let mut cut = 0;
    for &count in &counts[..k - 1] {
        cut += count;
        let before = times[cut - 1];
        let after = times[cut];
        let mut boundary = if after > before {
            between(before, after)
        } else {
            let next = next_time_after(&times, before);
            // T > 0 here, so the resolution exists
            let half = g.native_resolution()? / 2.0;
            if before + half < next {
                before + half
            } else {
                between(before, next)
            }
        };
        let prev = *boundaries.last().unwrap();
        if boundary <= prev {
            boundary = between(prev, next_time_after(&times, prev));
        }
        boundaries.push(boundary);
    }
    boundaries.push(t_max);
    Timeslicing::new(boundaries, Method::EqualEvents, Resolution::EventSequence)
}

/// First timestamp strictly greater than `t`, or the last one if none is.
fn next_time_after(times: &[f64], t: f64) -> f64 {
    let i = times.partition_point(|&x| x <= t);
    times[i.min(times.len() - 1)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event_model::ingest_str;

    fn stream(times: &[f64]) -> DynamicGraph {
        DynamicGraph::from_records(times.iter().map(|&t| ("a", "b", t))).unwrap()
    }

    #[test]
    fn uniform_examples() {
        let g = stream(&[0.0, 10.0]);
        let s = uniform_slicing(&g, 5).unwrap();
        assert_eq!(s.boundaries(), &[0.0, 2.0, 4.0, 6.0, 8.0, 10.0]);
        assert_eq!(s.method(), Method::Uniform);

        let g = stream(&[0.0, 7.0]);
        let s = uniform_slicing(&g, 2).unwrap();
        assert_eq!(s.boundaries(), &[0.0, 3.5, 7.0]);
    }

    #[test]
    fn uniform_errors() {
        let g = stream(&[0.0, 7.0]);
        assert!(matches!(uniform_slicing(&g, 0), Err(Error::InvalidArgument(_))));
        let g = stream(&[3.0]);
        assert_eq!(uniform_slicing(&g, 2), Err(Error::DegenerateExtent { k: 2 }));
        let s = uniform_slicing(&g, 1).unwrap();
        assert_eq!(s.boundaries(), &[0.0, 0.0]);
        assert_eq!(s.counts(&g), vec![1]);
    }

    #[test]
    fn error_diffusion_counts() {
        assert_eq!(equal_event_counts(17, 3), vec![6, 5, 6]);
        assert_eq!(equal_event_counts(10, 5), vec![2, 2, 2, 2, 2]);
        assert_eq!(equal_event_counts(7, 2), vec![4, 3]);
        assert_eq!(equal_event_counts(5, 5), vec![1; 5]);
        assert_eq!(equal_event_counts(3, 1), vec![3]);
    }

    #[test]
    fn equal_events_boundaries_at_midpoints() {
        let g = stream(&(0..17).map(f64::from).collect::<Vec<_>>());
        let s = equal_event_partition(&g, 3).unwrap();
        assert_eq!(s.boundaries(), &[0.0, 5.5, 10.5, 16.0]);
        assert_eq!(s.counts(&g), vec![6, 5, 6]);
    }

    #[test]
    fn equal_events_tie_keeps_group_left() {
        // cut after 2 events falls inside the tie at t = 1
        let g = stream(&[0.0, 1.0, 1.0, 3.0]);
        let s = equal_event_partition(&g, 2).unwrap();
        assert_eq!(s.boundaries(), &[0.0, 1.5, 3.0]);
        assert_eq!(s.counts(&g), vec![3, 1]);
    }

    #[test]
    fn equal_events_collapsing_cuts_stay_increasing() {
        let g = stream(&[0.0, 0.0, 0.0, 0.0, 10.0]);
        let s = equal_event_partition(&g, 3).unwrap();
        let b = s.boundaries();
        assert!(b.windows(2).all(|w| w[1] > w[0]), "{b:?}");
        assert_eq!(s.counts(&g).iter().sum::<usize>(), 5);
    }

    #[test]
    fn equal_events_errors() {
        let g = stream(&[0.0, 1.0]);
        assert_eq!(
            equal_event_partition(&g, 3),
            Err(Error::InsufficientEvents { events: 2, k: 3 })
        );
        let g = stream(&[0.0, 0.0]);
        assert_eq!(equal_event_partition(&g, 2), Err(Error::DegenerateExtent { k: 2 }));
    }

    #[test]
    fn boundary_events_go_right() {
        let g = ingest_str("a,b,0\na,b,2\na,b,4").unwrap();
        let s = uniform_slicing(&g, 2).unwrap();
        assert_eq!(s.counts(&g), vec![1, 2]);
        assert_eq!(s.slice_of(4.0), 1);
    }

    #[test]
    fn rejects_bad_boundaries() {
        assert!(Timeslicing::new(vec![0.0], Method::Uniform, Resolution::Continuous).is_err());
        assert!(Timeslicing::new(vec![0.0, 2.0, 2.0], Method::Uniform, Resolution::Continuous).is_err());
        assert!(Timeslicing::new(vec![1.0, 2.0], Method::Uniform, Resolution::Continuous).is_err());
        assert!(Timeslicing::new(vec![0.0, f64::NAN], Method::Uniform, Resolution::Continuous).is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("median".parse::<Method>().is_err());
    }
}
