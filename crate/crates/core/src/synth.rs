//! Deterministic synthetic event streams with background activity and bursts.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::event_model::DynamicGraph;

const DAY: f64 = 86_400.0;

/// A window `[start, end)` carrying `events` extra events.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Burst {
    pub start: f64,
    pub end: f64,
    pub events: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct SynthSpec {
    /// Length of the background window `[0, extent)`.
    pub extent: f64,
    /// Background events per time unit.
    pub background_rate: f64,
    pub bursts: Vec<Burst>,
    pub nodes: usize,
    /// Node labels; generated as `n0`, `n1`, ... when empty.
    pub labels: Vec<String>,
    pub seed: u64,
    /// Truncate timestamps to whole time units.
    pub integer_times: bool,
    /// Add one event at `t = 0` and one at `t = extent`.
    pub pin_extent: bool,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            extent: 1.0,
            background_rate: 0.0,
            bursts: Vec::new(),
            nodes: 12,
            labels: Vec::new(),
            seed: 0,
            integer_times: false,
            pin_extent: false,
        }
    }
}

impl SynthSpec {
    /// A season-long stream between twelve teams at one-second precision:
    /// 418 days, sparse background chatter, weekend fixture bursts during the
    /// two seasons, a final near day 268, and a quiet summer break.
    pub fn rugby(seed: u64) -> Self {
        let labels = ["be", "ca", "co", "dr", "ed", "gl", "le", "mu", "os", "sc", "ul", "ze"];
        let mut bursts = Vec::new();
        // first season, Sept to early May: a fixture weekend every week
        for week in 0..35 {
            let start = (5.0 + 7.0 * f64::from(week)) * DAY;
            let events = 40 + (week * 7 % 23) as usize;
            bursts.push(Burst {
                start,
                end: start + 1.5 * DAY,
                events,
            });
        }
        // play-offs and final
        bursts.push(Burst {
            start: 260.0 * DAY,
            end: 261.0 * DAY,
            events: 90,
        });
        bursts.push(Burst {
            start: 268.0 * DAY,
            end: 268.5 * DAY,
            events: 160,
        });
        // preseason and the opening weeks of the next season
        for (day, events) in [(352.0, 60), (363.0, 70), (375.0, 150), (382.0, 170), (389.0, 180), (396.0, 170), (403.0, 160), (410.0, 150)] {
            bursts.push(Burst {
                start: day * DAY,
                end: day * DAY + 1.5 * DAY,
                events,
            });
        }
        Self {
            extent: 418.0 * DAY,
            background_rate: 0.75 / DAY,
            bursts,
            nodes: labels.len(),
            labels: labels.iter().map(|s| (*s).to_owned()).collect(),
            seed,
            integer_times: true,
            pin_extent: true,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.extent.is_finite() && self.extent >= 0.0) {
            return bad(format!("extent must be finite and non-negative, got {}", self.extent));
        }
        if !(self.background_rate.is_finite() && self.background_rate >= 0.0) {
            return bad(format!("background rate must be non-negative, got {}", self.background_rate));
        }
        if self.nodes == 0 {
            return bad("node count must be positive".into());
        }
        if !self.labels.is_empty() && self.labels.len() != self.nodes {
            return bad(format!("{} labels given for {} nodes", self.labels.len(), self.nodes));
        }
        for b in &self.bursts {
            if !(b.start.is_finite() && b.end.is_finite() && b.start < b.end) {
                return bad(format!("burst window [{}, {}) is empty or not finite", b.start, b.end));
            }
        }
        Ok(())
    }

    fn background_events(&self) -> usize {
        (self.background_rate * self.extent).round() as usize
    }

    /// Number of events this description generates.
    pub fn event_count(&self) -> usize {
        let pinned = if self.pin_extent { 2 } else { 0 };
        self.background_events() + self.bursts.iter().map(|b| b.events).sum::<usize>() + pinned
    }

    fn label(&self, i: usize) -> String {
        self.labels.get(i).cloned().unwrap_or_else(|| format!("n{i}"))
    }
}

/// Raw `(source, target, timestamp)` records in generation order.
pub fn synth_records(spec: &SynthSpec) -> Result<Vec<(String, String, f64)>> {
    spec.validate()?;
    if spec.event_count() == 0 {
        return Err(Error::InvalidArgument("the synthetic spec implies zero events".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut times = Vec::with_capacity(spec.event_count());
    if spec.pin_extent {
        times.push(0.0);
        times.push(spec.extent);
    }
    if spec.extent > 0.0 {
        for _ in 0..spec.background_events() {
            times.push(rng.gen_range(0.0..spec.extent));
        }
    }
    for b in &spec.bursts {
        for _ in 0..b.events {
            times.push(rng.gen_range(b.start..b.end));
        }
    }

    let records = times
        .into_iter()
        .map(|t| {
            let t = if spec.integer_times { t.floor() } else { t };
            let (a, b) = random_pair(&mut rng, spec.nodes);
            (spec.label(a), spec.label(b), t)
        })
        .collect();
    Ok(records)
}

/// Generates the stream described by `spec` and ingests it.
pub fn synth_stream(spec: &SynthSpec) -> Result<DynamicGraph> {
    DynamicGraph::from_records(synth_records(spec)?)
}

/// Edge-list text of the raw records.
pub fn records_to_edge_list(records: &[(String, String, f64)]) -> String {
    let mut out = String::new();
    for (a, b, t) in records {
        out.push_str(&format!("{a},{b},{t}\n"));
    }
    out
}

fn random_pair(rng: &mut ChaCha8Rng, nodes: usize) -> (usize, usize) {
    if nodes == 1 {
        return (0, 0);
    }
    let a = rng.gen_range(0..nodes);
    let mut b = rng.gen_range(0..nodes - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_burst() -> SynthSpec {
        SynthSpec {
            extent: 10.0,
            bursts: vec![Burst {
                start: 5.0,
                end: 6.0,
                events: 10,
            }],
            seed: 42,
            ..SynthSpec::default()
        }
    }

    #[test]
    fn burst_only_stream() {
        let g = synth_stream(&single_burst()).unwrap();
        assert_eq!(g.len(), 10);
        for t in g.timestamps() {
            let raw = t + g.origin();
            assert!((5.0..6.0).contains(&raw), "{raw}");
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let a = synth_records(&single_burst()).unwrap();
        let b = synth_records(&single_burst()).unwrap();
        assert_eq!(a, b);
        let mut other = single_burst();
        other.seed = 43;
        assert_ne!(a, synth_records(&other).unwrap());
    }

    #[test]
    fn zero_events_is_an_error() {
        let spec = SynthSpec::default();
        assert!(matches!(synth_stream(&spec), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn pairs_are_distinct_nodes() {
        let spec = SynthSpec {
            extent: 100.0,
            background_rate: 2.0,
            nodes: 3,
            ..SynthSpec::default()
        };
        for (a, b, _) in synth_records(&spec).unwrap() {
            assert_ne!(a, b);
        }
    }

    #[test]
    fn rugby_shape() {
        let spec = SynthSpec::rugby(7);
        let g = synth_stream(&spec).unwrap();
        assert!(g.len() > 3000, "{}", g.len());
        assert_eq!(g.len(), spec.event_count());
        assert_eq!(g.node_count(), 12);
        assert_eq!(g.extent(), 418.0 * DAY);
        assert_eq!(g.native_resolution().unwrap(), 1.0);
    }

    #[test]
    fn rejects_bad_specs() {
        let mut spec = single_burst();
        spec.bursts[0].end = 5.0;
        assert!(synth_stream(&spec).is_err());
        let mut spec = single_burst();
        spec.nodes = 0;
        assert!(synth_stream(&spec).is_err());
        let mut spec = single_burst();
        spec.labels = vec!["a".into()];
        assert!(synth_stream(&spec).is_err());
    }
}
