//! Event-based dynamic graphs: node interning, the time-stamped edge stream,
//! and the edge-list wire format.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::BufRead;

use chrono::DateTime;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense index of an interned node label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One edge event `(source, target, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemporalEdge {
    pub source: NodeId,
    pub target: NodeId,
    pub timestamp: f64,
}

impl TemporalEdge {
    /// The endpoints as an unordered pair, smaller index first.
    pub fn pair(&self) -> (NodeId, NodeId) {
        if self.source <= self.target {
            (self.source, self.target)
        } else {
            (self.target, self.source)
        }
    }
}

/// A time-ordered stream of edge events over `[0, T]`.
///
/// Timestamps are shifted so the earliest event sits at `t = 0`; the shift is
/// kept in [`DynamicGraph::origin`] for display. Events with equal timestamps
/// keep their input order.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicGraph {
    labels: Vec<String>,
    lookup: HashMap<String, NodeId>,
    events: Vec<TemporalEdge>,
    extent: f64,
    native_resolution: Option<f64>,
    origin: f64,
}

impl DynamicGraph {
    /// Builds a graph from raw `(source, target, timestamp)` records in input
    /// order. Labels are interned in order of first appearance.
    pub fn from_records<I, S>(records: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S, f64)>,
        S: AsRef<str>,
    {
        let mut labels = Vec::new();
        let mut lookup = HashMap::new();
        let mut events = Vec::new();
        for (n, (source, target, t)) in records.into_iter().enumerate() {
            if !t.is_finite() {
                return Err(Error::Malformed {
                    line: n + 1,
                    message: format!("timestamp {t} is not finite"),
                });
            }
            let source = intern(&mut labels, &mut lookup, source.as_ref(), n + 1)?;
            let target = intern(&mut labels, &mut lookup, target.as_ref(), n + 1)?;
            events.push(TemporalEdge {
                source,
                target,
                timestamp: t,
            });
        }
        if events.is_empty() {
            return Err(Error::EmptyInput);
        }

        let origin = events
            .iter()
            .map(|e| e.timestamp)
            .fold(f64::INFINITY, f64::min);
        for e in &mut events {
            e.timestamp -= origin;
        }
        // stable: ties keep input order
        events.sort_by(|a, b| a.timestamp.total_cmp(&b.timestamp));

        let extent = events.last().map_or(0.0, |e| e.timestamp);
        let native_resolution = min_positive_gap(&events);
        Ok(Self {
            labels,
            lookup,
            events,
            extent,
            native_resolution,
            origin,
        })
    }

    pub fn events(&self) -> &[TemporalEdge] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// The extent `T`: timestamp of the last event after normalization.
    pub fn extent(&self) -> f64 {
        self.extent
    }

    /// Original timestamp of the earliest event, before the shift to zero.
    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.labels.len() as u32).map(NodeId)
    }

    pub fn label(&self, id: NodeId) -> &str {
        &self.labels[id.index()]
    }

    pub fn node(&self, label: &str) -> Option<NodeId> {
        self.lookup.get(label).copied()
    }

    pub fn timestamps(&self) -> impl Iterator<Item = f64> + '_ {
        self.events.iter().map(|e| e.timestamp)
    }

    /// Minimum positive gap between distinct timestamps.
    pub fn native_resolution(&self) -> Result<f64> {
        self.native_resolution.ok_or(Error::ResolutionUndefined)
    }

    /// Canonical edge-list text: normalized timestamps at full precision.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# origin: {}", self.origin);
        for e in &self.events {
            let _ = writeln!(
                out,
                "{},{},{}",
                self.label(e.source),
                self.label(e.target),
                e.timestamp
            );
        }
        out
    }
}

fn intern(
    labels: &mut Vec<String>,
    lookup: &mut HashMap<String, NodeId>,
    label: &str,
    line: usize,
) -> Result<NodeId> {
    if label.is_empty() {
        return Err(Error::Malformed {
            line,
            message: "empty node label".into(),
        });
    }
    if let Some(&id) = lookup.get(label) {
        return Ok(id);
    }
    let id = NodeId(labels.len() as u32);
    labels.push(label.to_owned());
    lookup.insert(label.to_owned(), id);
    Ok(id)
}

fn min_positive_gap(sorted: &[TemporalEdge]) -> Option<f64> {
    sorted
        .windows(2)
        .map(|w| w[1].timestamp - w[0].timestamp)
        .filter(|&gap| gap > 0.0)
        .min_by(f64::total_cmp)
}

/// Minimum positive distance between two event timestamps of `g`.
pub fn native_resolution(g: &DynamicGraph) -> Result<f64> {
    g.native_resolution()
}

/// Parses a timestamp field: a decimal number of seconds or an RFC 3339
/// datetime, converted to seconds since the Unix epoch.
pub fn parse_timestamp(field: &str) -> Option<f64> {
    if let Ok(t) = field.parse::<f64>() {
        return t.is_finite().then_some(t);
    }
    let dt = DateTime::parse_from_rfc3339(field).ok()?;
    Some(dt.timestamp() as f64 + f64::from(dt.timestamp_subsec_nanos()) * 1e-9)
}

/// Parses the `source,target,timestamp` edge-list format. Blank lines and
/// lines starting with `#` are skipped.
pub fn ingest_stream<R: BufRead>(source: R) -> Result<DynamicGraph> {
    let mut records = Vec::new();
    for (n, line) in source.lines().enumerate() {
        let line_no = n + 1;
        let line = line.map_err(|e| Error::Malformed {
            line: line_no,
            message: e.to_string(),
        })?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::Malformed {
                line: line_no,
                message: format!("expected 3 fields `source,target,timestamp`, found {}", fields.len()),
            });
        }
        if fields[0].is_empty() || fields[1].is_empty() {
            return Err(Error::Malformed {
                line: line_no,
                message: "empty node label".into(),
            });
        }
        let t = parse_timestamp(fields[2]).ok_or_else(|| Error::Malformed {
            line: line_no,
            message: format!("timestamp `{}` is neither a number nor an RFC 3339 datetime", fields[2]),
        })?;
        records.push((fields[0].to_owned(), fields[1].to_owned(), t));
    }
    DynamicGraph::from_records(records)
}

/// Convenience wrapper around [`ingest_stream`] for in-memory text.
pub fn ingest_str(text: &str) -> Result<DynamicGraph> {
    ingest_stream(text.as_bytes())
}
