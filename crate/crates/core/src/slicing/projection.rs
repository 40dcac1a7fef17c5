use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::event_model::{DynamicGraph, NodeId};

/// All events of one unordered node pair within a slice.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregatedEdge {
    /// Endpoints, smaller node index first.
    pub endpoints: (NodeId, NodeId),
    /// Event timestamps in time order.
    pub timestamps: Vec<f64>,
}

impl AggregatedEdge {
    pub fn count(&self) -> usize {
        self.timestamps.len()
    }

    pub fn median(&self) -> f64 {
        median_sorted(&self.timestamps)
    }

    pub fn is_loop(&self) -> bool {
        self.endpoints.0 == self.endpoints.1
    }
}

/// Median of an ascending, non-empty slice; the mean of the two middle values
/// for even lengths.
pub(crate) fn median_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        let (a, b) = (sorted[n / 2 - 1], sorted[n / 2]);
        a + (b - a) / 2.0
    }
}

/// Static projection of one interval: the incident nodes and one aggregated
/// edge per node pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceGraph {
    pub interval: (f64, f64),
    pub nodes: Vec<NodeId>,
    pub edges: Vec<AggregatedEdge>,
}

impl SliceGraph {
    pub fn event_count(&self) -> usize {
        self.edges.iter().map(AggregatedEdge::count).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Projects the events with `lo <= t < hi` onto a static graph. The interval
/// is closed on the right when `hi` is the graph's extent.
///
/// Edges are undirected: `a,b` and `b,a` events aggregate together. With
/// `all_nodes` the node set is the whole graph's, otherwise only nodes
/// incident to an event in the interval.
pub fn project_slice(g: &DynamicGraph, lo: f64, hi: f64, all_nodes: bool) -> Result<SliceGraph> {
    if hi < lo {
        return Err(Error::InvalidArgument(format!(
            "inverted interval [{lo}, {hi})"
        )));
    }
    let events = g.events();
    let start = events.partition_point(|e| e.timestamp < lo);
    let end = if hi == g.extent() {
        events.partition_point(|e| e.timestamp <= hi)
    } else {
        events.partition_point(|e| e.timestamp < hi)
    };
    let end = end.max(start);

    let mut pairs: BTreeMap<(NodeId, NodeId), Vec<f64>> = BTreeMap::new();
    for e in &events[start..end] {
        pairs.entry(e.pair()).or_default().push(e.timestamp);
    }
    let nodes = if all_nodes {
        g.nodes().collect()
    } else {
        let mut nodes: Vec<NodeId> = pairs.keys().flat_map(|&(a, b)| [a, b]).collect();
        nodes.sort_unstable();
        nodes.dedup();
        nodes
    };
    let edges = pairs
        .into_iter()
        .map(|(endpoints, timestamps)| AggregatedEdge {
            endpoints,
            timestamps,
        })
        .collect();
    Ok(SliceGraph {
        interval: (lo, hi),
        nodes,
        edges,
    })
}
