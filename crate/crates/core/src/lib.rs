//! Timeslicing of event-based dynamic graphs.
//!
//! An event-based dynamic graph is a stream of time-stamped edges over a node
//! set. This crate partitions the stream's time extent `[0, T]` into `k`
//! intervals, either uniformly or so that each interval carries roughly the
//! same number of events, measures how evenly the events are spread, and
//! renders the resulting slices as a small-multiples SVG.
//!
//! The pipeline is:
//!
//! 1. [`event_model::ingest_stream`] parses an edge list into a [`DynamicGraph`].
//! 2. [`slicing`] computes a [`Timeslicing`] with one of
//!    [`slicing::uniform_slicing`], [`slicing::equal_event_partition`] or
//!    [`slicing::histeq_slicing`].
//! 3. [`metrics::complexity_report`] summarizes the per-slice event counts.
//! 4. [`layout::layout_aggregate`] places every node once, and
//!    [`render::build_panels`] / [`render::render_svg`] draw the panels.

pub mod error;
pub mod event_model;
pub mod layout;
pub mod metrics;
pub mod render;
pub mod slicing;
pub mod synth;

pub use error::{Error, Result};
pub use event_model::{DynamicGraph, NodeId, TemporalEdge};
pub use layout::Embedding;
pub use metrics::ComplexityReport;
pub use render::PanelSpec;
pub use slicing::{EqualizedHistogram, EventHistogram, Method, SliceGraph, Timeslicing};
