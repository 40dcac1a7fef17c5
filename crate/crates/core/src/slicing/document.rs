use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Method, Resolution, Timeslicing};
use crate::error::{Error, Result};
use crate::event_model::DynamicGraph;

/// Serialized form of a timeslicing together with its per-slice counts.
///
/// ```json
/// {
///   "method": "hist-eq",
///   "k": 2,
///   "resolution": 1.0,
///   "boundaries": [0.0, 2.0, 7.0],
///   "counts": [8, 8]
/// }
/// ```
///
/// `resolution` is the histogram bin width, or one of the markers
/// `"event-sequence"` and `"continuous"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlicingDocument {
    pub method: Method,
    pub k: usize,
    pub resolution: Resolution,
    pub boundaries: Vec<f64>,
    pub counts: Vec<usize>,
}

impl SlicingDocument {
    pub fn new(g: &DynamicGraph, s: &Timeslicing) -> Self {
        Self {
            method: s.method(),
            k: s.k(),
            resolution: s.resolution(),
            boundaries: s.boundaries().to_vec(),
            counts: s.counts(g),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("slicing documents serialize");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn timeslicing(&self) -> Result<Timeslicing> {
        let s = Timeslicing::new(self.boundaries.clone(), self.method, self.resolution)?;
        if s.k() != self.k || self.counts.len() != self.k {
            return Err(Error::Document(format!(
                "k = {} disagrees with {} boundaries and {} counts",
                self.k,
                self.boundaries.len(),
                self.counts.len()
            )));
        }
        Ok(s)
    }
}

impl Serialize for Resolution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Resolution::Continuous => serializer.serialize_str("continuous"),
            Resolution::EventSequence => serializer.serialize_str("event-sequence"),
            Resolution::BinWidth(w) => serializer.serialize_f64(*w),
        }
    }
}

impl<'de> Deserialize<'de> for Resolution {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Width(f64),
            Marker(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Width(w) if w > 0.0 && w.is_finite() => Ok(Resolution::BinWidth(w)),
            Repr::Width(w) => Err(serde::de::Error::custom(format!("invalid bin width {w}"))),
            Repr::Marker(m) if m == "continuous" => Ok(Resolution::Continuous),
            Repr::Marker(m) if m == "event-sequence" => Ok(Resolution::EventSequence),
            Repr::Marker(m) => Err(serde::de::Error::custom(format!("unknown resolution `{m}`"))),
        }
    }
}
