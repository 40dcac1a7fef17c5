//! One shared node embedding for every panel, from a force-directed layout of
//! the time-aggregated graph.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::event_model::DynamicGraph;

pub const DEFAULT_ITERATIONS: usize = 500;
pub const DEFAULT_SEED: u64 = 0;
/// Blank border left on each side of the unit square.
pub const MARGIN: f64 = 0.05;

/// Node label -> position in the unit square.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub seed: u64,
    pub iterations: usize,
    pub positions: BTreeMap<String, (f64, f64)>,
}

impl Embedding {
    pub fn position(&self, label: &str) -> Option<(f64, f64)> {
        self.positions.get(label).copied()
    }

    /// True when every node of `g` has a position.
    pub fn covers(&self, g: &DynamicGraph) -> bool {
        g.nodes().all(|n| self.positions.contains_key(g.label(n)))
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("embeddings serialize");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let e: Embedding = serde_json::from_str(text)?;
        if e.positions.values().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::Document("embedding has non-finite coordinates".into()));
        }
        Ok(e)
    }
}

/// Fruchterman-Reingold layout of the union of all slices.
///
/// Each node pair is one spring whose pull grows with `1 + ln(events)`.
/// Nodes are processed in label order and start from seeded random
/// positions, so the result depends only on the labels, the pair weights,
/// the seed and the iteration count. Self-loops exert no force.
pub fn layout_aggregate(g: &DynamicGraph, seed: u64, iterations: usize) -> Result<Embedding> {
    if g.is_empty() {
        return Err(Error::EmptyInput);
    }
    if iterations == 0 {
        return Err(Error::InvalidArgument("iterations must be positive".into()));
    }
    let mut labels: Vec<&str> = g.nodes().map(|n| g.label(n)).collect();
    labels.sort_unstable();
    let index: BTreeMap<&str, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();

    let mut weights: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for e in g.events() {
        let a = index[g.label(e.source)];
        let b = index[g.label(e.target)];
        if a != b {
            *weights.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    let springs: Vec<(usize, usize, f64)> = weights
        .into_iter()
        .map(|((a, b), w)| (a, b, 1.0 + (w as f64).ln()))
        .collect();

    let n = labels.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<[f64; 2]> = (0..n).map(|_| [rng.gen::<f64>(), rng.gen::<f64>()]).collect();

    let k = (1.0 / n as f64).sqrt();
    let t0 = 0.1;
    for it in 0..iterations {
        let temperature = t0 * (1.0 - it as f64 / iterations as f64);
        let mut disp = vec![[0.0f64; 2]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let (dx, dy, d) = separation(&pos, i, j);
                let f = k * k / d;
                let (fx, fy) = (dx / d * f, dy / d * f);
                disp[i][0] += fx;
                disp[i][1] += fy;
                disp[j][0] -= fx;
                disp[j][1] -= fy;
            }
        }
        for &(a, b, w) in &springs {
            let (dx, dy, d) = separation(&pos, a, b);
            let f = w * d * d / k;
            let (fx, fy) = (dx / d * f, dy / d * f);
            disp[a][0] -= fx;
            disp[a][1] -= fy;
            disp[b][0] += fx;
            disp[b][1] += fy;
        }
        for (p, d) in pos.iter_mut().zip(&disp) {
            let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
            if len > 0.0 {
                let step = len.min(temperature);
                p[0] += d[0] / len * step;
                p[1] += d[1] / len * step;
            }
        }
    }

    let positions = normalize(&pos)
        .into_iter()
        .zip(labels)
        .map(|(p, l)| (l.to_owned(), p))
        .collect();
    Ok(Embedding {
        seed,
        iterations,
        positions,
    })
}

/// Vector from `j` to `i` and its length, nudged apart when they coincide.
fn separation(pos: &[[f64; 2]], i: usize, j: usize) -> (f64, f64, f64) {
    let mut dx = pos[i][0] - pos[j][0];
    let mut dy = pos[i][1] - pos[j][1];
    let mut d = (dx * dx + dy * dy).sqrt();
    if d < 1e-9 {
        // deterministic direction from the index pair
        let angle = (i * 31 + j * 17) as f64;
        dx = angle.cos() * 1e-9;
        dy = angle.sin() * 1e-9;
        d = 1e-9;
    }
    (dx, dy, d)
}

/// Uniform scaling into `[MARGIN, 1 - MARGIN]`, centered.
fn normalize(pos: &[[f64; 2]]) -> Vec<(f64, f64)> {
    let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in pos {
        min_x = min_x.min(p[0]);
        max_x = max_x.max(p[0]);
        min_y = min_y.min(p[1]);
        max_y = max_y.max(p[1]);
    }
    let span = (max_x - min_x).max(max_y - min_y);
    if span <= 0.0 {
        return vec![(0.5, 0.5); pos.len()];
    }
    let scale = (1.0 - 2.0 * MARGIN) / span;
    let (cx, cy) = ((min_x + max_x) / 2.0, (min_y + max_y) / 2.0);
    pos.iter()
        .map(|p| (0.5 + (p[0] - cx) * scale, 0.5 + (p[1] - cy) * scale))
        .collect()
}
