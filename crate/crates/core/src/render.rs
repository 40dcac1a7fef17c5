//! Small-multiples SVG: one panel per slice, drawn over the shared embedding.
//!
//! Every panel carries a glyph in its top-left corner: a horizontal bar whose
//! length is the slice's share of the whole time extent, above a line chart
//! of event frequency inside the slice. Aggregated edges are colored on a
//! teal to brown ramp by the median time of their events relative to the
//! slice, and their stroke width grows with the event count.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::event_model::DynamicGraph;
use crate::layout::Embedding;
use crate::slicing::{SliceGraph, Timeslicing};

/// Default number of glyph bins per slice when no glyph bin width is given.
pub const GLYPH_BINS: usize = 20;
const MAX_GLYPH_BINS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    pub const TEAL: Rgb = Rgb(0, 128, 128);
    pub const BROWN: Rgb = Rgb(139, 69, 19);

    /// Linear interpolation in RGB, `u` clamped to `[0, 1]`.
    pub fn lerp(self, other: Rgb, u: f64) -> Rgb {
        let u = u.clamp(0.0, 1.0);
        let mix = |a: u8, b: u8| (f64::from(a) + (f64::from(b) - f64::from(a)) * u).round() as u8;
        Rgb(mix(self.0, other.0), mix(self.1, other.1), mix(self.2, other.2))
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rgb({},{},{})", self.0, self.1, self.2)
    }
}

impl FromStr for Rgb {
    type Err = Error;

    /// Accepts `#rrggbb` or `r,g,b`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("invalid color `{s}`"));
        if let Some(hex) = s.strip_prefix('#') {
            if hex.len() != 6 {
                return Err(bad());
            }
            let byte = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).map_err(|_| bad());
            return Ok(Rgb(byte(0)?, byte(2)?, byte(4)?));
        }
        let parts: Vec<u8> = s
            .split(',')
            .map(|p| p.trim().parse::<u8>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match parts[..] {
            [r, g, b] => Ok(Rgb(r, g, b)),
            _ => Err(bad()),
        }
    }
}

/// How an aggregated edge's event count maps to stroke width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WidthLaw {
    /// `1 + log2(count)`
    #[default]
    Log2,
    /// `count`
    Linear,
}

impl WidthLaw {
    pub fn width(self, count: usize) -> f64 {
        let c = count.max(1) as f64;
        match self {
            WidthLaw::Log2 => 1.0 + c.log2(),
            WidthLaw::Linear => c,
        }
    }
}

impl FromStr for WidthLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log2" => Ok(WidthLaw::Log2),
            "linear" => Ok(WidthLaw::Linear),
            _ => Err(Error::InvalidArgument(format!("unknown width law `{s}`"))),
        }
    }
}

/// Whether glyph line charts share one y-scale across panels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GlyphScale {
    #[default]
    Global,
    PerPanel,
}

impl FromStr for GlyphScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "global" => Ok(GlyphScale::Global),
            "per-panel" => Ok(GlyphScale::PerPanel),
            _ => Err(Error::InvalidArgument(format!("unknown glyph scale `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Glyph {
    /// `(t_hi - t_lo) / T`
    pub duration_fraction: f64,
    pub bin_width: f64,
    pub freq_series: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlacedNode {
    pub label: String,
    pub position: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StyledEdge {
    pub source: String,
    pub target: String,
    pub from: (f64, f64),
    pub to: (f64, f64),
    pub count: usize,
    pub median: f64,
    /// Position of the median time inside the slice, in `[0, 1]`.
    pub color_param: f64,
    pub width: f64,
}

/// Render-ready description of one slice.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelSpec {
    /// 1-based slice number.
    pub index: usize,
    pub interval: (f64, f64),
    pub slice: SliceGraph,
    pub glyph: Glyph,
    pub nodes: Vec<PlacedNode>,
    pub edges: Vec<StyledEdge>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PanelOptions {
    /// Glyph bin width in stream time units; `None` splits each slice into
    /// [`GLYPH_BINS`] bins.
    pub glyph_bin_width: Option<f64>,
    pub width_law: WidthLaw,
    /// Draw every node of the graph in every panel, not only incident ones.
    pub all_nodes: bool,
}

/// Builds one panel per slice of `s`.
pub fn build_panels(
    g: &DynamicGraph,
    s: &Timeslicing,
    e: &Embedding,
    options: &PanelOptions,
) -> Result<Vec<PanelSpec>> {
    if s.extent() != g.extent() {
        return Err(Error::InvalidArgument(
            "timeslicing was not computed on this graph".into(),
        ));
    }
    if !e.covers(g) {
        return Err(Error::InvalidArgument(
            "embedding lacks positions for some nodes".into(),
        ));
    }
    if let Some(w) = options.glyph_bin_width {
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::InvalidArgument(format!("glyph bin width must be positive, got {w}")));
        }
    }
    let extent = g.extent();
    (0..s.k())
        .map(|l| {
            let slice = s.project(g, l, options.all_nodes)?;
            let (lo, hi) = slice.interval;
            let duration = hi - lo;
            let glyph = glyph(&slice, extent, options.glyph_bin_width);
            let place = |label: &str| e.position(label).expect("embedding covers the graph");

            let nodes = slice
                .nodes
                .iter()
                .map(|&n| PlacedNode {
                    label: g.label(n).to_owned(),
                    position: place(g.label(n)),
                })
                .collect();
            let edges = slice
                .edges
                .iter()
                .map(|edge| {
                    let (a, b) = (g.label(edge.endpoints.0), g.label(edge.endpoints.1));
                    let median = edge.median();
                    let color_param = if duration > 0.0 {
                        ((median - lo) / duration).clamp(0.0, 1.0)
                    } else {
                        0.0
                    };
                    StyledEdge {
                        source: a.to_owned(),
                        target: b.to_owned(),
                        from: place(a),
                        to: place(b),
                        count: edge.count(),
                        median,
                        color_param,
                        width: options.width_law.width(edge.count()),
                    }
                })
                .collect();
            Ok(PanelSpec {
                index: l + 1,
                interval: (lo, hi),
                slice,
                glyph,
                nodes,
                edges,
            })
        })
        .collect()
}

fn glyph(slice: &SliceGraph, extent: f64, bin_width: Option<f64>) -> Glyph {
    let (lo, hi) = slice.interval;
    let duration = hi - lo;
    let duration_fraction = if extent > 0.0 { duration / extent } else { 1.0 };
    let (bins, bin_width) = match bin_width {
        _ if duration <= 0.0 => (1, 0.0),
        Some(w) => (((duration / w).ceil() as usize).clamp(1, MAX_GLYPH_BINS), w),
        None => (GLYPH_BINS, duration / GLYPH_BINS as f64),
    };
    let mut freq_series = vec![0; bins];
    for t in slice.edges.iter().flat_map(|e| &e.timestamps) {
        let i = if bin_width > 0.0 {
            ((t - lo) / bin_width).floor().max(0.0) as usize
        } else {
            0
        };
        freq_series[i.min(bins - 1)] += 1;
    }
    Glyph {
        duration_fraction,
        bin_width,
        freq_series,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    pub columns: usize,
    pub rows: usize,
    pub width: f64,
    pub height: f64,
    pub color_start: Rgb,
    pub color_end: Rgb,
    pub glyph_scale: GlyphScale,
}

impl RenderOptions {
    /// A near-square grid just large enough for `panels` panels.
    pub fn grid_for(panels: usize) -> (usize, usize) {
        let panels = panels.max(1);
        let columns = (panels as f64).sqrt().ceil() as usize;
        (columns, panels.div_ceil(columns))
    }
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            columns: 4,
            rows: 3,
            width: 1600.0,
            height: 1200.0,
            color_start: Rgb::TEAL,
            color_end: Rgb::BROWN,
            glyph_scale: GlyphScale::Global,
        }
    }
}

/// Panel geometry in pixels, relative to the panel's top-left corner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelGeometry {
    pub cell_width: f64,
    pub cell_height: f64,
    pub pad: f64,
    pub glyph_width: f64,
    pub bar_height: f64,
    pub chart_height: f64,
}

impl PanelGeometry {
    pub fn new(options: &RenderOptions) -> Self {
        let cell_width = options.width / options.columns as f64;
        let cell_height = options.height / options.rows as f64;
        let pad = (cell_width.min(cell_height) * 0.03).max(2.0);
        Self {
            cell_width,
            cell_height,
            pad,
            glyph_width: cell_width * 0.35,
            bar_height: cell_height * 0.04,
            chart_height: cell_height * 0.1,
        }
    }

    fn graph_box(&self) -> (f64, f64, f64, f64) {
        let top = self.pad * 2.0 + self.bar_height + self.chart_height;
        (
            self.pad,
            top,
            self.cell_width - 2.0 * self.pad,
            self.cell_height - top - self.pad,
        )
    }

    /// Pixel position of unit-square coordinates inside the panel.
    pub fn place(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let (gx, gy, gw, gh) = self.graph_box();
        (gx + x * gw, gy + y * gh)
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Writes the panels as an SVG 1.1 document, row by row.
///
/// Coordinates are printed with three decimals so the output is
/// byte-identical for identical inputs.
pub fn render_svg(panels: &[PanelSpec], options: &RenderOptions) -> Result<String> {
    if !(options.width > 0.0 && options.height > 0.0) || !options.width.is_finite() || !options.height.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "canvas must have positive size, got {}x{}",
            options.width, options.height
        )));
    }
    if options.columns == 0 || options.rows == 0 {
        return Err(Error::InvalidArgument("grid must have at least one cell".into()));
    }
    if options.columns * options.rows < panels.len() {
        return Err(Error::InvalidArgument(format!(
            "a {}x{} grid cannot hold {} panels",
            options.columns,
            options.rows,
            panels.len()
        )));
    }
    let geo = PanelGeometry::new(options);
    let global_max = panels
        .iter()
        .flat_map(|p| p.glyph.freq_series.iter().copied())
        .max()
        .unwrap_or(0);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.3}" height="{h:.3}" viewBox="0 0 {w:.3} {h:.3}" font-family="sans-serif">"#,
        w = options.width,
        h = options.height
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (slot, panel) in panels.iter().enumerate() {
        let (col, row) = (slot % options.columns, slot / options.columns);
        let y_max = match options.glyph_scale {
            GlyphScale::Global => global_max,
            GlyphScale::PerPanel => panel.glyph.freq_series.iter().copied().max().unwrap_or(0),
        };
        write_panel(&mut svg, panel, &geo, options, col, row, y_max);
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn write_panel(
    svg: &mut String,
    panel: &PanelSpec,
    geo: &PanelGeometry,
    options: &RenderOptions,
    col: usize,
    row: usize,
    y_max: usize,
) {
    let pad = geo.pad;
    let _ = writeln!(
        svg,
        r#"<g class="panel" id="panel-{}" transform="translate({:.3},{:.3})" data-t-lo="{}" data-t-hi="{}" data-events="{}">"#,
        panel.index,
        col as f64 * geo.cell_width,
        row as f64 * geo.cell_height,
        panel.interval.0,
        panel.interval.1,
        panel.slice.event_count()
    );
    let _ = writeln!(
        svg,
        r##"<rect class="frame" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="#bbbbbb"/>"##,
        pad / 2.0,
        pad / 2.0,
        geo.cell_width - pad,
        geo.cell_height - pad
    );
    let _ = writeln!(
        svg,
        r##"<text class="title" x="{:.3}" y="{:.3}" font-size="{:.3}" text-anchor="end" fill="#444444">{}</text>"##,
        geo.cell_width - pad,
        pad + geo.bar_height,
        geo.bar_height.max(8.0),
        panel.index
    );

    // glyph: time-range bar over a frequency line chart
    let _ = writeln!(svg, r#"<g class="glyph">"#);
    let _ = writeln!(
        svg,
        r##"<rect class="glyph-track" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="#eeeeee"/>"##,
        pad,
        pad,
        geo.glyph_width,
        geo.bar_height
    );
    let _ = writeln!(
        svg,
        r##"<rect class="glyph-bar" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="#555555" data-fraction="{}"/>"##,
        pad,
        pad,
        panel.glyph.duration_fraction * geo.glyph_width,
        geo.bar_height,
        panel.glyph.duration_fraction
    );
    let series = &panel.glyph.freq_series;
    let base = pad + geo.bar_height + geo.chart_height;
    let step = if series.len() > 1 {
        geo.glyph_width / (series.len() - 1) as f64
    } else {
        0.0
    };
    let points: Vec<String> = series
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let h = if y_max > 0 {
                c as f64 / y_max as f64 * geo.chart_height
            } else {
                0.0
            };
            format!("{:.3},{:.3}", pad + i as f64 * step, base - h)
        })
        .collect();
    let _ = writeln!(
        svg,
        r##"<polyline class="glyph-line" points="{}" fill="none" stroke="#333333" stroke-width="1"/>"##,
        points.join(" ")
    );
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r#"<g class="edges" stroke-linecap="round">"#);
    for edge in &panel.edges {
        let color = options.color_start.lerp(options.color_end, edge.color_param);
        let (x1, y1) = geo.place(edge.from);
        let (x2, y2) = geo.place(edge.to);
        if edge.source == edge.target {
            let r = geo.cell_width.min(geo.cell_height) * 0.03;
            let _ = writeln!(
                svg,
                r#"<circle class="edge loop" cx="{:.3}" cy="{:.3}" r="{:.3}" fill="none" stroke="{}" stroke-width="{:.3}" data-count="{}"/>"#,
                x1,
                y1 - r,
                r,
                color,
                edge.width,
                edge.count
            );
        } else {
            let _ = writeln!(
                svg,
                r#"<line class="edge" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{}" stroke-width="{:.3}" data-count="{}"/>"#,
                x1, y1, x2, y2, color, edge.width, edge.count
            );
        }
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r#"<g class="nodes">"#);
    let radius = (geo.cell_width.min(geo.cell_height) * 0.015).max(2.0);
    for node in &panel.nodes {
        let (x, y) = geo.place(node.position);
        let label = escape(&node.label);
        let _ = writeln!(
            svg,
            r##"<circle class="node" cx="{:.3}" cy="{:.3}" r="{:.3}" fill="#ffffff" stroke="#222222" data-label="{}"/>"##,
            x, y, radius, label
        );
        let _ = writeln!(
            svg,
            r##"<text class="label" x="{:.3}" y="{:.3}" font-size="{:.3}" fill="#222222">{}</text>"##,
            x + radius + 1.0,
            y - radius,
            (radius * 2.5).max(8.0),
            label
        );
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(svg, "</g>");
}
