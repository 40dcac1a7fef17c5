//! Run settings merged from command-line flags, an optional TOML config file,
//! and defaults, in that order of precedence.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;
use timeslice_core::render::{GlyphScale, Rgb, WidthLaw};
use timeslice_core::slicing::Method;
use timeslice_core::DynamicGraph;

use crate::error::CliError;

/// Histograms finer than `T / AUTO_BIN_CAP` are not built by `auto`.
pub const AUTO_BIN_CAP: f64 = 10_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum BinWidth {
    Fixed(f64),
    #[serde(deserialize_with = "auto_marker")]
    Auto,
}

fn auto_marker<'de, D: serde::Deserializer<'de>>(d: D) -> Result<(), D::Error> {
    let s = String::deserialize(d)?;
    if s == "auto" {
        Ok(())
    } else {
        Err(serde::de::Error::custom(format!("expected a number or \"auto\", got \"{s}\"")))
    }
}

impl FromStr for BinWidth {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(BinWidth::Auto);
        }
        match s.parse::<f64>() {
            Ok(w) if w > 0.0 && w.is_finite() => Ok(BinWidth::Fixed(w)),
            _ => Err(format!("expected a positive number or `auto`, got `{s}`")),
        }
    }
}

impl BinWidth {
    /// `auto` is the native resolution, raised to at least `T / 10000`.
    pub fn resolve(self, g: &DynamicGraph) -> Result<f64, CliError> {
        match self {
            BinWidth::Fixed(w) => Ok(w),
            BinWidth::Auto => {
                let res = g.native_resolution().map_err(|_| {
                    CliError::Core(timeslice_core::Error::ResolutionUndefined)
                })?;
                Ok(res.max(g.extent() / AUTO_BIN_CAP))
            }
        }
    }
}

/// `COLUMNSxROWS` or `WIDTHxHEIGHT`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pair<T>(pub T, pub T);

impl<T: FromStr> FromStr for Pair<T> {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected `AxB`, got `{s}`"))?;
        let parse = |v: &str| v.trim().parse::<T>().map_err(|_| format!("invalid number `{v}` in `{s}`"));
        Ok(Pair(parse(a)?, parse(b)?))
    }
}

impl<T: fmt::Display> fmt::Display for Pair<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.0, self.1)
    }
}

/// Keys accepted in the config file; each mirrors a flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    pub method: Option<String>,
    pub slices: Option<usize>,
    pub bin_width: Option<BinWidth>,
    pub seed: Option<u64>,
    pub iterations: Option<usize>,
    pub grid: Option<String>,
    pub canvas: Option<String>,
    pub all_nodes: Option<bool>,
    pub width_law: Option<String>,
    pub glyph_scale: Option<String>,
    pub glyph_bin_width: Option<f64>,
    pub color_start: Option<String>,
    pub color_end: Option<String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

fn parse_key<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::Config(format!("config key `{key}`: {e}")))
}

/// `flag`, else the config value parsed, else `None`.
pub fn pick<T: FromStr>(flag: Option<T>, key: &str, config: &Option<String>) -> Result<Option<T>, CliError>
where
    T::Err: fmt::Display,
{
    match (flag, config) {
        (Some(v), _) => Ok(Some(v)),
        (None, Some(s)) => parse_key(key, s).map(Some),
        (None, None) => Ok(None),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SliceSettings {
    pub method: Method,
    pub slices: usize,
    pub bin_width: BinWidth,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderSettings {
    pub seed: u64,
    pub iterations: usize,
    pub grid: Option<Pair<usize>>,
    pub canvas: Pair<f64>,
    pub all_nodes: bool,
    pub width_law: WidthLaw,
    pub glyph_scale: GlyphScale,
    pub glyph_bin_width: Option<f64>,
    pub color_start: Rgb,
    pub color_end: Rgb,
}
