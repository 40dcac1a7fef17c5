//! The `timeslice` command line: slice, measure and draw event-based dynamic
//! graphs. The binary is a thin wrapper around [`main`].

mod config;
mod error;

use std::fs;
use std::io::{self, BufReader, Read as _, Write as _};
use std::path::{Path, PathBuf};
use std::ffi::OsString;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use timeslice_core::layout::{layout_aggregate, DEFAULT_ITERATIONS, DEFAULT_SEED};
use timeslice_core::metrics::{complexity_report, format_table};
use timeslice_core::render::{build_panels, render_svg, GlyphScale, PanelOptions, RenderOptions, Rgb, WidthLaw};
use timeslice_core::slicing::{
    equal_event_partition, histeq_slicing, uniform_slicing, Method, SlicingDocument, Timeslicing,
};
use timeslice_core::synth::{records_to_edge_list, synth_records, SynthSpec};
use timeslice_core::{event_model, DynamicGraph, Embedding, Error};

use crate::config::{pick, BinWidth, ConfigFile, Pair, RenderSettings, SliceSettings};
pub use crate::error::CliError;
use crate::error::EXIT_CODES;

#[derive(Parser)]
#[command(name = "timeslice", version, about, after_help = EXIT_CODES)]
pub struct Cli {
    /// TOML file with default values for flags; flags given on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a timeslicing and write it as JSON.
    Slice {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        slicing: SliceArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Report per-slice event counts and their spread, for --method or for every method.
    Metrics {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        slicing: SliceArgs,
        /// Emit JSON instead of a table.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Draw one panel per slice as an SVG small multiple.
    Render {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        slicing: SliceArgs,
        /// Use boundaries from a `slice` document instead of computing them.
        #[arg(long, value_name = "FILE")]
        slicing_file: Option<PathBuf>,
        /// Use node positions from a `layout` document.
        #[arg(long, value_name = "FILE")]
        embedding: Option<PathBuf>,
        #[command(flatten)]
        layout: LayoutArgs,
        #[command(flatten)]
        style: StyleArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compute the shared node layout and write it as JSON.
    Layout {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        layout: LayoutArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Generate a synthetic edge list.
    Synth {
        /// Built-in stream: `rugby` (twelve teams over 418 days).
        #[arg(long, conflicts_with = "spec")]
        preset: Option<String>,
        /// TOML file describing extent, background rate and bursts.
        #[arg(long, value_name = "FILE")]
        spec: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Edge list `source,target,timestamp`; `-` reads standard input.
    #[arg(value_name = "INPUT")]
    path: PathBuf,
}

#[derive(Args)]
struct OutArgs {
    /// Output file; standard output when omitted.
    #[arg(long, short, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SliceArgs {
    /// uniform, equal-events or hist-eq [default: hist-eq]
    #[arg(long)]
    method: Option<Method>,
    /// Number of slices k.
    #[arg(long, short = 'k')]
    slices: Option<usize>,
    /// Histogram bin width for hist-eq, or `auto` [default: auto]
    #[arg(long, value_name = "WIDTH|auto")]
    bin_width: Option<BinWidth>,
}

#[derive(Args)]
struct LayoutArgs {
    /// Layout seed [default: 0]
    #[arg(long)]
    seed: Option<u64>,
    /// Layout iterations [default: 500]
    #[arg(long)]
    iterations: Option<usize>,
}

#[derive(Args)]
struct StyleArgs {
    /// Panel grid as COLUMNSxROWS [default: near-square for k]
    #[arg(long, value_name = "CxR")]
    grid: Option<Pair<usize>>,
    /// Canvas size in pixels [default: 1600x1200]
    #[arg(long, value_name = "WxH")]
    canvas: Option<Pair<f64>>,
    /// Draw every node in every panel, not only the active ones.
    #[arg(long)]
    all_nodes: bool,
    /// Edge stroke width law: log2 or linear [default: log2]
    #[arg(long)]
    width_law: Option<WidthLaw>,
    /// Glyph line-chart y-scale: global or per-panel [default: global]
    #[arg(long)]
    glyph_scale: Option<GlyphScale>,
    /// Glyph frequency bin width [default: slice duration / 20]
    #[arg(long, value_name = "WIDTH")]
    glyph_bin_width: Option<f64>,
    /// Colour of edges at the start of a slice, `#rrggbb` or `r,g,b`.
    #[arg(long)]
    color_start: Option<Rgb>,
    /// Colour of edges at the end of a slice.
    #[arg(long)]
    color_end: Option<Rgb>,
}

impl SliceArgs {
    fn settings(self, cfg: &ConfigFile) -> Result<SliceSettings, CliError> {
        let method = pick(self.method, "method", &cfg.method)?.unwrap_or(Method::HistEq);
        let slices = self.slices.or(cfg.slices).ok_or_else(|| {
            CliError::Config("number of slices missing; pass --slices or set `slices` in the config".into())
        })?;
        let bin_width = self.bin_width.or(cfg.bin_width).unwrap_or(BinWidth::Auto);
        Ok(SliceSettings { method, slices, bin_width })
    }
}

impl LayoutArgs {
    fn resolve(&self, cfg: &ConfigFile) -> (u64, usize) {
        (
            self.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED),
            self.iterations.or(cfg.iterations).unwrap_or(DEFAULT_ITERATIONS),
        )
    }
}

fn render_settings(layout: &LayoutArgs, style: StyleArgs, cfg: &ConfigFile) -> Result<RenderSettings, CliError> {
    let (seed, iterations) = layout.resolve(cfg);
    let defaults = RenderOptions::default();
    Ok(RenderSettings {
        seed,
        iterations,
        grid: pick(style.grid, "grid", &cfg.grid)?,
        canvas: pick(style.canvas, "canvas", &cfg.canvas)?.unwrap_or(Pair(defaults.width, defaults.height)),
        all_nodes: style.all_nodes || cfg.all_nodes.unwrap_or(false),
        width_law: pick(style.width_law, "width-law", &cfg.width_law)?.unwrap_or_default(),
        glyph_scale: pick(style.glyph_scale, "glyph-scale", &cfg.glyph_scale)?.unwrap_or_default(),
        glyph_bin_width: style.glyph_bin_width.or(cfg.glyph_bin_width),
        color_start: pick(style.color_start, "color-start", &cfg.color_start)?.unwrap_or(defaults.color_start),
        color_end: pick(style.color_end, "color-end", &cfg.color_end)?.unwrap_or(defaults.color_end),
    })
}

fn read_graph(path: &Path) -> Result<DynamicGraph, CliError> {
    let graph = if path == Path::new("-") {
        event_model::ingest_stream(io::stdin().lock())?
    } else {
        let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
        event_model::ingest_stream(BufReader::new(file))?
    };
    log::info!(
        "{}: {} events, {} nodes, extent {}",
        path.display(),
        graph.len(),
        graph.node_count(),
        graph.extent()
    );
    Ok(graph)
}

fn read_text(path: &Path) -> Result<String, CliError> {
    let mut text = String::new();
    if path == Path::new("-") {
        io::stdin().read_to_string(&mut text).map_err(|e| CliError::io(path, e))?;
    } else {
        text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    }
    Ok(text)
}

fn write_output(out: &OutArgs, text: &str) -> Result<(), CliError> {
    match &out.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

fn compute_slicing(g: &DynamicGraph, method: Method, k: usize, bin_width: BinWidth) -> Result<Timeslicing, CliError> {
    Ok(match method {
        Method::Uniform => uniform_slicing(g, k)?,
        Method::EqualEvents => equal_event_partition(g, k)?,
        Method::HistEq => histeq_slicing(g, k, bin_width.resolve(g)?)?,
    })
}

fn load_slicing(path: &Path, g: &DynamicGraph) -> Result<Timeslicing, CliError> {
    let s = SlicingDocument::from_json(&read_text(path)?)?.timeslicing()?;
    if s.extent() != g.extent() {
        return Err(Error::Document(format!(
            "{}: slicing ends at {} but the input extent is {}",
            path.display(),
            s.extent(),
            g.extent()
        ))
        .into());
    }
    Ok(s)
}

fn load_embedding(path: &Path, g: &DynamicGraph) -> Result<Embedding, CliError> {
    let e = Embedding::from_json(&read_text(path)?)?;
    if !e.covers(g) {
        return Err(Error::Document(format!("{}: embedding lacks positions for some nodes", path.display())).into());
    }
    Ok(e)
}

fn load_synth_spec(preset: Option<&str>, spec: Option<&Path>, seed: Option<u64>) -> Result<SynthSpec, CliError> {
    let mut spec = match (preset, spec) {
        (_, Some(path)) => {
            let text = read_text(path)?;
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        (Some("rugby") | None, None) => SynthSpec::rugby(0),
        (Some(other), None) => {
            return Err(Error::InvalidArgument(format!("unknown preset `{other}`; available: rugby")).into())
        }
    };
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    Ok(spec)
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = ConfigFile::load(cli.config.as_deref())?;
    match cli.command {
        Command::Slice { input, slicing, out } => {
            let settings = slicing.settings(&cfg)?;
            let g = read_graph(&input.path)?;
            let s = compute_slicing(&g, settings.method, settings.slices, settings.bin_width)?;
            write_output(&out, &SlicingDocument::new(&g, &s).to_json())
        }
        Command::Metrics {
            input,
            slicing,
            json,
            out,
        } => {
            // without a method on the command line or in the config, compare all of them
            let methods = match pick(slicing.method, "method", &cfg.method)? {
                Some(m) => vec![m],
                None => Method::ALL.to_vec(),
            };
            let settings = slicing.settings(&cfg)?;
            let g = read_graph(&input.path)?;
            let reports = methods
                .into_iter()
                .map(|m| {
                    let s = compute_slicing(&g, m, settings.slices, settings.bin_width)?;
                    Ok(complexity_report(&g, &s)?)
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let text = if json {
                let mut text = serde_json::to_string_pretty(&reports).map_err(Error::from)?;
                text.push('\n');
                text
            } else {
                format_table(&reports)
            };
            write_output(&out, &text)
        }
        Command::Render {
            input,
            slicing,
            slicing_file,
            embedding,
            layout,
            style,
            out,
        } => {
            let render = render_settings(&layout, style, &cfg)?;
            let g = read_graph(&input.path)?;
            let s = match &slicing_file {
                Some(path) => load_slicing(path, &g)?,
                None => {
                    let settings = slicing.settings(&cfg)?;
                    compute_slicing(&g, settings.method, settings.slices, settings.bin_width)?
                }
            };
            let e = match &embedding {
                Some(path) => load_embedding(path, &g)?,
                None => layout_aggregate(&g, render.seed, render.iterations)?,
            };
            let panels = build_panels(
                &g,
                &s,
                &e,
                &PanelOptions {
                    glyph_bin_width: render.glyph_bin_width,
                    width_law: render.width_law,
                    all_nodes: render.all_nodes,
                },
            )?;
            let (columns, rows) = match render.grid {
                Some(Pair(c, r)) => (c, r),
                None => RenderOptions::grid_for(panels.len()),
            };
            let options = RenderOptions {
                columns,
                rows,
                width: render.canvas.0,
                height: render.canvas.1,
                color_start: render.color_start,
                color_end: render.color_end,
                glyph_scale: render.glyph_scale,
            };
            write_output(&out, &render_svg(&panels, &options)?)
        }
        Command::Layout { input, layout, out } => {
            let (seed, iterations) = layout.resolve(&cfg);
            let g = read_graph(&input.path)?;
            write_output(&out, &layout_aggregate(&g, seed, iterations)?.to_json())
        }
        Command::Synth {
            preset,
            spec,
            seed,
            out,
        } => {
            let spec = load_synth_spec(preset.as_deref(), spec.as_deref(), seed)?;
            let records = synth_records(&spec)?;
            log::info!("generated {} events", records.len());
            write_output(&out, &records_to_edge_list(&records))
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    run(cli)
}

/// Entry point of the binary: parses the process arguments, reports any
/// error on one line of stderr and maps it to the exit status.
pub fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("timeslice: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
