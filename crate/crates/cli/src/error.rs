use std::path::Path;

use timeslice_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("config: {0}")]
    Config(String),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }

    /// Process exit status; listed in `--help`.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 3,
            CliError::Core(e) => match e {
                Error::Malformed { .. } => 4,
                Error::EmptyInput => 5,
                Error::InvalidArgument(_) => 6,
                Error::DegenerateExtent { .. } => 7,
                Error::InsufficientEvents { .. } => 8,
                Error::ResolutionTooCoarse { .. } => 9,
                Error::ResolutionUndefined => 10,
                Error::NoEvents => 11,
                Error::Document(_) => 12,
            },
            CliError::Config(_) => 13,
            CliError::Usage(_) => 2,
        }
    }
}

pub const EXIT_CODES: &str = "\
Exit status:
  0   success
  2   invalid command line
  3   file could not be read or written
  4   malformed edge-list record
  5   empty input
  6   invalid argument
  7   degenerate extent (T = 0 with more than one slice)
  8   fewer events than slices
  9   histogram resolution too coarse for the requested slices
  10  native resolution undefined; pass --bin-width explicitly
  11  histogram has no events
  12  malformed slicing or embedding document
  13  invalid or incomplete configuration";
