use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("empty input: the stream contains no edge records")]
    EmptyInput,

    #[error("resolution undefined: all events share one timestamp; supply a bin width explicitly")]
    ResolutionUndefined,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate extent: T = 0 admits only a single slice, got k = {k}")]
    DegenerateExtent { k: usize },

    #[error("insufficient events: {events} events cannot fill {k} slices")]
    InsufficientEvents { events: usize, k: usize },

    #[error("resolution too coarse for {k} slices: only {occupied} occupied bins (max feasible k = {occupied})")]
    ResolutionTooCoarse { k: usize, occupied: usize },

    #[error("no events: the histogram is empty")]
    NoEvents,

    #[error("document error: {0}")]
    Document(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Document(e.to_string())
    }
}
