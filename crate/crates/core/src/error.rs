use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the synthesis and evaluation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter out of domain: {name} = {value} ({reason})")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("node index {index} out of range for a grid of {len} nodes")]
    NodeIndex { index: usize, len: usize },

    #[error("no glyph for character {0:?}")]
    MissingGlyph(char),

    #[error("invalid glyph {letter:?}: {reason}")]
    InvalidGlyph { letter: char, reason: String },

    #[error("maturity E = {e} is infeasible for a plan of {n_sl} points (minimum {min:.3})")]
    InfeasibleMaturity { e: f64, n_sl: usize, min: f64 },

    #[error("legibility rule could not be satisfied for glyph {glyph} ({letter:?}) after {retries} retries")]
    Legibility {
        glyph: usize,
        letter: char,
        retries: usize,
    },

    #[error("degenerate segment: zero-length ray at a plan vertex")]
    DegenerateSegment,

    #[error("feature vectors must have length {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("{0}")]
    InvalidInput(String),

    #[error("parse error in {what} at line {line}: {reason}")]
    Parse {
        what: &'static str,
        line: usize,
        reason: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("image error on {path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
