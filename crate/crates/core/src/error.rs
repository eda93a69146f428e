use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice spec: {0}")]
    InvalidSpec(String),
    #[error("lattice is {lattice_rows}x{lattice_cols} but spec is {spec_rows}x{spec_cols}")]
    DimensionMismatch {
        lattice_rows: usize,
        lattice_cols: usize,
        spec_rows: usize,
        spec_cols: usize,
    },
    #[error("site {site} out of range for a lattice of {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },
    #[error("temperature {0} is outside the allowed range")]
    TemperatureOutOfRange(f64),
    #[error("exact enumeration refused: {sites} spins exceeds the limit of {limit}")]
    TooLarge { sites: usize, limit: usize },
    #[error("malformed lattice snapshot: {0}")]
    Snapshot(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed {0}")]
    Parse(String),
    #[error("image at {path} does not decode to a lattice: {msg}")]
    Decode { path: PathBuf, msg: String },
    #[error("io error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("json error at {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("image encoding error: {0}")]
    Image(#[from] image::ImageError),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
