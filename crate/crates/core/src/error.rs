use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no bracket: {0}")]
    NoBracket(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("gluing failure: {0}")]
    Gluing(String),
    #[error("internal convexity failure: {0}")]
    Convexity(String),
    #[error("accuracy target {target:e} not met, achieved estimate {achieved:e}")]
    Accuracy { target: f64, achieved: f64 },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("nesting violation: witness point ({0}, {1}) of the inner body lies outside the outer body")]
    Nesting(f64, f64),
    #[error("cache I/O error at {path}: {source}")]
    Cache {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("malformed data: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
