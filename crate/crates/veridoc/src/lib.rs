//! Document verification toolkit: the IO, file-format, and command-line
//! layer over [`veridoc_core`].
//!
//! This crate owns everything that touches the filesystem or a process
//! boundary: PNG reading and writing, the template manifest and
//! configuration file formats, report serialization, evidence rendering,
//! and the adapter that shells out to an external OCR command. The
//! algorithms live in `veridoc-core` and are re-exported as [`core`].

pub use veridoc_core as core;

pub mod cli;
pub mod config;
pub mod dataset;
pub mod evidence;
pub mod external_ocr;
pub mod io;
pub mod manifest;
pub mod report;

use std::path::PathBuf;

/// Errors from the IO and format layer.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    PngDecode {
        path: PathBuf,
        source: png::DecodingError,
    },
    #[error("{path}: {source}")]
    PngEncode {
        path: PathBuf,
        source: png::EncodingError,
    },
    #[error("{path}: unsupported PNG format {detail} (8-bit grayscale or RGB required)")]
    UnsupportedPng { path: PathBuf, detail: String },
    #[error("{path}: {source}")]
    MalformedJson {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("manifest template \"{id}\": image file {path} cannot be resolved")]
    MissingTemplateImage { id: String, path: PathBuf },
    #[error(transparent)]
    Template(#[from] veridoc_core::templates::TemplateError),
    #[error(transparent)]
    Dataset(#[from] veridoc_core::fraud::DatasetError),
    #[error(transparent)]
    Image(#[from] veridoc_core::imgproc::ImageError),
    #[error(transparent)]
    Match(#[from] veridoc_core::matching::MatchError),
    #[error(transparent)]
    Ssim(#[from] veridoc_core::ssim::SsimError),
    #[error(transparent)]
    Verify(#[from] veridoc_core::fraud::VerifyError),
    #[error(transparent)]
    Config(#[from] veridoc_core::config::ConfigError),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
