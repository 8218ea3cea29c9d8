//! Core algorithms for document template matching and fraud screening.
//!
//! This crate is the pure, IO-free layer: raster operations, normalized
//! cross-correlation matching, structural similarity (SSIM) scoring, a
//! deterministic glyph-based text recognizer, and the verdict pipeline that
//! combines them. Every operation is deterministic — the same input bytes
//! produce the same output bytes on every platform — and all types are
//! immutable once constructed, so everything is safe to share across threads.
//!
//! The crate is `no_std`-compatible (with `alloc`); float math goes through
//! [`libm`] so results do not depend on the platform libm. PNG IO, file
//! formats, the external OCR adapter, and the command line live in the
//! companion `veridoc` crate.
#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod canvas;
pub mod config;
pub mod fraud;
pub mod geom;
pub mod imgproc;
pub mod matching;
mod math;
pub mod ocr;
pub mod ssim;
pub mod templates;

pub use config::{MatchMode, PipelineConfig};
pub use fraud::{verify, VerificationReport, Verdict};
pub use geom::Rect;
pub use imgproc::{BinaryImage, GrayImage, RasterImage};
