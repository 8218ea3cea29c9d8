//! Text localization, the OCR engine interface, and text normalization.
//!
//! Recognition itself is pluggable: the built-in fixture engine
//! ([`fixture::FixtureOcr`]) reads text rendered from the bundled glyph
//! atlas and is bit-deterministic, which lets the fraud logic be tested
//! without an external OCR dependency. Adapters for real engines live in
//! the companion crate.

pub mod atlas;
pub mod fixture;

use alloc::string::String;
use alloc::vec::Vec;

use crate::geom::Rect;
use crate::imgproc::GrayImage;
use crate::matching::MatchResult;
use crate::math;
use crate::templates::TemplateRecord;

/// A named rectangle expected to hold text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextRegion {
    pub field_name: String,
    pub rect: Rect,
}

/// Recognized text for one region with the engine's confidence in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct OcrSegment {
    pub region: TextRegion,
    pub text: String,
    pub confidence: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OcrError {
    #[error("ocr engine failure: {0}")]
    Engine(String),
}

/// A text recognizer. Implementations must keep confidences in [0, 1].
pub trait OcrEngine {
    fn extract(
        &self,
        image: &GrayImage,
        regions: &[TextRegion],
    ) -> Result<Vec<OcrSegment>, OcrError>;

    /// Whether repeated calls with the same inputs return identical bytes.
    /// Adapters over external processes must leave this false.
    fn deterministic(&self) -> bool {
        false
    }
}

/// Map a template's annotated regions into sample coordinates using the
/// scale between the two images plus the match offset, clipped to the
/// sample. An unannotated template falls back to one whole-page region.
pub fn localize_text_regions(
    sample: &GrayImage,
    template: &TemplateRecord,
    m: &MatchResult,
) -> Vec<TextRegion> {
    if template.text_regions().is_empty() {
        return alloc::vec![TextRegion {
            field_name: String::from("page"),
            rect: Rect::new(0, 0, sample.width(), sample.height()),
        }];
    }
    let sx = sample.width() as f64 / template.image().width() as f64;
    let sy = sample.height() as f64 / template.image().height() as f64;
    template
        .text_regions()
        .iter()
        .filter_map(|r| {
            let rect = Rect::new(
                math::round(r.rect.x as f64 * sx) as u32 + m.offset.0,
                math::round(r.rect.y as f64 * sy) as u32 + m.offset.1,
                math::round(r.rect.width as f64 * sx) as u32,
                math::round(r.rect.height as f64 * sy) as u32,
            )
            .clipped_to(sample.width(), sample.height());
            (!rect.is_empty()).then(|| TextRegion {
                field_name: r.field_name.clone(),
                rect,
            })
        })
        .collect()
}

/// Concatenate segment texts in region order with single spaces, lowercase,
/// and collapse whitespace runs.
pub fn normalize_text(segments: &[OcrSegment]) -> String {
    let mut out = String::new();
    for segment in segments {
        for word in segment.text.split_whitespace() {
            if !out.is_empty() {
                out.push(' ');
            }
            // char-wise lowercase keeps this alloc-only
            for ch in word.chars() {
                for lc in ch.to_lowercase() {
                    out.push(lc);
                }
            }
        }
    }
    out
}
