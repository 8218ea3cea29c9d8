//! Deterministic fixture OCR engine over the built-in glyph atlas.
//!
//! Recognition assumes the fixture rendering contract: glyph cells sit on a
//! fixed pitch grid anchored at the region origin. Each cell is binarized,
//! classified by maximal correlation against the atlas, and scored; cells
//! with almost no ink are spaces, cells no glyph explains become `?`.

use alloc::string::String;
use alloc::vec::Vec;

use super::atlas::{GlyphAtlas, CELL_HEIGHT, CELL_WIDTH};
use super::{OcrEngine, OcrError, OcrSegment, TextRegion};
use crate::imgproc::{adaptive_threshold, GrayImage};
use crate::matching::zncc_score;

/// Cells with fewer ink pixels than this read as spaces; every visible
/// atlas glyph carries at least 6.
const MIN_INK_PIXELS: u32 = 5;
/// Best-correlation floor below which a cell is unrecognized.
const MIN_GLYPH_SCORE: f64 = 0.5;

const BINARIZE_BLOCK: u32 = 15;
const BINARIZE_C: f64 = 7.0;

/// Outcome of classifying one cell.
enum Cell {
    Blank,
    Glyph { ch: char, confidence: f64 },
    Unrecognized,
}

/// The built-in deterministic recognizer.
#[derive(Debug, Clone)]
pub struct FixtureOcr {
    atlas: GlyphAtlas,
}

impl FixtureOcr {
    pub fn new() -> Self {
        FixtureOcr {
            atlas: GlyphAtlas::builtin(),
        }
    }

    pub fn atlas(&self) -> &GlyphAtlas {
        &self.atlas
    }
}

impl Default for FixtureOcr {
    fn default() -> Self {
        FixtureOcr::new()
    }
}

impl OcrEngine for FixtureOcr {
    fn extract(
        &self,
        image: &GrayImage,
        regions: &[TextRegion],
    ) -> Result<Vec<OcrSegment>, OcrError> {
        Ok(fixture_extract(&self.atlas, image, regions))
    }

    fn deterministic(&self) -> bool {
        true
    }
}

/// Read text from each region. Empty or blank regions produce an empty
/// segment with confidence 1.0; otherwise the confidence is the mean of the
/// per-cell scores, correlation mapped into [0, 1] via `(score + 1) / 2`,
/// with spaces at 1.0 and unrecognized cells at 0.0.
pub fn fixture_extract(
    atlas: &GlyphAtlas,
    image: &GrayImage,
    regions: &[TextRegion],
) -> Vec<OcrSegment> {
    regions
        .iter()
        .map(|region| {
            let rect = region.rect.clipped_to(image.width(), image.height());
            if rect.is_empty() {
                return OcrSegment {
                    region: region.clone(),
                    text: String::new(),
                    confidence: 1.0,
                };
            }
            let crop = image.crop(rect).expect("clipped rect fits");
            let (text, confidence) = read_crop(atlas, &crop);
            OcrSegment {
                region: region.clone(),
                text,
                confidence,
            }
        })
        .collect()
}

fn read_crop(atlas: &GlyphAtlas, crop: &GrayImage) -> (String, f64) {
    let bin = adaptive_threshold(crop, BINARIZE_BLOCK, BINARIZE_C)
        .expect("block size is a valid constant");
    // ink = dark = below the local threshold
    let ink = |x: u32, y: u32| !bin.is_foreground(x, y);

    let cols = crop.width().div_ceil(CELL_WIDTH);
    let rows = crop.height().div_ceil(CELL_HEIGHT);

    let mut lines: Vec<Vec<Cell>> = Vec::new();
    for row in 0..rows {
        let mut cells = Vec::new();
        for col in 0..cols {
            cells.push(classify_cell(
                atlas,
                crop,
                &ink,
                col * CELL_WIDTH,
                row * CELL_HEIGHT,
            ));
        }
        // drop trailing blanks; they are padding, not text
        while matches!(cells.last(), Some(Cell::Blank)) {
            cells.pop();
        }
        lines.push(cells);
    }

    let mut text = String::new();
    let mut score_sum = 0.0;
    let mut score_count = 0usize;
    for cells in &lines {
        if cells.is_empty() {
            continue;
        }
        if !text.is_empty() {
            text.push(' ');
        }
        for cell in cells {
            let (ch, score) = match cell {
                Cell::Blank => (' ', 1.0),
                Cell::Glyph { ch, confidence } => (*ch, *confidence),
                Cell::Unrecognized => ('?', 0.0),
            };
            text.push(ch);
            score_sum += score;
            score_count += 1;
        }
    }
    let confidence = if score_count == 0 {
        1.0
    } else {
        score_sum / score_count as f64
    };
    (text, confidence)
}

fn classify_cell(
    atlas: &GlyphAtlas,
    crop: &GrayImage,
    ink: &impl Fn(u32, u32) -> bool,
    ox: u32,
    oy: u32,
) -> Cell {
    // Cell patch as ink 0 / background 255, padded with background where the
    // region is narrower than a full cell.
    let mut ink_count = 0u32;
    let patch = GrayImage::from_fn(CELL_WIDTH, CELL_HEIGHT, |x, y| {
        let px = ox + x;
        let py = oy + y;
        if px < crop.width() && py < crop.height() && ink(px, py) {
            ink_count += 1;
            0
        } else {
            255
        }
    });
    if ink_count < MIN_INK_PIXELS {
        return Cell::Blank;
    }

    let mut best: Option<(char, f64)> = None;
    for glyph in atlas.glyphs() {
        if glyph.ink_count() == 0 {
            continue; // the space glyph is constant; blanks are handled above
        }
        if let Ok(score) = zncc_score(glyph.cell_image(), &patch) {
            if best.is_none_or(|(_, b)| score > b) {
                best = Some((glyph.ch, score));
            }
        }
    }
    match best {
        Some((ch, score)) if score >= MIN_GLYPH_SCORE => Cell::Glyph {
            ch,
            confidence: (score + 1.0) / 2.0,
        },
        _ => Cell::Unrecognized,
    }
}

/// Render a single line of atlas text as ink 0 on background 255, exactly
/// one cell per character. Characters outside the atlas leave a blank cell.
pub fn render_text(atlas: &GlyphAtlas, text: &str) -> GrayImage {
    let chars: Vec<char> = text.chars().collect();
    let width = (chars.len() as u32 * CELL_WIDTH).max(1);
    let mut canvas = crate::canvas::GrayCanvas::new(width, CELL_HEIGHT, 255);
    canvas.draw_text(atlas, text, 0, 0, 0);
    canvas.into_image()
}
