//! Adapter that shells out to a user-supplied OCR command.
//!
//! For each region the adapter writes the region crop to a temporary PNG
//! and invokes the configured command with that path appended. The command
//! prints one line per recognized segment:
//!
//! ```text
//! box_x box_y box_w box_h confidence text...
//! ```
//!
//! The first five whitespace-separated fields are the text box in
//! region-local pixel coordinates and the confidence in [0, 1]; the rest of
//! the line, verbatim, is the text. Boxes are translated back into sample
//! coordinates. Blank lines are ignored.

use std::process::Command;

use veridoc_core::geom::Rect;
use veridoc_core::imgproc::GrayImage;
use veridoc_core::ocr::{OcrEngine, OcrError, OcrSegment, TextRegion};

use crate::io::write_png_gray;

/// One in-flight extraction per instance; callers wanting parallelism
/// create one adapter per worker.
#[derive(Debug, Clone)]
pub struct ExternalOcr {
    program: String,
    args: Vec<String>,
}

impl ExternalOcr {
    /// Parse a command line such as `"my-ocr --fast"`.
    pub fn from_command_line(command: &str) -> Result<Self, OcrError> {
        let mut parts = command.split_whitespace();
        let program = parts
            .next()
            .ok_or_else(|| OcrError::Engine("empty external ocr command".into()))?
            .to_string();
        Ok(ExternalOcr {
            program,
            args: parts.map(String::from).collect(),
        })
    }
}

impl OcrEngine for ExternalOcr {
    fn extract(
        &self,
        image: &GrayImage,
        regions: &[TextRegion],
    ) -> Result<Vec<OcrSegment>, OcrError> {
        let dir = tempfile::tempdir()
            .map_err(|e| OcrError::Engine(format!("cannot create temp dir: {e}")))?;
        let mut segments = Vec::new();
        for (i, region) in regions.iter().enumerate() {
            let rect = region.rect.clipped_to(image.width(), image.height());
            if rect.is_empty() {
                continue;
            }
            let crop = image
                .crop(rect)
                .map_err(|e| OcrError::Engine(format!("crop failed: {e}")))?;
            let path = dir.path().join(format!("region-{i}.png"));
            write_png_gray(&path, &crop)
                .map_err(|e| OcrError::Engine(format!("cannot write region image: {e}")))?;

            let output = Command::new(&self.program)
                .args(&self.args)
                .arg(&path)
                .output()
                .map_err(|e| OcrError::Engine(format!("cannot run {}: {e}", self.program)))?;
            if !output.status.success() {
                return Err(OcrError::Engine(format!(
                    "{} exited with {}",
                    self.program, output.status
                )));
            }
            let stdout = String::from_utf8_lossy(&output.stdout);
            for line in stdout.lines() {
                if line.trim().is_empty() {
                    continue;
                }
                segments.push(parse_segment_line(line, region, rect, image)?);
            }
        }
        Ok(segments)
    }
}

fn parse_segment_line(
    line: &str,
    region: &TextRegion,
    region_rect: Rect,
    image: &GrayImage,
) -> Result<OcrSegment, OcrError> {
    let bad = |what: &str| OcrError::Engine(format!("malformed segment line ({what}): {line:?}"));

    // five whitespace-separated header fields, then the raw remainder
    let mut rest = line.trim_start();
    let mut header = [0f64; 5];
    for slot in &mut header {
        let end = rest
            .find(char::is_whitespace)
            .ok_or_else(|| bad("missing fields"))?;
        *slot = rest[..end].parse().map_err(|_| bad("non-numeric field"))?;
        rest = rest[end..].trim_start();
    }
    let [bx, by, bw, bh, confidence] = header;
    if !(0.0..=1.0).contains(&confidence) {
        return Err(bad("confidence out of range"));
    }
    if bx < 0.0 || by < 0.0 || bw < 0.0 || bh < 0.0 {
        return Err(bad("negative box"));
    }
    let rect = Rect::new(
        region_rect.x + bx as u32,
        region_rect.y + by as u32,
        bw as u32,
        bh as u32,
    )
    .clipped_to(image.width(), image.height());
    Ok(OcrSegment {
        region: TextRegion {
            field_name: region.field_name.clone(),
            rect,
        },
        text: rest.to_string(),
        confidence,
    })
}
