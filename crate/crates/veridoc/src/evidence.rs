//! Rendering of tamper evidence: the dissimilarity image and a sample
//! overlay with boxes drawn in single-pixel red outlines.

use std::path::{Path, PathBuf};

use veridoc_core::geom::Rect;
use veridoc_core::imgproc::{GrayImage, RasterImage};
use veridoc_core::ssim::DifferenceEvidence;

use crate::io::{write_png_gray, write_png_rgb};
use crate::Result;

const BOX_COLOR: [u8; 3] = [220, 30, 30];

/// Gray sample promoted to RGB with evidence boxes outlined.
pub fn render_overlay(sample: &GrayImage, boxes: &[Rect]) -> RasterImage {
    let mut pixels = Vec::with_capacity(sample.pixels().len() * 3);
    for &v in sample.pixels() {
        pixels.extend_from_slice(&[v, v, v]);
    }
    let width = sample.width() as usize;
    let mut paint = |x: u32, y: u32| {
        if x < sample.width() && y < sample.height() {
            let i = (y as usize * width + x as usize) * 3;
            pixels[i..i + 3].copy_from_slice(&BOX_COLOR);
        }
    };
    for b in boxes {
        if b.is_empty() {
            continue;
        }
        for x in b.x..b.right() {
            paint(x, b.y);
            paint(x, b.bottom() - 1);
        }
        for y in b.y..b.bottom() {
            paint(b.x, y);
            paint(b.right() - 1, y);
        }
    }
    RasterImage::from_raw(sample.width(), sample.height(), pixels)
        .expect("buffer built to match dimensions")
}

/// Write `<stem>-diff.png` and `<stem>-overlay.png` into `dir`, returning
/// both paths.
pub fn write_evidence(
    dir: &Path,
    stem: &str,
    evidence: &DifferenceEvidence,
    sample: &GrayImage,
) -> Result<(PathBuf, PathBuf)> {
    let diff_path = dir.join(format!("{stem}-diff.png"));
    let overlay_path = dir.join(format!("{stem}-overlay.png"));
    write_png_gray(&diff_path, &evidence.diff_image)?;
    write_png_rgb(&overlay_path, &render_overlay(sample, &evidence.boxes))?;
    Ok((diff_path, overlay_path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlay_paints_single_pixel_outlines() {
        let sample = GrayImage::constant(20, 20, 128);
        let overlay = render_overlay(&sample, &[Rect::new(5, 5, 6, 4)]);
        assert_eq!(overlay.rgb(5, 5), BOX_COLOR);
        assert_eq!(overlay.rgb(10, 8), BOX_COLOR);
        assert_eq!(overlay.rgb(6, 6), [128, 128, 128]); // interior untouched
        assert_eq!(overlay.rgb(0, 0), [128, 128, 128]);
    }

    #[test]
    fn boxes_touching_the_border_stay_in_bounds() {
        let sample = GrayImage::constant(8, 8, 0);
        let overlay = render_overlay(&sample, &[Rect::new(6, 6, 5, 5)]);
        assert_eq!(overlay.rgb(7, 6), BOX_COLOR);
    }

    #[test]
    fn write_evidence_produces_both_files() {
        let dir = tempfile::tempdir().unwrap();
        let sample = GrayImage::constant(16, 16, 200);
        let evidence = DifferenceEvidence {
            diff_image: GrayImage::constant(16, 16, 0),
            boxes: vec![Rect::new(2, 2, 4, 4)],
        };
        let (d, o) = write_evidence(dir.path(), "sample", &evidence, &sample).unwrap();
        assert!(d.is_file());
        assert!(o.is_file());
    }
}
