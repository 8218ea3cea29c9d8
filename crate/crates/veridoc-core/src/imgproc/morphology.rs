//! Set morphology on the 255-valued foreground.
//!
//! Border rule: pixels outside the image are background. Dilation therefore
//! never picks anything up from beyond the edge, while erosion skips
//! out-of-bounds cells of the element (they cannot hold background that only
//! exists inside the frame). This pairing keeps the duality
//! `dilate(img, se) == invert(erode(invert(img), se.reflected()))` exact.

use super::{BinaryImage, StructuringElement};

/// Morphological operation selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphOp {
    Erode,
    Dilate,
    /// Erode then dilate.
    Open,
    /// Dilate then erode.
    Close,
}

pub fn morphology(img: &BinaryImage, op: MorphOp, se: &StructuringElement) -> BinaryImage {
    match op {
        MorphOp::Erode => erode(img, se),
        MorphOp::Dilate => dilate(img, se),
        MorphOp::Open => dilate(&erode(img, se), se),
        MorphOp::Close => erode(&dilate(img, se), se),
    }
}

fn erode(img: &BinaryImage, se: &StructuringElement) -> BinaryImage {
    let offsets = se.offsets();
    let (w, h) = (img.width() as i64, img.height() as i64);
    BinaryImage::from_fn(img.width(), img.height(), |x, y| {
        offsets.iter().all(|&(dx, dy)| {
            let sx = x as i64 + dx;
            let sy = y as i64 + dy;
            if sx < 0 || sy < 0 || sx >= w || sy >= h {
                true
            } else {
                img.is_foreground(sx as u32, sy as u32)
            }
        })
    })
}

fn dilate(img: &BinaryImage, se: &StructuringElement) -> BinaryImage {
    // Dilation probes through the reflected element: out(x) is set when any
    // set cell d satisfies img(x - d).
    let offsets = se.offsets();
    let (w, h) = (img.width() as i64, img.height() as i64);
    BinaryImage::from_fn(img.width(), img.height(), |x, y| {
        offsets.iter().any(|&(dx, dy)| {
            let sx = x as i64 - dx;
            let sy = y as i64 - dy;
            sx >= 0 && sy >= 0 && sx < w && sy < h && img.is_foreground(sx as u32, sy as u32)
        })
    })
}
