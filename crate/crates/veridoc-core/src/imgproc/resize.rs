//! Bilinear resizing with half-pixel-centered source mapping.

use alloc::vec::Vec;

use super::{GrayImage, ImageError, RasterImage};
use crate::math;

struct Axis {
    lo: usize,
    hi: usize,
    frac: f64,
}

/// Source coordinate for destination index `d`: `(d + 0.5) * scale - 0.5`,
/// clamped so border taps replicate the edge.
fn axis_taps(src_len: u32, dst_len: u32) -> Vec<Axis> {
    let scale = src_len as f64 / dst_len as f64;
    (0..dst_len)
        .map(|d| {
            let src = (d as f64 + 0.5) * scale - 0.5;
            let floor = math::floor(src);
            let frac = src - floor;
            let lo = (floor as i64).clamp(0, src_len as i64 - 1) as usize;
            let hi = (floor as i64 + 1).clamp(0, src_len as i64 - 1) as usize;
            Axis { lo, hi, frac }
        })
        .collect()
}

/// Bilinear resize of a grayscale image.
pub fn resize_bilinear(img: &GrayImage, new_w: u32, new_h: u32) -> Result<GrayImage, ImageError> {
    if new_w == 0 || new_h == 0 {
        return Err(ImageError::EmptyDimensions {
            width: new_w,
            height: new_h,
        });
    }
    if new_w == img.width() && new_h == img.height() {
        return Ok(img.clone());
    }
    let xs = axis_taps(img.width(), new_w);
    let ys = axis_taps(img.height(), new_h);
    let w = img.width() as usize;
    let src = img.pixels();
    let mut out = Vec::with_capacity(new_w as usize * new_h as usize);
    for ay in &ys {
        for ax in &xs {
            let p00 = src[ay.lo * w + ax.lo] as f64;
            let p10 = src[ay.lo * w + ax.hi] as f64;
            let p01 = src[ay.hi * w + ax.lo] as f64;
            let p11 = src[ay.hi * w + ax.hi] as f64;
            let top = p00 + (p10 - p00) * ax.frac;
            let bottom = p01 + (p11 - p01) * ax.frac;
            out.push(math::round_to_u8(top + (bottom - top) * ay.frac));
        }
    }
    GrayImage::from_raw(new_w, new_h, out)
}

/// Bilinear resize of an RGB image, interpolating each channel.
pub fn resize_bilinear_rgb(
    img: &RasterImage,
    new_w: u32,
    new_h: u32,
) -> Result<RasterImage, ImageError> {
    if new_w == 0 || new_h == 0 {
        return Err(ImageError::EmptyDimensions {
            width: new_w,
            height: new_h,
        });
    }
    if new_w == img.width() && new_h == img.height() {
        return Ok(img.clone());
    }
    let xs = axis_taps(img.width(), new_w);
    let ys = axis_taps(img.height(), new_h);
    let w = img.width() as usize;
    let src = img.pixels();
    let mut out = Vec::with_capacity(new_w as usize * new_h as usize * 3);
    for ay in &ys {
        for ax in &xs {
            for ch in 0..3 {
                let p00 = src[(ay.lo * w + ax.lo) * 3 + ch] as f64;
                let p10 = src[(ay.lo * w + ax.hi) * 3 + ch] as f64;
                let p01 = src[(ay.hi * w + ax.lo) * 3 + ch] as f64;
                let p11 = src[(ay.hi * w + ax.hi) * 3 + ch] as f64;
                let top = p00 + (p10 - p00) * ax.frac;
                let bottom = p01 + (p11 - p01) * ax.frac;
                out.push(math::round_to_u8(top + (bottom - top) * ay.frac));
            }
        }
    }
    RasterImage::from_raw(new_w, new_h, out)
}
