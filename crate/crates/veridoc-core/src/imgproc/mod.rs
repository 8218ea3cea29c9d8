//! Raster operations underpinning every later stage: color conversion,
//! smoothing, thresholding, morphology, edge detection, contour extraction,
//! and resizing.
//!
//! Conventions used throughout:
//! - luminance follows ITU-R BT.601 (0.299 / 0.587 / 0.114);
//! - 255 is foreground in binary images;
//! - neighborhood operations clamp coordinates at the image edge
//!   (replicated border), except where a function documents otherwise;
//! - integers are produced by rounding half away from zero.

mod contours;
mod filter;
mod morphology;
mod resize;

pub use contours::find_contours;
pub use filter::{adaptive_threshold, gaussian_blur, sobel_magnitude};
pub(crate) use filter::sobel_gradients;
pub use morphology::{morphology, MorphOp};
pub use resize::{resize_bilinear, resize_bilinear_rgb};

use alloc::vec;
use alloc::vec::Vec;

use crate::geom::Rect;
use crate::math;

/// Errors raised by raster operations and image constructors.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ImageError {
    #[error("image dimensions must be at least 1x1, got {width}x{height}")]
    EmptyDimensions { width: u32, height: u32 },
    #[error("pixel buffer holds {got} bytes but {width}x{height} needs {expected}")]
    BufferSize {
        width: u32,
        height: u32,
        expected: usize,
        got: usize,
    },
    #[error("binary images may only contain 0 and 255, found {0}")]
    NotBinary(u8),
    #[error("{what} must be odd, got {got}")]
    EvenParameter { what: &'static str, got: u32 },
    #[error("{what} must be at least {min}, got {got}")]
    TooSmall { what: &'static str, min: u32, got: u32 },
    #[error("sigma must be positive")]
    NonPositiveSigma,
    #[error("structuring element must have at least one set cell and a set anchor")]
    EmptyStructuringElement,
    #[error("operation needs an image of at least {min_width}x{min_height}, got {width}x{height}")]
    ImageTooSmall {
        min_width: u32,
        min_height: u32,
        width: u32,
        height: u32,
    },
}

/// Immutable 8-bit RGB image, row-major `[r, g, b]` triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl RasterImage {
    pub fn from_raw(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::EmptyDimensions { width, height });
        }
        let expected = width as usize * height as usize * 3;
        if pixels.len() != expected {
            return Err(ImageError::BufferSize {
                width,
                height,
                expected,
                got: pixels.len(),
            });
        }
        Ok(RasterImage {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> [u8; 3]) -> Self {
        let mut pixels = Vec::with_capacity(width as usize * height as usize * 3);
        for y in 0..height {
            for x in 0..width {
                pixels.extend_from_slice(&f(x, y));
            }
        }
        RasterImage::from_raw(width.max(1), height.max(1), pixels)
            .unwrap_or_else(|_| RasterImage::constant(1, 1, [0, 0, 0]))
    }

    pub fn constant(width: u32, height: u32, rgb: [u8; 3]) -> Self {
        let mut pixels = Vec::with_capacity(width as usize * height as usize * 3);
        for _ in 0..width as usize * height as usize {
            pixels.extend_from_slice(&rgb);
        }
        RasterImage {
            width: width.max(1),
            height: height.max(1),
            pixels,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn rgb(&self, x: u32, y: u32) -> [u8; 3] {
        debug_assert!(x < self.width && y < self.height);
        let i = (y as usize * self.width as usize + x as usize) * 3;
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }
}

/// Immutable 8-bit luminance image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn from_raw(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::EmptyDimensions { width, height });
        }
        let expected = width as usize * height as usize;
        if pixels.len() != expected {
            return Err(ImageError::BufferSize {
                width,
                height,
                expected,
                got: pixels.len(),
            });
        }
        Ok(GrayImage {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> u8) -> Self {
        let mut pixels = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        GrayImage {
            width: width.max(1),
            height: height.max(1),
            pixels,
        }
    }

    pub fn constant(width: u32, height: u32, value: u8) -> Self {
        GrayImage {
            width: width.max(1),
            height: height.max(1),
            pixels: vec![value; width.max(1) as usize * height.max(1) as usize],
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: u32, y: u32) -> u8 {
        debug_assert!(x < self.width && y < self.height);
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    /// Sample with replicated-border semantics.
    pub fn get_clamped(&self, x: i64, y: i64) -> u8 {
        let cx = x.clamp(0, self.width as i64 - 1) as u32;
        let cy = y.clamp(0, self.height as i64 - 1) as u32;
        self.get(cx, cy)
    }

    /// Copy out a sub-rectangle. The rect must lie inside the image.
    pub fn crop(&self, rect: Rect) -> Result<GrayImage, ImageError> {
        if rect.is_empty() {
            return Err(ImageError::EmptyDimensions {
                width: rect.width,
                height: rect.height,
            });
        }
        if !rect.fits_within(self.width, self.height) {
            return Err(ImageError::ImageTooSmall {
                min_width: rect.right(),
                min_height: rect.bottom(),
                width: self.width,
                height: self.height,
            });
        }
        Ok(GrayImage::from_fn(rect.width, rect.height, |x, y| {
            self.get(rect.x + x, rect.y + y)
        }))
    }

    pub fn min_max(&self) -> (u8, u8) {
        let mut lo = u8::MAX;
        let mut hi = u8::MIN;
        for &p in &self.pixels {
            lo = lo.min(p);
            hi = hi.max(p);
        }
        (lo, hi)
    }
}

/// Binary image: same layout as [`GrayImage`] with values restricted to
/// {0, 255}. 255 is foreground.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl BinaryImage {
    pub fn from_raw(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::EmptyDimensions { width, height });
        }
        let expected = width as usize * height as usize;
        if pixels.len() != expected {
            return Err(ImageError::BufferSize {
                width,
                height,
                expected,
                got: pixels.len(),
            });
        }
        if let Some(&bad) = pixels.iter().find(|&&p| p != 0 && p != 255) {
            return Err(ImageError::NotBinary(bad));
        }
        Ok(BinaryImage {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> bool) -> Self {
        let mut pixels = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                pixels.push(if f(x, y) { 255 } else { 0 });
            }
        }
        BinaryImage {
            width: width.max(1),
            height: height.max(1),
            pixels,
        }
    }

    /// Threshold a grayscale image: foreground where `value > threshold`.
    pub fn from_gray_threshold(img: &GrayImage, threshold: u8) -> Self {
        BinaryImage::from_fn(img.width(), img.height(), |x, y| img.get(x, y) > threshold)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn is_foreground(&self, x: u32, y: u32) -> bool {
        debug_assert!(x < self.width && y < self.height);
        self.pixels[y as usize * self.width as usize + x as usize] == 255
    }

    /// Reinterpret as a grayscale image (values stay 0/255).
    pub fn to_gray(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.clone(),
        }
    }

    pub fn invert(&self) -> BinaryImage {
        BinaryImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|&p| 255 - p).collect(),
        }
    }
}

/// Flat structuring element with odd dimensions and a centered anchor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuringElement {
    width: u32,
    height: u32,
    mask: Vec<bool>,
}

impl StructuringElement {
    /// Fully set rectangle (the usual box element).
    pub fn rect(width: u32, height: u32) -> Result<Self, ImageError> {
        StructuringElement::from_mask(width, height, vec![true; (width * height) as usize])
    }

    pub fn square(side: u32) -> Result<Self, ImageError> {
        StructuringElement::rect(side, side)
    }

    pub fn from_mask(width: u32, height: u32, mask: Vec<bool>) -> Result<Self, ImageError> {
        if width.is_multiple_of(2) {
            return Err(ImageError::EvenParameter {
                what: "structuring element width",
                got: width,
            });
        }
        if height.is_multiple_of(2) {
            return Err(ImageError::EvenParameter {
                what: "structuring element height",
                got: height,
            });
        }
        if mask.len() != (width * height) as usize {
            return Err(ImageError::BufferSize {
                width,
                height,
                expected: (width * height) as usize,
                got: mask.len(),
            });
        }
        let anchor = (height / 2) as usize * width as usize + (width / 2) as usize;
        if !mask.iter().any(|&m| m) || !mask[anchor] {
            return Err(ImageError::EmptyStructuringElement);
        }
        Ok(StructuringElement {
            width,
            height,
            mask,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn is_set(&self, x: u32, y: u32) -> bool {
        self.mask[y as usize * self.width as usize + x as usize]
    }

    /// Point reflection through the anchor.
    pub fn reflected(&self) -> StructuringElement {
        let mut mask = self.mask.clone();
        mask.reverse();
        StructuringElement {
            width: self.width,
            height: self.height,
            mask,
        }
    }

    /// Anchor-relative offsets of all set cells.
    pub(crate) fn offsets(&self) -> Vec<(i64, i64)> {
        let ax = (self.width / 2) as i64;
        let ay = (self.height / 2) as i64;
        let mut out = Vec::new();
        for y in 0..self.height {
            for x in 0..self.width {
                if self.is_set(x, y) {
                    out.push((x as i64 - ax, y as i64 - ay));
                }
            }
        }
        out
    }
}

/// Outer boundary of one 8-connected foreground component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contour {
    /// Boundary coordinates in border-following order.
    pub points: Vec<(u32, u32)>,
    pub bounding_box: Rect,
    /// Number of foreground pixels in the component.
    pub area: u32,
}

/// BT.601 luma conversion: `Y = round(0.299 R + 0.587 G + 0.114 B)`.
pub fn to_grayscale(img: &RasterImage) -> GrayImage {
    GrayImage::from_fn(img.width(), img.height(), |x, y| {
        let [r, g, b] = img.rgb(x, y);
        math::round_to_u8(0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64)
    })
}
