//! Structural similarity scoring and difference-map evidence.
//!
//! The score combines luminance, contrast, and structure:
//!
//! ```text
//! (2 mu_x mu_y + c1)(2 sigma_xy + c2)
//! -----------------------------------------------
//! (mu_x^2 + mu_y^2 + c1)(sigma_x^2 + sigma_y^2 + c2)
//! ```
//!
//! Moments are population moments (divide by N) and windows are uniform,
//! not Gaussian-weighted. Scores lie in [-1, 1]; 1 means identical.

use alloc::vec::Vec;

use crate::geom::Rect;
use crate::imgproc::{find_contours, BinaryImage, GrayImage};
use crate::math;

/// Stabilizing constants: `c1 = (k1 L)^2`, `c2 = (k2 L)^2` with L = 255.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsimConstants {
    pub k1: f64,
    pub k2: f64,
    pub dynamic_range: f64,
}

impl SsimConstants {
    pub fn new(k1: f64, k2: f64) -> Self {
        SsimConstants {
            k1,
            k2,
            dynamic_range: 255.0,
        }
    }

    pub fn c1(&self) -> f64 {
        let v = self.k1 * self.dynamic_range;
        v * v
    }

    pub fn c2(&self) -> f64 {
        let v = self.k2 * self.dynamic_range;
        v * v
    }
}

impl Default for SsimConstants {
    fn default() -> Self {
        SsimConstants::new(0.01, 0.03)
    }
}

/// Population means, variances, and covariance of two equally sized windows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsimComponents {
    pub mu_x: f64,
    pub mu_y: f64,
    pub sigma_x2: f64,
    pub sigma_y2: f64,
    pub sigma_xy: f64,
}

impl SsimComponents {
    fn score(&self, k: &SsimConstants) -> f64 {
        let c1 = k.c1();
        let c2 = k.c2();
        let num = (2.0 * self.mu_x * self.mu_y + c1) * (2.0 * self.sigma_xy + c2);
        let den = (self.mu_x * self.mu_x + self.mu_y * self.mu_y + c1)
            * (self.sigma_x2 + self.sigma_y2 + c2);
        (num / den).clamp(-1.0, 1.0)
    }
}

/// Grid of local scores plus their mean.
#[derive(Debug, Clone, PartialEq)]
pub struct SsimReport {
    pub global_score: f64,
    /// Row-major local scores, `grid_width * grid_height` entries.
    pub local_map: Vec<f64>,
    pub grid_width: u32,
    pub grid_height: u32,
    pub window: u32,
    pub stride: u32,
    /// Window origins along each axis, in image coordinates.
    pub xs: Vec<u32>,
    pub ys: Vec<u32>,
    pub image_width: u32,
    pub image_height: u32,
}

/// Dissimilarity rendering: a per-pixel difference image and boxes over the
/// low-similarity regions.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceEvidence {
    pub diff_image: GrayImage,
    pub boxes: Vec<Rect>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SsimError {
    #[error("images must have equal dimensions, got {0}x{1} vs {2}x{3}")]
    DimensionMismatch(u32, u32, u32, u32),
    #[error("ssim needs at least {min} pixels, got {got}")]
    TooFewPixels { min: usize, got: usize },
    #[error("window {window} exceeds image dimensions {width}x{height}")]
    WindowTooLarge {
        window: u32,
        width: u32,
        height: u32,
    },
}

fn window_components(x: &GrayImage, y: &GrayImage, rect: Rect) -> SsimComponents {
    let n = rect.area() as f64;
    let mut sum_x = 0.0;
    let mut sum_y = 0.0;
    for py in rect.y..rect.bottom() {
        for px in rect.x..rect.right() {
            sum_x += x.get(px, py) as f64;
            sum_y += y.get(px, py) as f64;
        }
    }
    let mu_x = sum_x / n;
    let mu_y = sum_y / n;

    let mut sigma_x2 = 0.0;
    let mut sigma_y2 = 0.0;
    let mut sigma_xy = 0.0;
    for py in rect.y..rect.bottom() {
        for px in rect.x..rect.right() {
            let dx = x.get(px, py) as f64 - mu_x;
            let dy = y.get(px, py) as f64 - mu_y;
            sigma_x2 += dx * dx;
            sigma_y2 += dy * dy;
            sigma_xy += dx * dy;
        }
    }
    SsimComponents {
        mu_x,
        mu_y,
        sigma_x2: sigma_x2 / n,
        sigma_y2: sigma_y2 / n,
        sigma_xy: sigma_xy / n,
    }
}

fn check_dims(x: &GrayImage, y: &GrayImage) -> Result<(), SsimError> {
    if x.width() != y.width() || x.height() != y.height() {
        return Err(SsimError::DimensionMismatch(
            x.width(),
            x.height(),
            y.width(),
            y.height(),
        ));
    }
    Ok(())
}

/// Single-window SSIM over the whole image. Callers resize first when the
/// inputs differ in size.
pub fn ssim_global(x: &GrayImage, y: &GrayImage, k: &SsimConstants) -> Result<f64, SsimError> {
    check_dims(x, y)?;
    let n = x.pixels().len();
    if n < 4 {
        return Err(SsimError::TooFewPixels { min: 4, got: n });
    }
    let rect = Rect::new(0, 0, x.width(), x.height());
    Ok(window_components(x, y, rect).score(k))
}

/// Window origins along one axis: every `stride` pixels, plus a final
/// window flush with the far edge so the whole image is covered.
fn window_origins(len: u32, window: u32, stride: u32) -> Vec<u32> {
    let stride = stride.max(1);
    let mut out = Vec::new();
    let last = len - window;
    let mut pos = 0;
    loop {
        out.push(pos.min(last));
        if pos >= last {
            break;
        }
        pos += stride;
    }
    out
}

/// Local SSIM on a sliding grid; the global score is the mean of the local
/// scores. With `window` equal to the image size this reduces to
/// [`ssim_global`] exactly.
pub fn ssim_windowed(
    x: &GrayImage,
    y: &GrayImage,
    window: u32,
    stride: u32,
    k: &SsimConstants,
) -> Result<SsimReport, SsimError> {
    check_dims(x, y)?;
    if window == 0 || window > x.width() || window > x.height() {
        return Err(SsimError::WindowTooLarge {
            window,
            width: x.width(),
            height: x.height(),
        });
    }
    let xs = window_origins(x.width(), window, stride);
    let ys = window_origins(x.height(), window, stride);
    let mut local = Vec::with_capacity(xs.len() * ys.len());
    for &oy in &ys {
        for &ox in &xs {
            let rect = Rect::new(ox, oy, window, window);
            local.push(window_components(x, y, rect).score(k));
        }
    }
    let global = local.iter().sum::<f64>() / local.len() as f64;
    Ok(SsimReport {
        global_score: global,
        grid_width: xs.len() as u32,
        grid_height: ys.len() as u32,
        local_map: local,
        window,
        stride,
        xs,
        ys,
        image_width: x.width(),
        image_height: x.height(),
    })
}

/// Flag windows whose dissimilarity `1 - local` exceeds the threshold,
/// paint them into image coordinates, and box the connected regions.
/// The difference image holds, per pixel, the maximum of
/// `255 * (1 - local)` over the windows covering it.
pub fn difference_evidence(report: &SsimReport, dissimilarity_threshold: f64) -> DifferenceEvidence {
    let w = report.image_width;
    let h = report.image_height;
    let mut diff = alloc::vec![0.0f64; w as usize * h as usize];
    let mut flagged = alloc::vec![false; w as usize * h as usize];

    for (gy, &oy) in report.ys.iter().enumerate() {
        for (gx, &ox) in report.xs.iter().enumerate() {
            let local = report.local_map[gy * report.xs.len() + gx];
            let dissim = 1.0 - local;
            let hot = dissim > dissimilarity_threshold;
            for py in oy..(oy + report.window).min(h) {
                for px in ox..(ox + report.window).min(w) {
                    let i = py as usize * w as usize + px as usize;
                    diff[i] = diff[i].max(255.0 * dissim);
                    if hot {
                        flagged[i] = true;
                    }
                }
            }
        }
    }

    let diff_image = GrayImage::from_fn(w, h, |x, y| {
        math::round_to_u8(diff[y as usize * w as usize + x as usize])
    });
    let mask = BinaryImage::from_fn(w, h, |x, y| flagged[y as usize * w as usize + x as usize]);
    let boxes = find_contours(&mask)
        .into_iter()
        .map(|c| c.bounding_box)
        .collect();
    DifferenceEvidence { diff_image, boxes }
}
