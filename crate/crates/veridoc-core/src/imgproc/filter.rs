//! Smoothing, thresholding, and gradient filters.

use alloc::vec;
use alloc::vec::Vec;

use super::{BinaryImage, GrayImage, ImageError};
use crate::math;

/// Separable Gaussian smoothing with a replicated border.
///
/// Kernel weights are normalized to sum 1; the intermediate pass is kept in
/// f64 so a single rounding happens at the end.
pub fn gaussian_blur(img: &GrayImage, sigma: f64, kernel_size: u32) -> Result<GrayImage, ImageError> {
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(ImageError::NonPositiveSigma);
    }
    if kernel_size == 0 {
        return Err(ImageError::TooSmall {
            what: "kernel size",
            min: 1,
            got: kernel_size,
        });
    }
    if kernel_size.is_multiple_of(2) {
        return Err(ImageError::EvenParameter {
            what: "kernel size",
            got: kernel_size,
        });
    }

    let kernel = gaussian_kernel(sigma, kernel_size);
    let r = (kernel_size / 2) as i64;
    let (w, h) = (img.width() as i64, img.height() as i64);

    // Horizontal pass into f64.
    let mut tmp = vec![0.0f64; (w * h) as usize];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (k, &wt) in kernel.iter().enumerate() {
                acc += wt * img.get_clamped(x + k as i64 - r, y) as f64;
            }
            tmp[(y * w + x) as usize] = acc;
        }
    }

    // Vertical pass, rounding once.
    let mut out = Vec::with_capacity((w * h) as usize);
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (k, &wt) in kernel.iter().enumerate() {
                let sy = (y + k as i64 - r).clamp(0, h - 1);
                acc += wt * tmp[(sy * w + x) as usize];
            }
            out.push(math::round_to_u8(acc));
        }
    }
    GrayImage::from_raw(img.width(), img.height(), out)
}

fn gaussian_kernel(sigma: f64, size: u32) -> Vec<f64> {
    let r = (size / 2) as i64;
    let mut weights: Vec<f64> = (0..size as i64)
        .map(|i| {
            let d = (i - r) as f64;
            math::exp(-(d * d) / (2.0 * sigma * sigma))
        })
        .collect();
    let sum: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= sum;
    }
    weights
}

/// Adaptive mean thresholding: a pixel is foreground when it exceeds the
/// mean of its `block_size` x `block_size` neighborhood minus `c`.
///
/// Neighborhood sums use the replicated border, computed separably so large
/// blocks stay cheap.
pub fn adaptive_threshold(
    img: &GrayImage,
    block_size: u32,
    c: f64,
) -> Result<BinaryImage, ImageError> {
    if block_size.is_multiple_of(2) {
        return Err(ImageError::EvenParameter {
            what: "block size",
            got: block_size,
        });
    }
    if block_size < 3 {
        return Err(ImageError::TooSmall {
            what: "block size",
            min: 3,
            got: block_size,
        });
    }

    let r = (block_size / 2) as i64;
    let (w, h) = (img.width() as i64, img.height() as i64);
    let n = (block_size as f64) * (block_size as f64);

    // Horizontal clamped window sums per row.
    let mut hsum = vec![0u64; (w * h) as usize];
    for y in 0..h {
        let row = &img.pixels()[(y * w) as usize..((y + 1) * w) as usize];
        let mut prefix = Vec::with_capacity(w as usize + 1);
        prefix.push(0u64);
        for &p in row {
            prefix.push(prefix.last().unwrap() + p as u64);
        }
        for x in 0..w {
            let lo = x - r;
            let hi = x + r;
            let a = lo.max(0);
            let b = hi.min(w - 1);
            let mut sum = prefix[(b + 1) as usize] - prefix[a as usize];
            if lo < 0 {
                sum += row[0] as u64 * (-lo) as u64;
            }
            if hi > w - 1 {
                sum += row[(w - 1) as usize] as u64 * (hi - (w - 1)) as u64;
            }
            hsum[(y * w + x) as usize] = sum;
        }
    }

    // Vertical clamped window sums over the horizontal sums.
    let mut out = Vec::with_capacity((w * h) as usize);
    for y in 0..h {
        let lo = y - r;
        let hi = y + r;
        for x in 0..w {
            let mut sum = 0u64;
            let a = lo.max(0);
            let b = hi.min(h - 1);
            for sy in a..=b {
                sum += hsum[(sy * w + x) as usize];
            }
            if lo < 0 {
                sum += hsum[x as usize] * (-lo) as u64;
            }
            if hi > h - 1 {
                sum += hsum[((h - 1) * w + x) as usize] * (hi - (h - 1)) as u64;
            }
            let mean = sum as f64 / n;
            let src = img.get(x as u32, y as u32) as f64;
            out.push(if src > mean - c { 255 } else { 0 });
        }
    }
    BinaryImage::from_raw(img.width(), img.height(), out)
}

const SOBEL_X: [[i32; 3]; 3] = [[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]];
const SOBEL_Y: [[i32; 3]; 3] = [[-1, -2, -1], [0, 0, 0], [1, 2, 1]];

/// Signed Sobel gradients with a replicated border, `(gx, gy)` row-major.
pub(crate) fn sobel_gradients(img: &GrayImage) -> (Vec<f64>, Vec<f64>) {
    let (w, h) = (img.width() as i64, img.height() as i64);
    let mut gx = vec![0.0f64; (w * h) as usize];
    let mut gy = vec![0.0f64; (w * h) as usize];
    for y in 0..h {
        for x in 0..w {
            let mut sx = 0i32;
            let mut sy = 0i32;
            for j in 0..3i64 {
                for i in 0..3i64 {
                    let p = img.get_clamped(x + i - 1, y + j - 1) as i32;
                    sx += SOBEL_X[j as usize][i as usize] * p;
                    sy += SOBEL_Y[j as usize][i as usize] * p;
                }
            }
            gx[(y * w + x) as usize] = sx as f64;
            gy[(y * w + x) as usize] = sy as f64;
        }
    }
    (gx, gy)
}

/// Sobel gradient magnitude, `min(255, round(sqrt(gx^2 + gy^2)))`.
pub fn sobel_magnitude(img: &GrayImage) -> Result<GrayImage, ImageError> {
    if img.width() < 3 || img.height() < 3 {
        return Err(ImageError::ImageTooSmall {
            min_width: 3,
            min_height: 3,
            width: img.width(),
            height: img.height(),
        });
    }
    let (gx, gy) = sobel_gradients(img);
    let out: Vec<u8> = gx
        .iter()
        .zip(gy.iter())
        .map(|(&x, &y)| math::round_to_u8(math::sqrt(x * x + y * y)))
        .collect();
    GrayImage::from_raw(img.width(), img.height(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math;

    /// Brute-force single rounding 2-D Gaussian convolution with replicated
    /// border, used as the oracle for the separable implementation.
    fn blur_oracle(img: &GrayImage, sigma: f64, size: u32) -> Vec<u8> {
        let k1 = gaussian_kernel(sigma, size);
        let r = (size / 2) as i64;
        let mut out = Vec::new();
        for y in 0..img.height() as i64 {
            for x in 0..img.width() as i64 {
                let mut acc = 0.0;
                for (j, &wy) in k1.iter().enumerate() {
                    for (i, &wx) in k1.iter().enumerate() {
                        acc += wy * wx * img.get_clamped(x + i as i64 - r, y + j as i64 - r) as f64;
                    }
                }
                out.push(math::round_to_u8(acc));
            }
        }
        out
    }

    #[test]
    fn blur_preserves_constant_images() {
        let img = GrayImage::constant(9, 7, 100);
        let out = gaussian_blur(&img, 2.5, 5).unwrap();
        assert!(out.pixels().iter().all(|&p| p == 100));
    }

    #[test]
    fn blur_center_weight_matches_independent_kernel() {
        // 5x5 zeros with a 255 center; with size 3 the center output is
        // round(255 * w00) where w00 is the normalized 2-D center weight.
        let img = GrayImage::from_fn(5, 5, |x, y| if x == 2 && y == 2 { 255 } else { 0 });
        let out = gaussian_blur(&img, 1.0, 3).unwrap();
        let k = gaussian_kernel(1.0, 3);
        let w00 = k[1] * k[1];
        assert_eq!(out.get(2, 2), math::round_to_u8(255.0 * w00));
    }

    #[test]
    fn blur_keeps_horizontal_symmetry() {
        let img = GrayImage::from_fn(8, 6, |x, y| {
            let xm = x.min(7 - x);
            (xm * 30 + y * 5) as u8
        });
        let out = gaussian_blur(&img, 1.3, 5).unwrap();
        for y in 0..6 {
            for x in 0..8 {
                assert_eq!(out.get(x, y), out.get(7 - x, y));
            }
        }
    }

    #[test]
    fn blur_matches_bruteforce_2d_oracle() {
        let img = GrayImage::from_fn(11, 9, |x, y| ((x * 37 + y * 91) % 251) as u8);
        for (sigma, size) in [(0.8, 3), (1.0, 3), (1.6, 5), (2.2, 7)] {
            let fast = gaussian_blur(&img, sigma, size).unwrap();
            let slow = blur_oracle(&img, sigma, size);
            assert_eq!(fast.pixels(), &slow[..], "sigma={sigma} size={size}");
        }
    }

    #[test]
    fn blur_rejects_bad_parameters() {
        let img = GrayImage::constant(4, 4, 0);
        assert!(matches!(
            gaussian_blur(&img, 1.0, 4),
            Err(ImageError::EvenParameter { .. })
        ));
        assert!(matches!(
            gaussian_blur(&img, 1.0, 0),
            Err(ImageError::TooSmall { .. })
        ));
        assert!(matches!(
            gaussian_blur(&img, 0.0, 3),
            Err(ImageError::NonPositiveSigma)
        ));
    }

    #[test]
    fn threshold_uniform_image_follows_offset_sign() {
        let img = GrayImage::constant(16, 16, 200);
        let hi = adaptive_threshold(&img, 15, 5.0).unwrap();
        assert!(hi.pixels().iter().all(|&p| p == 255));
        let lo = adaptive_threshold(&img, 15, -5.0).unwrap();
        assert!(lo.pixels().iter().all(|&p| p == 0));
    }

    #[test]
    fn threshold_matches_bruteforce_neighborhood_means() {
        // Left half 50, right half 200; compare every pixel against a direct
        // clamped-neighborhood mean.
        let img = GrayImage::from_fn(16, 16, |x, _| if x < 8 { 50 } else { 200 });
        let got = adaptive_threshold(&img, 15, 0.0).unwrap();
        let r = 7i64;
        for y in 0..16i64 {
            for x in 0..16i64 {
                let mut sum = 0u64;
                for j in -r..=r {
                    for i in -r..=r {
                        sum += img.get_clamped(x + i, y + j) as u64;
                    }
                }
                let mean = sum as f64 / (15.0 * 15.0);
                let want = img.get(x as u32, y as u32) as f64 > mean;
                assert_eq!(got.is_foreground(x as u32, y as u32), want, "at {x},{y}");
            }
        }
    }

    #[test]
    fn threshold_rejects_even_blocks() {
        let img = GrayImage::constant(8, 8, 10);
        assert!(matches!(
            adaptive_threshold(&img, 4, 0.0),
            Err(ImageError::EvenParameter { .. })
        ));
    }

    #[test]
    fn sobel_zero_on_uniform_and_strong_on_step() {
        let flat = GrayImage::constant(8, 8, 90);
        assert!(sobel_magnitude(&flat)
            .unwrap()
            .pixels()
            .iter()
            .all(|&p| p == 0));

        // Vertical step 0 -> 255 between columns 3 and 4.
        let step = GrayImage::from_fn(8, 8, |x, _| if x < 4 { 0 } else { 255 });
        let mag = sobel_magnitude(&step).unwrap();
        for y in 0..8 {
            // |gx| = 4*255 at the step columns, clamped to 255.
            assert_eq!(mag.get(3, y), 255);
            assert_eq!(mag.get(4, y), 255);
            assert_eq!(mag.get(0, y), 0);
            assert_eq!(mag.get(7, y), 0);
        }
    }

    #[test]
    fn sobel_needs_three_by_three() {
        let img = GrayImage::constant(2, 5, 0);
        assert!(matches!(
            sobel_magnitude(&img),
            Err(ImageError::ImageTooSmall { .. })
        ));
    }
}
