//! Harris corners with normalized patch descriptors.
//!
//! Intensities are scaled to [0, 1] before differentiation so corner
//! responses and thresholds stay in a sane range regardless of image depth.

use alloc::vec::Vec;

use super::MatchError;
use crate::config::PipelineConfig;
use crate::imgproc::{sobel_gradients, GrayImage};
use crate::math;

const HARRIS_K: f64 = 0.04;
const WINDOW_SIGMA: f64 = 1.0;
const WINDOW_SIZE: i64 = 7; // 2 * ceil(3 sigma) + 1

/// A corner location with its Harris response.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Keypoint {
    pub x: u32,
    pub y: u32,
    pub response: f64,
}

/// 8x8 intensity patch around a keypoint, zero-mean and unit-norm unless the
/// patch is constant (then all zeros).
#[derive(Debug, Clone, PartialEq)]
pub struct Descriptor {
    pub vector: [f64; 64],
    pub keypoint: Keypoint,
}

/// Accepted correspondence between descriptor lists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescriptorMatch {
    pub index_a: usize,
    pub index_b: usize,
    pub distance: f64,
}

fn gaussian_window() -> [f64; WINDOW_SIZE as usize] {
    let r = WINDOW_SIZE / 2;
    let mut w = [0.0; WINDOW_SIZE as usize];
    let mut sum = 0.0;
    for (i, slot) in w.iter_mut().enumerate() {
        let d = (i as i64 - r) as f64;
        *slot = math::exp(-(d * d) / (2.0 * WINDOW_SIGMA * WINDOW_SIGMA));
        sum += *slot;
    }
    for slot in &mut w {
        *slot /= sum;
    }
    w
}

fn smooth(src: &[f64], w: i64, h: i64, kernel: &[f64]) -> Vec<f64> {
    let r = kernel.len() as i64 / 2;
    let mut tmp = alloc::vec![0.0f64; (w * h) as usize];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (k, &wt) in kernel.iter().enumerate() {
                let sx = (x + k as i64 - r).clamp(0, w - 1);
                acc += wt * src[(y * w + sx) as usize];
            }
            tmp[(y * w + x) as usize] = acc;
        }
    }
    let mut out = alloc::vec![0.0f64; (w * h) as usize];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (k, &wt) in kernel.iter().enumerate() {
                let sy = (y + k as i64 - r).clamp(0, h - 1);
                acc += wt * tmp[(sy * w + x) as usize];
            }
            out[(y * w + x) as usize] = acc;
        }
    }
    out
}

/// Harris response map over the whole image.
pub(crate) fn harris_response(img: &GrayImage) -> Vec<f64> {
    let (w, h) = (img.width() as i64, img.height() as i64);
    let (gx, gy) = sobel_gradients(img);
    let scale = 1.0 / 255.0;
    let n = (w * h) as usize;
    let mut ixx = alloc::vec![0.0f64; n];
    let mut iyy = alloc::vec![0.0f64; n];
    let mut ixy = alloc::vec![0.0f64; n];
    for i in 0..n {
        let x = gx[i] * scale;
        let y = gy[i] * scale;
        ixx[i] = x * x;
        iyy[i] = y * y;
        ixy[i] = x * y;
    }
    let kernel = gaussian_window();
    let sxx = smooth(&ixx, w, h, &kernel);
    let syy = smooth(&iyy, w, h, &kernel);
    let sxy = smooth(&ixy, w, h, &kernel);
    (0..n)
        .map(|i| {
            let det = sxx[i] * syy[i] - sxy[i] * sxy[i];
            let trace = sxx[i] + syy[i];
            det - HARRIS_K * trace * trace
        })
        .collect()
}

/// Harris corner detection with 3x3 non-maximum suppression. Keeps
/// responses above `cfg.corner_threshold`, strongest first, at most
/// `cfg.max_keypoints`. Ties order by scan position.
pub fn detect_keypoints(img: &GrayImage, cfg: &PipelineConfig) -> Result<Vec<Keypoint>, MatchError> {
    if img.width() < 16 || img.height() < 16 {
        return Err(MatchError::ImageTooSmallForKeypoints {
            min: 16,
            width: img.width(),
            height: img.height(),
        });
    }
    let (w, h) = (img.width() as i64, img.height() as i64);
    let response = harris_response(img);
    let mut found: Vec<Keypoint> = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let r = response[(y * w + x) as usize];
            if r <= cfg.corner_threshold {
                continue;
            }
            let mut is_max = true;
            'nms: for dy in -1..=1i64 {
                for dx in -1..=1i64 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let nx = (x + dx).clamp(0, w - 1);
                    let ny = (y + dy).clamp(0, h - 1);
                    if response[(ny * w + nx) as usize] > r {
                        is_max = false;
                        break 'nms;
                    }
                }
            }
            if is_max {
                found.push(Keypoint {
                    x: x as u32,
                    y: y as u32,
                    response: r,
                });
            }
        }
    }
    found.sort_by(|a, b| {
        b.response
            .partial_cmp(&a.response)
            .unwrap_or(core::cmp::Ordering::Equal)
            .then((a.y, a.x).cmp(&(b.y, b.x)))
    });
    found.truncate(cfg.max_keypoints);
    Ok(found)
}

/// 8x8 normalized patch descriptors, sampled with a replicated border.
pub fn compute_descriptors(img: &GrayImage, keypoints: &[Keypoint]) -> Vec<Descriptor> {
    keypoints
        .iter()
        .map(|&kp| {
            let mut v = [0.0f64; 64];
            let mut i = 0;
            for dy in -3..=4i64 {
                for dx in -3..=4i64 {
                    v[i] = img.get_clamped(kp.x as i64 + dx, kp.y as i64 + dy) as f64;
                    i += 1;
                }
            }
            let mean = v.iter().sum::<f64>() / 64.0;
            for e in &mut v {
                *e -= mean;
            }
            let norm = math::sqrt(v.iter().map(|e| e * e).sum::<f64>());
            if norm > 0.0 {
                for e in &mut v {
                    *e /= norm;
                }
            } else {
                v = [0.0; 64];
            }
            Descriptor {
                vector: v,
                keypoint: kp,
            }
        })
        .collect()
}

fn distance(a: &Descriptor, b: &Descriptor) -> f64 {
    let mut acc = 0.0;
    for i in 0..64 {
        let d = a.vector[i] - b.vector[i];
        acc += d * d;
    }
    math::sqrt(acc)
}

/// Lowe-ratio matching with mutual-best filtering: a pair survives when each
/// side is the other's nearest neighbor and `d1 < ratio * d2`. A single
/// candidate on the far side has no second-nearest and is accepted on the
/// nearest-neighbor test alone.
pub fn match_descriptors(a: &[Descriptor], b: &[Descriptor], ratio: f64) -> Vec<DescriptorMatch> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }

    // nearest and second-nearest of each a in b
    let forward: Vec<Option<(usize, f64)>> = a
        .iter()
        .map(|da| {
            let mut first: Option<(usize, f64)> = None;
            let mut second: Option<f64> = None;
            for (j, db) in b.iter().enumerate() {
                let d = distance(da, db);
                match first {
                    None => first = Some((j, d)),
                    Some((_, fd)) if d < fd => {
                        second = Some(fd);
                        first = Some((j, d));
                    }
                    Some(_) => {
                        if second.is_none_or(|sd| d < sd) {
                            second = Some(d);
                        }
                    }
                }
            }
            let (j, d1) = first?;
            match second {
                Some(d2) if d1 >= ratio * d2 => None,
                _ => Some((j, d1)),
            }
        })
        .collect();

    // nearest of each b in a, for the mutual check
    let backward: Vec<usize> = b
        .iter()
        .map(|db| {
            let mut best = (0usize, f64::INFINITY);
            for (i, da) in a.iter().enumerate() {
                let d = distance(da, db);
                if d < best.1 {
                    best = (i, d);
                }
            }
            best.0
        })
        .collect();

    forward
        .iter()
        .enumerate()
        .filter_map(|(i, m)| {
            let (j, d) = (*m)?;
            (backward[j] == i).then_some(DescriptorMatch {
                index_a: i,
                index_b: j,
                distance: d,
            })
        })
        .collect()
}
