//! Template comparison: zero-normalized cross-correlation scoring,
//! best-template selection, sliding-window localization, and histogram
//! similarity. Keypoint detection and descriptor matching live in
//! [`keypoints`] and feed diagnostics only — the verdict is gated by the
//! correlation score and SSIM alone.

mod keypoints;

pub use keypoints::{
    compute_descriptors, detect_keypoints, match_descriptors, Descriptor, DescriptorMatch,
    Keypoint,
};

use alloc::string::String;
use alloc::vec::Vec;

use crate::config::PipelineConfig;
use crate::geom::Rect;
use crate::imgproc::{resize_bilinear, GrayImage, ImageError};
use crate::math;
use crate::templates::TemplateManifest;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatchError {
    #[error("images must have equal dimensions, got {0}x{1} vs {2}x{3}")]
    DimensionMismatch(u32, u32, u32, u32),
    #[error("{0} has zero variance; correlation is undefined")]
    ZeroVariance(&'static str),
    #[error("template {tw}x{th} does not fit inside scene {sw}x{sh}")]
    TemplateLargerThanScene { tw: u32, th: u32, sw: u32, sh: u32 },
    #[error("every scene window has zero variance")]
    NoValidWindow,
    #[error("manifest holds no templates")]
    EmptyManifest,
    #[error("every template comparison was degenerate")]
    AllTemplatesDegenerate,
    #[error("image must be at least {min}x{min} for keypoint detection, got {width}x{height}")]
    ImageTooSmallForKeypoints { min: u32, width: u32, height: u32 },
    #[error(transparent)]
    Image(#[from] ImageError),
}

/// Outcome of matching a sample against the template library.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub template_id: String,
    /// Zero-normalized cross-correlation in [-1, 1].
    pub score: f64,
    /// Alignment offset of the best placement, `(0, 0)` for whole-document
    /// comparison.
    pub offset: (u32, u32),
    /// `score >= match_threshold`.
    pub matched: bool,
}

/// 256-bin luminance histogram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub bins: [u64; 256],
    pub total: u64,
}

impl Histogram {
    pub fn of(img: &GrayImage) -> Self {
        let mut bins = [0u64; 256];
        for &p in img.pixels() {
            bins[p as usize] += 1;
        }
        Histogram {
            bins,
            total: img.pixels().len() as u64,
        }
    }
}

struct CenteredStats {
    mean: f64,
    /// Sum of squared deviations (not divided by N).
    ss: f64,
}

fn centered_stats(pixels: &[u8]) -> CenteredStats {
    let n = pixels.len() as f64;
    let mean = pixels.iter().map(|&p| p as f64).sum::<f64>() / n;
    let ss = pixels
        .iter()
        .map(|&p| {
            let d = p as f64 - mean;
            d * d
        })
        .sum::<f64>();
    CenteredStats { mean, ss }
}

/// Zero-normalized cross-correlation of two equally sized images:
/// `sum((t - mean_t)(s - mean_s)) / sqrt(ss_t * ss_s)`, in [-1, 1].
/// Constant inputs make the statistic undefined and are reported as
/// degenerate rather than guessed at.
pub fn zncc_score(template: &GrayImage, sample: &GrayImage) -> Result<f64, MatchError> {
    if template.width() != sample.width() || template.height() != sample.height() {
        return Err(MatchError::DimensionMismatch(
            template.width(),
            template.height(),
            sample.width(),
            sample.height(),
        ));
    }
    let t = centered_stats(template.pixels());
    if t.ss == 0.0 {
        return Err(MatchError::ZeroVariance("template"));
    }
    let s = centered_stats(sample.pixels());
    if s.ss == 0.0 {
        return Err(MatchError::ZeroVariance("sample"));
    }
    let mut cross = 0.0;
    for (&tp, &sp) in template.pixels().iter().zip(sample.pixels()) {
        cross += (tp as f64 - t.mean) * (sp as f64 - s.mean);
    }
    Ok((cross / math::sqrt(t.ss * s.ss)).clamp(-1.0, 1.0))
}

/// Evaluate the correlation at every valid placement of `template` inside
/// `scene`; returns the argmax offset and its score. Ties break toward the
/// smallest y, then x. Windows with zero variance are skipped.
pub fn sliding_match(
    template: &GrayImage,
    scene: &GrayImage,
) -> Result<((u32, u32), f64), MatchError> {
    if template.width() > scene.width() || template.height() > scene.height() {
        return Err(MatchError::TemplateLargerThanScene {
            tw: template.width(),
            th: template.height(),
            sw: scene.width(),
            sh: scene.height(),
        });
    }
    let t = centered_stats(template.pixels());
    if t.ss == 0.0 {
        return Err(MatchError::ZeroVariance("template"));
    }

    let (tw, th) = (template.width(), template.height());
    let mut best: Option<((u32, u32), f64)> = None;
    for oy in 0..=(scene.height() - th) {
        for ox in 0..=(scene.width() - tw) {
            // Window statistics, same two-pass formula as zncc_score.
            let n = (tw as f64) * (th as f64);
            let mut sum = 0.0;
            for y in 0..th {
                for x in 0..tw {
                    sum += scene.get(ox + x, oy + y) as f64;
                }
            }
            let mean = sum / n;
            let mut ss = 0.0;
            let mut cross = 0.0;
            for y in 0..th {
                for x in 0..tw {
                    let ds = scene.get(ox + x, oy + y) as f64 - mean;
                    let dt = template.get(x, y) as f64 - t.mean;
                    ss += ds * ds;
                    cross += dt * ds;
                }
            }
            if ss == 0.0 {
                continue;
            }
            let score = (cross / math::sqrt(t.ss * ss)).clamp(-1.0, 1.0);
            if best.is_none_or(|(_, b)| score > b) {
                best = Some(((ox, oy), score));
            }
        }
    }
    best.ok_or(MatchError::NoValidWindow)
}

/// Resize the sample to each template's dimensions, score it, and return the
/// best-scoring template. Degenerate comparisons are skipped; equal scores
/// break toward the lexicographically smaller template id.
pub fn best_template(
    sample: &GrayImage,
    manifest: &TemplateManifest,
    cfg: &PipelineConfig,
) -> Result<MatchResult, MatchError> {
    if manifest.templates().is_empty() {
        return Err(MatchError::EmptyManifest);
    }
    let mut best: Option<(&str, f64)> = None;
    for record in manifest.templates() {
        let resized = resize_bilinear(sample, record.image().width(), record.image().height())?;
        let score = match zncc_score(record.image(), &resized) {
            Ok(s) => s,
            Err(MatchError::ZeroVariance(_)) => continue,
            Err(e) => return Err(e),
        };
        let better = match best {
            None => true,
            Some((id, s)) => score > s || (score == s && record.id() < id),
        };
        if better {
            best = Some((record.id(), score));
        }
    }
    let (id, score) = best.ok_or(MatchError::AllTemplatesDegenerate)?;
    Ok(MatchResult {
        template_id: String::from(id),
        score,
        offset: (0, 0),
        matched: score >= cfg.match_threshold,
    })
}

/// Pearson correlation between two normalized 256-bin histograms.
///
/// Degenerate (uniform) histograms have zero variance; identical uniform
/// pairs score 1 and mixed degenerate pairs score 0, by convention.
pub fn histogram_similarity(a: &GrayImage, b: &GrayImage) -> f64 {
    let ha = Histogram::of(a);
    let hb = Histogram::of(b);

    // Exact degenerate handling on integer counts: a histogram vector has
    // zero variance iff every bin is equal.
    let a_flat = ha.bins.iter().all(|&c| c == ha.bins[0]);
    let b_flat = hb.bins.iter().all(|&c| c == hb.bins[0]);
    if a_flat || b_flat {
        let equal = ha
            .bins
            .iter()
            .zip(hb.bins.iter())
            .all(|(&x, &y)| x as u128 * hb.total as u128 == y as u128 * ha.total as u128);
        return if a_flat && b_flat && equal { 1.0 } else { 0.0 };
    }

    let na: Vec<f64> = ha.bins.iter().map(|&c| c as f64 / ha.total as f64).collect();
    let nb: Vec<f64> = hb.bins.iter().map(|&c| c as f64 / hb.total as f64).collect();
    let mean_a = na.iter().sum::<f64>() / 256.0;
    let mean_b = nb.iter().sum::<f64>() / 256.0;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for i in 0..256 {
        let da = na[i] - mean_a;
        let db = nb[i] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    (cov / math::sqrt(var_a * var_b)).clamp(-1.0, 1.0)
}

/// Shared by sub-region localization in the OCR stage.
pub fn clip_rect(rect: Rect, width: u32, height: u32) -> Rect {
    rect.clipped_to(width, height)
}
