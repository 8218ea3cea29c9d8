//! Pipeline configuration shared by every stage.

use crate::math;
use crate::ssim::SsimConstants;

/// How extracted text is validated against the reference dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchMode {
    /// All required fields must come from one single dataset row.
    #[default]
    Row,
    /// Each required field may match any row independently.
    Any,
}

/// Thresholds, weights, and preprocessing parameters for the verification
/// pipeline. Construct with [`PipelineConfig::default`] and adjust fields.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// A template counts as matched when its score reaches this value.
    pub match_threshold: f64,
    /// Structural fraud is flagged when global SSIM falls below this value.
    pub ssim_threshold: f64,
    /// Gate on the cumulative confidence; below it the data check fails.
    pub confidence_threshold: f64,
    /// Weights for (match score, SSIM, OCR confidence); must be
    /// non-negative and sum to 1.
    pub confidence_weights: (f64, f64, f64),
    pub ssim_k1: f64,
    pub ssim_k2: f64,
    /// Window and stride for the local SSIM map behind evidence rendering.
    pub ssim_window: u32,
    pub ssim_stride: u32,
    /// A window counts as tampered when `1 - local_ssim` exceeds this.
    pub evidence_threshold: f64,
    pub blur_sigma: f64,
    pub blur_kernel: u32,
    pub block_size: u32,
    pub threshold_c: f64,
    /// Side of the square structuring element used by the ROI pipeline.
    pub se_size: u32,
    pub min_roi_area: u32,
    /// Edge-magnitude cut for the ROI pipeline's binarization.
    pub edge_threshold: u8,
    pub corner_threshold: f64,
    pub max_keypoints: usize,
    /// Lowe ratio for descriptor matching.
    pub descriptor_ratio: f64,
    pub match_mode: MatchMode,
    /// When set, `verify` retunes resolution-dependent parameters from the
    /// sample dimensions before running.
    pub adaptive_parameters: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            match_threshold: 0.6,
            ssim_threshold: 0.8,
            confidence_threshold: 0.7,
            confidence_weights: (0.4, 0.4, 0.2),
            ssim_k1: 0.01,
            ssim_k2: 0.03,
            ssim_window: 8,
            ssim_stride: 4,
            evidence_threshold: 0.2,
            blur_sigma: 1.0,
            blur_kernel: 3,
            // large enough that solid field boxes binarize solid instead of
            // hollowing out into nested rims
            block_size: 31,
            threshold_c: 7.0,
            se_size: 3,
            min_roi_area: 64,
            edge_threshold: 128,
            corner_threshold: 1e-6,
            max_keypoints: 256,
            descriptor_ratio: 0.75,
            match_mode: MatchMode::Row,
            adaptive_parameters: false,
        }
    }
}

/// Configuration errors surfaced before a pipeline runs.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("{what} must lie in [0, 1], got {got}")]
    ThresholdRange { what: &'static str, got: f64 },
    #[error("confidence weights must be non-negative and sum to 1, got ({0}, {1}, {2})")]
    BadWeights(f64, f64, f64),
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (what, v) in [
            ("match_threshold", self.match_threshold),
            ("ssim_threshold", self.ssim_threshold),
            ("confidence_threshold", self.confidence_threshold),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(ConfigError::ThresholdRange { what, got: v });
            }
        }
        let (a, b, c) = self.confidence_weights;
        if a < 0.0 || b < 0.0 || c < 0.0 || math::abs(a + b + c - 1.0) > 1e-9 {
            return Err(ConfigError::BadWeights(a, b, c));
        }
        Ok(())
    }

    pub fn ssim_constants(&self) -> SsimConstants {
        SsimConstants::new(self.ssim_k1, self.ssim_k2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        assert!(PipelineConfig::default().validate().is_ok());
    }

    #[test]
    fn bad_weights_are_rejected() {
        let mut cfg = PipelineConfig {
            confidence_weights: (0.5, 0.4, 0.2),
            ..PipelineConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(ConfigError::BadWeights(..))));
        cfg.confidence_weights = (-0.2, 1.0, 0.2);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn out_of_range_threshold_is_rejected() {
        let cfg = PipelineConfig {
            ssim_threshold: 1.2,
            ..PipelineConfig::default()
        };
        assert!(matches!(
            cfg.validate(),
            Err(ConfigError::ThresholdRange { .. })
        ));
    }
}
