//! Attribute validation, confidence combination, and the end-to-end verdict
//! pipeline.
//!
//! The decision table runs in order: an unmatched template short-circuits to
//! [`Verdict::NoTemplateMatch`]; a matched template with low structural
//! similarity is [`Verdict::PotentialFraudStructural`] and produces
//! difference evidence; failing the data check or the cumulative-confidence
//! gate is [`Verdict::PotentialFraudData`]; everything else is
//! [`Verdict::RealDocument`]. Boundary semantics: matched means
//! `score >= match_threshold`, structural fraud means
//! `ssim < ssim_threshold`, and the confidence gate passes at equality.

mod dataset;

pub use dataset::{parse_dataset, to_csv, DatasetError, ReferenceDataset};

use alloc::string::String;
use alloc::vec::Vec;

use crate::config::{MatchMode, PipelineConfig};
use crate::imgproc::{resize_bilinear, to_grayscale, GrayImage, ImageError, RasterImage};
use crate::matching::{
    best_template, compute_descriptors, detect_keypoints, histogram_similarity, match_descriptors,
    MatchError, MatchResult,
};
use crate::math;
use crate::ocr::{localize_text_regions, normalize_text, OcrEngine, OcrError};
use crate::ssim::{difference_evidence, ssim_global, ssim_windowed, DifferenceEvidence, SsimError};
use crate::templates::TemplateManifest;

/// Final classification of a sample document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    NoTemplateMatch,
    PotentialFraudStructural,
    PotentialFraudData,
    RealDocument,
}

impl Verdict {
    /// The line printed as the final stdout message.
    pub fn display_line(&self) -> &'static str {
        match self {
            Verdict::NoTemplateMatch => "No Template Match",
            Verdict::PotentialFraudStructural => "Potential Fraud",
            Verdict::PotentialFraudData => "Error in data: Potential Fraud",
            Verdict::RealDocument => "REAL DOCUMENT",
        }
    }
}

/// One dataset column checked against the extracted text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeCheck {
    pub column: String,
    /// Lowercase dataset value the text was searched for.
    pub expected: String,
    pub found: bool,
}

/// Result of validating extracted text against the dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeOutcome {
    pub passed: bool,
    pub checks: Vec<AttributeCheck>,
    pub matched_row: Option<usize>,
}

/// The scores feeding the confidence gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceBundle {
    pub match_score: f64,
    pub ssim_score: f64,
    /// Mean segment confidence; 1.0 when OCR did not run.
    pub ocr_confidence: f64,
    pub cumulative: f64,
}

impl ConfidenceBundle {
    pub fn new(
        match_score: f64,
        ssim_score: f64,
        ocr_confidence: f64,
        weights: (f64, f64, f64),
    ) -> Self {
        ConfidenceBundle {
            match_score,
            ssim_score,
            ocr_confidence,
            cumulative: cumulative_confidence(match_score, ssim_score, ocr_confidence, weights),
        }
    }
}

/// Weighted mean of the three confidence components; scores that can run
/// negative are clamped into [0, 1] first.
pub fn cumulative_confidence(
    match_score: f64,
    ssim_score: f64,
    ocr_confidence: f64,
    weights: (f64, f64, f64),
) -> f64 {
    let (wm, ws, wo) = weights;
    let total = wm + ws + wo;
    if total <= 0.0 {
        return 0.0;
    }
    let m = match_score.clamp(0.0, 1.0);
    let s = ssim_score.clamp(0.0, 1.0);
    let o = ocr_confidence.clamp(0.0, 1.0);
    (wm * m + ws * s + wo * o) / total
}

/// Non-gating comparison diagnostics carried in the report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub histogram_similarity: f64,
    pub template_keypoints: usize,
    pub sample_keypoints: usize,
    pub descriptor_matches: usize,
}

/// Everything the pipeline learned about one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub best: MatchResult,
    pub doc_type_label: String,
    /// Template image file as named by the manifest.
    pub template_file: String,
    /// Global SSIM against the matched template; absent when no template
    /// matched.
    pub ssim: Option<f64>,
    pub checks: Vec<AttributeCheck>,
    pub matched_row: Option<usize>,
    pub confidence: ConfidenceBundle,
    pub verdict: Verdict,
    pub evidence: Option<DifferenceEvidence>,
    pub diagnostics: Option<Diagnostics>,
    /// Normalized text the data check ran against; absent when OCR did not
    /// run.
    pub extracted_text: Option<String>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Match(#[from] MatchError),
    #[error(transparent)]
    Ssim(#[from] SsimError),
    #[error(transparent)]
    Image(#[from] ImageError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Ocr(#[from] OcrError),
    #[error("matched template \"{0}\" disappeared from the manifest")]
    MissingTemplate(String),
}

/// Row-consistent (or independent, per `mode`) validation of required
/// dataset columns against normalized text. The text must already be
/// lowercase. Checks report the per-column flags of the best row — the one
/// matching the most columns, earliest on ties — and `matched_row` is set
/// only when the check passes.
pub fn check_attributes(
    text: &str,
    ds: &ReferenceDataset,
    required: &[String],
    mode: MatchMode,
) -> Result<AttributeOutcome, DatasetError> {
    let column_indices: Vec<usize> = required
        .iter()
        .map(|name| {
            ds.column_index(name)
                .ok_or_else(|| DatasetError::UnknownColumn(name.clone()))
        })
        .collect::<Result<_, _>>()?;

    if required.is_empty() {
        // nothing to validate
        return Ok(AttributeOutcome {
            passed: true,
            checks: Vec::new(),
            matched_row: None,
        });
    }
    if ds.row_count() == 0 {
        // no row can satisfy anything, and there are no values to report
        return Ok(AttributeOutcome {
            passed: false,
            checks: Vec::new(),
            matched_row: None,
        });
    }

    // Per-row found flags.
    let mut best_row: Option<(usize, usize)> = None; // (row, found count)
    let mut full_row: Option<usize> = None;
    for row in 0..ds.row_count() {
        let count = column_indices
            .iter()
            .filter(|&&col| text.contains(ds.value_lower(row, col)))
            .count();
        if best_row.is_none_or(|(_, c)| count > c) {
            best_row = Some((row, count));
        }
        if count == required.len() && full_row.is_none() {
            full_row = Some(row);
        }
    }

    match mode {
        MatchMode::Row => {
            let (row, _) = best_row.expect("row count checked above");
            let checks = column_indices
                .iter()
                .zip(required)
                .map(|(&col, name)| {
                    let expected = String::from(ds.value_lower(row, col));
                    let found = text.contains(&expected);
                    AttributeCheck {
                        column: name.clone(),
                        expected,
                        found,
                    }
                })
                .collect();
            Ok(AttributeOutcome {
                passed: full_row.is_some(),
                checks,
                matched_row: full_row,
            })
        }
        MatchMode::Any => {
            let checks: Vec<AttributeCheck> = column_indices
                .iter()
                .zip(required)
                .map(|(&col, name)| {
                    let matching_row =
                        (0..ds.row_count()).find(|&row| text.contains(ds.value_lower(row, col)));
                    // report the matched value, or the first row's value as
                    // the representative expectation when nothing matched
                    let expected = String::from(ds.value_lower(matching_row.unwrap_or(0), col));
                    AttributeCheck {
                        column: name.clone(),
                        expected,
                        found: matching_row.is_some(),
                    }
                })
                .collect();
            Ok(AttributeOutcome {
                passed: checks.iter().all(|c| c.found),
                checks,
                matched_row: full_row,
            })
        }
    }
}

/// The decision table as a pure function of the stage scores.
pub fn decide_verdict(
    score: f64,
    ssim: f64,
    attributes_passed: bool,
    cumulative: f64,
    cfg: &PipelineConfig,
) -> Verdict {
    if score < cfg.match_threshold {
        Verdict::NoTemplateMatch
    } else if ssim < cfg.ssim_threshold {
        Verdict::PotentialFraudStructural
    } else if !attributes_passed || cumulative < cfg.confidence_threshold {
        Verdict::PotentialFraudData
    } else {
        Verdict::RealDocument
    }
}

/// Retune resolution-dependent preprocessing parameters from the sample
/// dimensions. Returns a new configuration; the input is untouched. No-op
/// unless `adaptive_parameters` is set.
pub fn auto_tune(cfg: &PipelineConfig, width: u32, height: u32) -> PipelineConfig {
    if !cfg.adaptive_parameters {
        return cfg.clone();
    }
    let shorter = width.min(height) as f64;
    let mut tuned = cfg.clone();
    // the blur formula clamps before rounding, the block size after
    tuned.blur_kernel = nearest_odd((shorter / 256.0).max(3.0));
    tuned.block_size = nearest_odd(shorter / 32.0).max(3);
    tuned.min_roi_area = math::round(0.001 * width as f64 * height as f64) as u32;
    tuned
}

/// Nearest odd integer; exact ties round down.
fn nearest_odd(x: f64) -> u32 {
    let f = math::floor(x) as i64;
    let lower = if f % 2 == 0 { f - 1 } else { f }.max(1);
    let upper = lower + 2;
    let v = if x - lower as f64 <= upper as f64 - x {
        lower
    } else {
        upper
    };
    v as u32
}

/// End-to-end verification of one sample against the template library and
/// reference dataset.
pub fn verify(
    sample: &RasterImage,
    manifest: &TemplateManifest,
    dataset: &ReferenceDataset,
    engine: &dyn OcrEngine,
    cfg: &PipelineConfig,
) -> Result<VerificationReport, VerifyError> {
    let cfg = auto_tune(cfg, sample.width(), sample.height());
    let gray = to_grayscale(sample);

    let best = best_template(&gray, manifest, &cfg)?;
    let record = manifest
        .get(&best.template_id)
        .ok_or_else(|| VerifyError::MissingTemplate(best.template_id.clone()))?;

    if !best.matched {
        let confidence = ConfidenceBundle::new(best.score, 0.0, 1.0, cfg.confidence_weights);
        let verdict = decide_verdict(best.score, 0.0, true, confidence.cumulative, &cfg);
        return Ok(VerificationReport {
            doc_type_label: String::from(record.doc_type_label()),
            template_file: String::from(record.image_file()),
            best,
            ssim: None,
            checks: Vec::new(),
            matched_row: None,
            confidence,
            verdict,
            evidence: None,
            diagnostics: None,
            extracted_text: None,
        });
    }

    let resized = resize_bilinear(&gray, record.image().width(), record.image().height())?;
    let ssim = ssim_global(record.image(), &resized, &cfg.ssim_constants())?;
    let diagnostics = Some(compare_diagnostics(record.image(), &resized, &cfg));

    if ssim < cfg.ssim_threshold {
        let windowed = ssim_windowed(
            record.image(),
            &resized,
            cfg.ssim_window.min(resized.width()).min(resized.height()),
            cfg.ssim_stride,
            &cfg.ssim_constants(),
        )?;
        let evidence = difference_evidence(&windowed, cfg.evidence_threshold);
        let confidence = ConfidenceBundle::new(best.score, ssim, 1.0, cfg.confidence_weights);
        let verdict = decide_verdict(best.score, ssim, true, confidence.cumulative, &cfg);
        return Ok(VerificationReport {
            doc_type_label: String::from(record.doc_type_label()),
            template_file: String::from(record.image_file()),
            best,
            ssim: Some(ssim),
            checks: Vec::new(),
            matched_row: None,
            confidence,
            verdict,
            evidence: Some(evidence),
            diagnostics,
            extracted_text: None,
        });
    }

    let regions = localize_text_regions(&gray, record, &best);
    let segments = engine.extract(&gray, &regions)?;
    let text = normalize_text(&segments);
    let ocr_confidence = if segments.is_empty() {
        1.0
    } else {
        segments.iter().map(|s| s.confidence).sum::<f64>() / segments.len() as f64
    };
    let outcome = check_attributes(&text, dataset, record.required_fields(), cfg.match_mode)?;
    let confidence = ConfidenceBundle::new(best.score, ssim, ocr_confidence, cfg.confidence_weights);
    let verdict = decide_verdict(
        best.score,
        ssim,
        outcome.passed,
        confidence.cumulative,
        &cfg,
    );

    Ok(VerificationReport {
        doc_type_label: String::from(record.doc_type_label()),
        template_file: String::from(record.image_file()),
        best,
        ssim: Some(ssim),
        checks: outcome.checks,
        matched_row: outcome.matched_row,
        confidence,
        verdict,
        evidence: None,
        diagnostics,
        extracted_text: Some(text),
    })
}

fn compare_diagnostics(template: &GrayImage, sample: &GrayImage, cfg: &PipelineConfig) -> Diagnostics {
    let hist = histogram_similarity(template, sample);
    let (tk, sk, matches) = match (
        detect_keypoints(template, cfg),
        detect_keypoints(sample, cfg),
    ) {
        (Ok(tks), Ok(sks)) => {
            let td = compute_descriptors(template, &tks);
            let sd = compute_descriptors(sample, &sks);
            let m = match_descriptors(&td, &sd, cfg.descriptor_ratio);
            (tks.len(), sks.len(), m.len())
        }
        // images below the keypoint minimum still verify; diagnostics degrade
        _ => (0, 0, 0),
    };
    Diagnostics {
        histogram_similarity: hist,
        template_keypoints: tk,
        sample_keypoints: sk,
        descriptor_matches: matches,
    }
}
