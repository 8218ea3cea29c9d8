//! Verification report serialization: a versioned JSON document carrying
//! every score the pipeline computed.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use veridoc_core::fraud::{VerificationReport, Verdict};

use crate::{Error, Result};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub verdict: String,
    /// The verdict's stdout display line.
    pub verdict_display: String,
    pub best: BestMatch,
    pub doc_type_label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ssim: Option<f64>,
    pub confidence: Confidence,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matched_row: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extracted_text: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<Evidence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<DiagnosticsOut>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BestMatch {
    pub template_id: String,
    pub template_file: String,
    pub score: f64,
    pub offset: (u32, u32),
    pub matched: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Confidence {
    pub match_score: f64,
    pub ssim_score: f64,
    pub ocr_confidence: f64,
    pub cumulative: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Check {
    pub column: String,
    pub expected: String,
    pub found: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Evidence {
    pub boxes: Vec<Box2D>,
    /// Paths of rendered evidence images, when the caller wrote them.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diff_image: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overlay_image: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Box2D {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DiagnosticsOut {
    pub histogram_similarity: f64,
    pub template_keypoints: usize,
    pub sample_keypoints: usize,
    pub descriptor_matches: usize,
}

pub fn verdict_id(v: Verdict) -> &'static str {
    match v {
        Verdict::NoTemplateMatch => "no_template_match",
        Verdict::PotentialFraudStructural => "potential_fraud_structural",
        Verdict::PotentialFraudData => "potential_fraud_data",
        Verdict::RealDocument => "real_document",
    }
}

/// Build the serializable report. `evidence_paths` carries the rendered
/// diff/overlay file names when evidence was written to disk.
pub fn to_report_file(
    report: &VerificationReport,
    evidence_paths: Option<(String, String)>,
) -> ReportFile {
    ReportFile {
        schema_version: REPORT_SCHEMA_VERSION,
        verdict: verdict_id(report.verdict).to_string(),
        verdict_display: report.verdict.display_line().to_string(),
        best: BestMatch {
            template_id: report.best.template_id.clone(),
            template_file: report.template_file.clone(),
            score: report.best.score,
            offset: report.best.offset,
            matched: report.best.matched,
        },
        doc_type_label: report.doc_type_label.clone(),
        ssim: report.ssim,
        confidence: Confidence {
            match_score: report.confidence.match_score,
            ssim_score: report.confidence.ssim_score,
            ocr_confidence: report.confidence.ocr_confidence,
            cumulative: report.confidence.cumulative,
        },
        checks: report
            .checks
            .iter()
            .map(|c| Check {
                column: c.column.clone(),
                expected: c.expected.clone(),
                found: c.found,
            })
            .collect(),
        matched_row: report.matched_row,
        extracted_text: report.extracted_text.clone(),
        evidence: report.evidence.as_ref().map(|e| Evidence {
            boxes: e
                .boxes
                .iter()
                .map(|b| Box2D {
                    x: b.x,
                    y: b.y,
                    w: b.width,
                    h: b.height,
                })
                .collect(),
            diff_image: evidence_paths.as_ref().map(|(d, _)| d.clone()),
            overlay_image: evidence_paths.as_ref().map(|(_, o)| o.clone()),
        }),
        diagnostics: report.diagnostics.map(|d| DiagnosticsOut {
            histogram_similarity: d.histogram_similarity,
            template_keypoints: d.template_keypoints,
            sample_keypoints: d.sample_keypoints,
            descriptor_matches: d.descriptor_matches,
        }),
    }
}

pub fn write_report(path: &Path, file: &ReportFile) -> Result<()> {
    let json = serde_json::to_string_pretty(file).map_err(|e| Error::MalformedJson {
        path: path.to_path_buf(),
        source: e,
    })?;
    fs::write(path, json + "\n").map_err(|e| Error::io(path, e))
}
