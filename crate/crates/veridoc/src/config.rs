//! Pipeline configuration file: a JSON document mirroring
//! [`PipelineConfig`], every field optional so partial files override only
//! what they name. The `VERIDOC_CONFIG` environment variable supplies the
//! path when no `--config` flag is given.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use veridoc_core::config::{MatchMode, PipelineConfig};

use crate::{Error, Result};

/// Environment variable consulted when no config path is passed.
pub const CONFIG_ENV_VAR: &str = "VERIDOC_CONFIG";

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub match_threshold: Option<f64>,
    pub ssim_threshold: Option<f64>,
    pub confidence_threshold: Option<f64>,
    pub confidence_weights: Option<(f64, f64, f64)>,
    pub ssim_k1: Option<f64>,
    pub ssim_k2: Option<f64>,
    pub ssim_window: Option<u32>,
    pub ssim_stride: Option<u32>,
    pub evidence_threshold: Option<f64>,
    pub blur_sigma: Option<f64>,
    pub blur_kernel: Option<u32>,
    pub block_size: Option<u32>,
    pub threshold_c: Option<f64>,
    pub se_size: Option<u32>,
    pub min_roi_area: Option<u32>,
    pub edge_threshold: Option<u8>,
    pub corner_threshold: Option<f64>,
    pub max_keypoints: Option<usize>,
    pub descriptor_ratio: Option<f64>,
    /// "row" or "any"
    pub match_mode: Option<String>,
    pub adaptive_parameters: Option<bool>,
}

impl ConfigFile {
    pub fn apply_to(&self, cfg: &mut PipelineConfig) -> Result<()> {
        macro_rules! set {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { cfg.$field = v; })*
            };
        }
        set!(
            match_threshold,
            ssim_threshold,
            confidence_threshold,
            confidence_weights,
            ssim_k1,
            ssim_k2,
            ssim_window,
            ssim_stride,
            evidence_threshold,
            blur_sigma,
            blur_kernel,
            block_size,
            threshold_c,
            se_size,
            min_roi_area,
            edge_threshold,
            corner_threshold,
            max_keypoints,
            descriptor_ratio,
            adaptive_parameters
        );
        if let Some(mode) = &self.match_mode {
            cfg.match_mode = parse_match_mode(mode)?;
        }
        Ok(())
    }
}

pub fn parse_match_mode(s: &str) -> Result<MatchMode> {
    match s {
        "row" => Ok(MatchMode::Row),
        "any" => Ok(MatchMode::Any),
        other => Err(Error::Invalid(format!(
            "match mode must be \"row\" or \"any\", got \"{other}\""
        ))),
    }
}

/// Build the effective configuration: defaults, then the config file (from
/// the flag or `VERIDOC_CONFIG`), validated at the end.
pub fn load_config(explicit: Option<&Path>) -> Result<PipelineConfig> {
    let mut cfg = PipelineConfig::default();
    let env_path = std::env::var_os(CONFIG_ENV_VAR).map(std::path::PathBuf::from);
    let path = explicit.or(env_path.as_deref());
    if let Some(path) = path {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let file: ConfigFile = serde_json::from_str(&text).map_err(|e| Error::MalformedJson {
            path: path.to_path_buf(),
            source: e,
        })?;
        file.apply_to(&mut cfg)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_overrides_named_fields_only() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        fs::write(&path, r#"{"ssim_threshold": 0.9, "match_mode": "any"}"#).unwrap();
        let cfg = load_config(Some(&path)).unwrap();
        assert_eq!(cfg.ssim_threshold, 0.9);
        assert_eq!(cfg.match_mode, MatchMode::Any);
        assert_eq!(cfg.match_threshold, 0.6);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        fs::write(&path, r#"{"ssim_treshold": 0.9}"#).unwrap();
        assert!(load_config(Some(&path)).is_err());
    }

    #[test]
    fn invalid_values_fail_validation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        fs::write(&path, r#"{"confidence_weights": [0.9, 0.9, 0.9]}"#).unwrap();
        assert!(load_config(Some(&path)).is_err());
    }

    #[test]
    fn bad_match_mode_is_an_error() {
        assert!(parse_match_mode("fuzzy").is_err());
    }
}
