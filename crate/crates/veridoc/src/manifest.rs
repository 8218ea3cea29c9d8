//! Template manifest file format.
//!
//! The manifest is a versioned JSON document designed to be hand-annotated:
//!
//! ```json
//! {
//!   "version": 1,
//!   "templates": [
//!     {
//!       "id": "yashoda",
//!       "file": "yashoda.png",
//!       "doc_type_label": "Medical report; Hospital:Yashoda",
//!       "text_regions": [ {"field": "name", "x": 150, "y": 96, "w": 200, "h": 14} ],
//!       "required_fields": ["Name", "IP.No", "Address"]
//!     }
//!   ]
//! }
//! ```
//!
//! `file` paths resolve relative to the manifest's directory; template
//! images load eagerly so bounds are validated up front.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use veridoc_core::geom::Rect;
use veridoc_core::ocr::TextRegion;
use veridoc_core::templates::{RoiCandidate, TemplateManifest, TemplateRecord};

use crate::io::{read_png_gray, write_png_gray};
use crate::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct ManifestFile {
    version: u32,
    templates: Vec<ManifestTemplate>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ManifestTemplate {
    id: String,
    file: String,
    doc_type_label: String,
    #[serde(default)]
    text_regions: Vec<ManifestRegion>,
    #[serde(default)]
    required_fields: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ManifestRegion {
    field: String,
    x: u32,
    y: u32,
    w: u32,
    h: u32,
}

/// Load and validate a manifest, loading every referenced template image.
pub fn load_manifest(path: &Path) -> Result<TemplateManifest> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let file: ManifestFile = serde_json::from_str(&text).map_err(|e| Error::MalformedJson {
        path: path.to_path_buf(),
        source: e,
    })?;
    let base = path.parent().unwrap_or(Path::new("."));

    let mut manifest = TemplateManifest::new(file.version, Vec::new())?;
    for t in file.templates {
        let image_path = resolve(base, &t.file);
        if !image_path.is_file() {
            return Err(Error::MissingTemplateImage {
                id: t.id,
                path: image_path,
            });
        }
        let image = read_png_gray(&image_path)?;
        let regions = t
            .text_regions
            .into_iter()
            .map(|r| TextRegion {
                field_name: r.field,
                rect: Rect::new(r.x, r.y, r.w, r.h),
            })
            .collect();
        let record = TemplateRecord::new(
            t.id,
            t.file,
            t.doc_type_label,
            regions,
            t.required_fields,
            image,
        )?;
        manifest.push(record)?;
    }
    Ok(manifest)
}

/// Write a manifest back to disk (template images are not rewritten).
pub fn save_manifest(path: &Path, manifest: &TemplateManifest) -> Result<()> {
    let file = ManifestFile {
        version: manifest.version(),
        templates: manifest
            .templates()
            .iter()
            .map(|t| ManifestTemplate {
                id: t.id().to_string(),
                file: t.image_file().to_string(),
                doc_type_label: t.doc_type_label().to_string(),
                text_regions: t
                    .text_regions()
                    .iter()
                    .map(|r| ManifestRegion {
                        field: r.field_name.clone(),
                        x: r.rect.x,
                        y: r.rect.y,
                        w: r.rect.width,
                        h: r.rect.height,
                    })
                    .collect(),
                required_fields: t.required_fields().to_vec(),
            })
            .collect(),
    };
    let json = serde_json::to_string_pretty(&file).expect("manifest schema always serializes");
    fs::write(path, json + "\n").map_err(|e| Error::io(path, e))
}

fn resolve(base: &Path, file: &str) -> PathBuf {
    let p = Path::new(file);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

/// Persist a candidate's crop as `<id>.png` beside the manifest and append
/// a record with empty annotations (filled in by hand later). The manifest
/// file is created when missing and is left untouched on any error.
pub fn promote_candidate(
    manifest_path: &Path,
    candidate: &RoiCandidate,
    id: &str,
    doc_type_label: &str,
) -> Result<TemplateRecord> {
    let mut manifest = if manifest_path.is_file() {
        load_manifest(manifest_path)?
    } else {
        TemplateManifest::new(1, Vec::new())?
    };
    if manifest.get(id).is_some() {
        return Err(veridoc_core::templates::TemplateError::DuplicateId(id.to_string()).into());
    }
    let record = TemplateRecord::new(
        id.to_string(),
        format!("{id}.png"),
        doc_type_label.to_string(),
        Vec::new(),
        Vec::new(),
        candidate.crop.clone(),
    )?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    write_png_gray(&base.join(format!("{id}.png")), &candidate.crop)?;
    manifest.push(record.clone())?;
    save_manifest(manifest_path, &manifest)?;
    Ok(record)
}
