//! Template library records and ROI-based candidate extraction.
//!
//! A template is a whole-page grayscale image with a document-type label,
//! hand-annotated text regions, and the dataset columns a sample must
//! validate against. Candidate extraction isolates high-contrast regions of
//! an exemplar page so a human can pick and annotate templates; crops come
//! from the original grayscale image, not the preprocessed intermediate.

use alloc::string::String;
use alloc::vec::Vec;

use crate::config::PipelineConfig;
use crate::geom::Rect;
use crate::imgproc::{
    adaptive_threshold, find_contours, gaussian_blur, morphology, sobel_magnitude, BinaryImage,
    GrayImage, ImageError, MorphOp, StructuringElement,
};
use crate::ocr::TextRegion;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TemplateError {
    #[error("template id must not be empty")]
    EmptyId,
    #[error("duplicate template id \"{0}\"")]
    DuplicateId(String),
    #[error("region \"{field}\" of template \"{template}\" falls outside its {width}x{height} image")]
    RegionOutOfBounds {
        template: String,
        field: String,
        width: u32,
        height: u32,
    },
    #[error(transparent)]
    Image(#[from] ImageError),
}

/// A known document layout.
#[derive(Debug, Clone, PartialEq)]
pub struct TemplateRecord {
    id: String,
    image_file: String,
    doc_type_label: String,
    text_regions: Vec<TextRegion>,
    required_fields: Vec<String>,
    image: GrayImage,
}

impl TemplateRecord {
    pub fn new(
        id: String,
        image_file: String,
        doc_type_label: String,
        text_regions: Vec<TextRegion>,
        required_fields: Vec<String>,
        image: GrayImage,
    ) -> Result<Self, TemplateError> {
        if id.is_empty() {
            return Err(TemplateError::EmptyId);
        }
        for region in &text_regions {
            if region.rect.is_empty() || !region.rect.fits_within(image.width(), image.height()) {
                return Err(TemplateError::RegionOutOfBounds {
                    template: id,
                    field: region.field_name.clone(),
                    width: image.width(),
                    height: image.height(),
                });
            }
        }
        Ok(TemplateRecord {
            id,
            image_file,
            doc_type_label,
            text_regions,
            required_fields,
            image,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn image_file(&self) -> &str {
        &self.image_file
    }

    pub fn doc_type_label(&self) -> &str {
        &self.doc_type_label
    }

    pub fn text_regions(&self) -> &[TextRegion] {
        &self.text_regions
    }

    pub fn required_fields(&self) -> &[String] {
        &self.required_fields
    }

    pub fn image(&self) -> &GrayImage {
        &self.image
    }
}

/// An ordered, id-unique collection of templates.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TemplateManifest {
    version: u32,
    templates: Vec<TemplateRecord>,
}

impl TemplateManifest {
    pub fn new(version: u32, templates: Vec<TemplateRecord>) -> Result<Self, TemplateError> {
        let mut manifest = TemplateManifest {
            version,
            templates: Vec::new(),
        };
        for t in templates {
            manifest.push(t)?;
        }
        Ok(manifest)
    }

    pub fn version(&self) -> u32 {
        self.version
    }

    pub fn templates(&self) -> &[TemplateRecord] {
        &self.templates
    }

    pub fn get(&self, id: &str) -> Option<&TemplateRecord> {
        self.templates.iter().find(|t| t.id() == id)
    }

    /// Append a record, rejecting duplicate ids.
    pub fn push(&mut self, record: TemplateRecord) -> Result<(), TemplateError> {
        if self.get(record.id()).is_some() {
            return Err(TemplateError::DuplicateId(record.id.clone()));
        }
        self.templates.push(record);
        Ok(())
    }
}

/// A candidate region produced by the extraction pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct RoiCandidate {
    pub bounding_box: Rect,
    /// Foreground pixel count of the detected component.
    pub area: u32,
    /// Crop of the original grayscale page.
    pub crop: GrayImage,
}

/// Run the extraction pipeline — blur, adaptive threshold, close, edge
/// magnitude, binarize, contours — and crop every component of at least
/// `cfg.min_roi_area` pixels from the original image. Candidates come back
/// largest first; equal areas keep scan order.
pub fn extract_roi_candidates(doc: &GrayImage, cfg: &PipelineConfig) -> Vec<RoiCandidate> {
    let preprocessed = roi_mask(doc, cfg);
    let mut with_rank: Vec<(usize, RoiCandidate)> = find_contours(&preprocessed)
        .into_iter()
        .enumerate()
        .filter(|(_, c)| c.area >= cfg.min_roi_area)
        .filter_map(|(scan_rank, c)| {
            let crop = doc.crop(c.bounding_box).ok()?;
            Some((
                scan_rank,
                RoiCandidate {
                    bounding_box: c.bounding_box,
                    area: c.area,
                    crop,
                },
            ))
        })
        .collect();
    with_rank.sort_by(|(ra, a), (rb, b)| b.area.cmp(&a.area).then(ra.cmp(rb)));
    with_rank.into_iter().map(|(_, c)| c).collect()
}

fn roi_mask(doc: &GrayImage, cfg: &PipelineConfig) -> BinaryImage {
    let blurred = gaussian_blur(doc, cfg.blur_sigma, cfg.blur_kernel)
        .unwrap_or_else(|_| doc.clone());
    let thresholded = adaptive_threshold(&blurred, cfg.block_size.max(3) | 1, cfg.threshold_c)
        .expect("block size forced odd and >= 3");
    let se = StructuringElement::square(cfg.se_size.max(1) | 1)
        .expect("side forced odd and >= 1");
    let closed = morphology(&thresholded, MorphOp::Close, &se);
    let edges = match sobel_magnitude(&closed.to_gray()) {
        Ok(e) => e,
        // pages smaller than the Sobel support have no detectable structure
        Err(_) => return BinaryImage::from_fn(doc.width(), doc.height(), |_, _| false),
    };
    BinaryImage::from_gray_threshold(&edges, cfg.edge_threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canvas::GrayCanvas;

    fn cfg_with_min_area(min: u32) -> PipelineConfig {
        PipelineConfig {
            min_roi_area: min,
            ..PipelineConfig::default()
        }
    }

    #[test]
    fn blank_page_yields_no_candidates() {
        let page = GrayImage::constant(120, 90, 255);
        let got = extract_roi_candidates(&page, &PipelineConfig::default());
        assert!(got.is_empty());
    }

    #[test]
    fn drawn_field_boxes_are_recovered_within_two_pixels() {
        let mut canvas = GrayCanvas::new(220, 160, 255);
        let boxes = [
            Rect::new(20, 20, 60, 20),
            Rect::new(120, 40, 60, 20),
            Rect::new(40, 100, 60, 20),
        ];
        for b in boxes {
            canvas.fill_rect(b, 0);
        }
        let page = canvas.into_image();
        let got = extract_roi_candidates(&page, &cfg_with_min_area(50));
        assert_eq!(got.len(), 3, "got {:?}", got.iter().map(|c| c.bounding_box).collect::<Vec<_>>());
        for b in boxes {
            let hit = got.iter().any(|c| {
                c.bounding_box.x.abs_diff(b.x) <= 2
                    && c.bounding_box.y.abs_diff(b.y) <= 2
                    && c.bounding_box.right().abs_diff(b.right()) <= 2
                    && c.bounding_box.bottom().abs_diff(b.bottom()) <= 2
            });
            assert!(hit, "no candidate near {b:?}");
        }
    }

    #[test]
    fn specks_below_the_area_floor_are_filtered() {
        // solid band frame flush with the image border: its outer flank is
        // clipped away and the inner boundary responds as one ring, plus a
        // 2x2 speck that must fall below the area floor
        let mut canvas = GrayCanvas::new(200, 140, 255);
        canvas.fill_rect(Rect::new(0, 0, 200, 6), 0);
        canvas.fill_rect(Rect::new(0, 134, 200, 6), 0);
        canvas.fill_rect(Rect::new(0, 0, 6, 140), 0);
        canvas.fill_rect(Rect::new(194, 0, 6, 140), 0);
        canvas.fill_rect(Rect::new(100, 70, 2, 2), 0);
        let page = canvas.into_image();
        let got = extract_roi_candidates(&page, &cfg_with_min_area(50));
        assert_eq!(got.len(), 1);
        assert!(got[0].area >= 50);
    }

    #[test]
    fn crops_are_pixel_identical_to_the_original() {
        let mut canvas = GrayCanvas::new(160, 120, 255);
        canvas.fill_rect(Rect::new(30, 30, 50, 24), 40);
        let page = canvas.into_image();
        let got = extract_roi_candidates(&page, &cfg_with_min_area(20));
        assert!(!got.is_empty());
        for c in &got {
            let direct = page.crop(c.bounding_box).unwrap();
            assert_eq!(c.crop, direct);
        }
    }

    #[test]
    fn candidate_count_shrinks_as_the_floor_rises() {
        let mut canvas = GrayCanvas::new(220, 160, 255);
        canvas.fill_rect(Rect::new(20, 20, 60, 20), 0);
        canvas.fill_rect(Rect::new(120, 40, 30, 10), 0);
        canvas.fill_rect(Rect::new(40, 100, 12, 6), 0);
        let page = canvas.into_image();
        let mut last = usize::MAX;
        for min_area in [10, 80, 200, 100_000] {
            let got = extract_roi_candidates(&page, &cfg_with_min_area(min_area));
            assert!(got.len() <= last);
            last = got.len();
        }
        assert_eq!(last, 0);
    }

    #[test]
    fn candidates_are_sorted_by_area_descending() {
        let mut canvas = GrayCanvas::new(220, 160, 255);
        canvas.fill_rect(Rect::new(10, 10, 80, 30), 0);
        canvas.fill_rect(Rect::new(120, 90, 40, 15), 0);
        let page = canvas.into_image();
        let got = extract_roi_candidates(&page, &cfg_with_min_area(10));
        for pair in got.windows(2) {
            assert!(pair[0].area >= pair[1].area);
        }
    }

    #[test]
    fn manifest_rejects_duplicates_and_bad_regions() {
        let image = GrayImage::constant(50, 50, 255);
        let record = |id: &str| {
            TemplateRecord::new(
                id.into(),
                "a.png".into(),
                "label".into(),
                Vec::new(),
                Vec::new(),
                image.clone(),
            )
            .unwrap()
        };
        let mut manifest = TemplateManifest::new(1, alloc::vec![record("bill")]).unwrap();
        assert!(matches!(
            manifest.push(record("bill")),
            Err(TemplateError::DuplicateId(id)) if id == "bill"
        ));

        let bad = TemplateRecord::new(
            "x".into(),
            "x.png".into(),
            "label".into(),
            alloc::vec![TextRegion {
                field_name: "name".into(),
                rect: Rect::new(40, 40, 20, 4),
            }],
            Vec::new(),
            image,
        );
        assert!(matches!(bad, Err(TemplateError::RegionOutOfBounds { .. })));
    }

    #[test]
    fn empty_template_id_is_rejected() {
        let image = GrayImage::constant(8, 8, 0);
        assert!(matches!(
            TemplateRecord::new(
                String::new(),
                "f.png".into(),
                "l".into(),
                Vec::new(),
                Vec::new(),
                image
            ),
            Err(TemplateError::EmptyId)
        ));
    }
}
