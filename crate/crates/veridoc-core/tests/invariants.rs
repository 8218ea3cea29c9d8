//! Property suites for the raster and matching layers: independent oracles
//! (flood fill, brute-force statistics) cross-check the implementations on
//! randomized inputs.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use veridoc_core::config::PipelineConfig;
use veridoc_core::imgproc::{
    find_contours, gaussian_blur, morphology, resize_bilinear, BinaryImage, GrayImage, MorphOp,
    StructuringElement,
};
use veridoc_core::matching::zncc_score;
use veridoc_core::ssim::{ssim_global, ssim_windowed, SsimConstants};
use veridoc_core::templates::extract_roi_candidates;

/// 8-connected component labeling by flood fill, the contour-count oracle.
fn flood_fill_components(img: &BinaryImage) -> (usize, u64) {
    let (w, h) = (img.width() as i64, img.height() as i64);
    let mut seen = vec![false; (w * h) as usize];
    let mut components = 0usize;
    let mut total_area = 0u64;
    for sy in 0..h {
        for sx in 0..w {
            if seen[(sy * w + sx) as usize] || !img.is_foreground(sx as u32, sy as u32) {
                continue;
            }
            components += 1;
            let mut stack = vec![(sx, sy)];
            seen[(sy * w + sx) as usize] = true;
            while let Some((x, y)) = stack.pop() {
                total_area += 1;
                for dy in -1..=1 {
                    for dx in -1..=1 {
                        let (nx, ny) = (x + dx, y + dy);
                        if nx < 0 || ny < 0 || nx >= w || ny >= h {
                            continue;
                        }
                        let i = (ny * w + nx) as usize;
                        if !seen[i] && img.is_foreground(nx as u32, ny as u32) {
                            seen[i] = true;
                            stack.push((nx, ny));
                        }
                    }
                }
            }
        }
    }
    (components, total_area)
}

fn random_binary(rng: &mut StdRng, w: u32, h: u32, fill: f64) -> BinaryImage {
    BinaryImage::from_fn(w, h, |_, _| rng.random_bool(fill))
}

#[test]
fn contours_agree_with_flood_fill_on_random_images() {
    let mut rng = StdRng::seed_from_u64(0xC0117);
    for _ in 0..100 {
        let w = rng.random_range(1..=32);
        let h = rng.random_range(1..=32);
        let fill = rng.random_range(0.05..0.6);
        let img = random_binary(&mut rng, w, h, fill);
        let contours = find_contours(&img);
        let (count, total_area) = flood_fill_components(&img);
        assert_eq!(contours.len(), count);
        assert_eq!(contours.iter().map(|c| c.area as u64).sum::<u64>(), total_area);
        assert!(total_area <= (w * h) as u64);
        // every contour's bbox is tight around its traced points
        for c in &contours {
            for &(x, y) in &c.points {
                assert!(c.bounding_box.contains(x, y));
            }
        }
    }
}

#[test]
fn contour_order_is_by_bounding_box_origin() {
    let mut rng = StdRng::seed_from_u64(0x5EED);
    for _ in 0..50 {
        let img = random_binary(&mut rng, 24, 24, 0.2);
        let contours = find_contours(&img);
        for pair in contours.windows(2) {
            let a = (pair[0].bounding_box.y, pair[0].bounding_box.x);
            let b = (pair[1].bounding_box.y, pair[1].bounding_box.x);
            assert!(a <= b, "order violated: {a:?} then {b:?}");
        }
    }
}

#[test]
fn morphological_duality_is_exact_for_symmetric_elements() {
    let mut rng = StdRng::seed_from_u64(0xD0A1);
    let elements = [
        StructuringElement::square(3).unwrap(),
        StructuringElement::square(5).unwrap(),
        StructuringElement::rect(3, 5).unwrap(),
        // symmetric cross
        StructuringElement::from_mask(
            3,
            3,
            vec![false, true, false, true, true, true, false, true, false],
        )
        .unwrap(),
    ];
    for _ in 0..40 {
        let img = random_binary(&mut rng, 20, 16, 0.4);
        for se in &elements {
            let direct = morphology(&img, MorphOp::Dilate, se);
            let dual = morphology(&img.invert(), MorphOp::Erode, &se.reflected());
            assert_eq!(direct, dual.invert());
        }
    }
}

#[test]
fn blur_preserves_interior_mean_within_one_level() {
    let mut rng = StdRng::seed_from_u64(0xB1A2);
    let img = GrayImage::from_fn(96, 96, |_, _| rng.random());
    let out = gaussian_blur(&img, 1.4, 5).unwrap();
    // interior at least 3x the kernel away from the border
    let margin = 15;
    let mut before = 0.0;
    let mut after = 0.0;
    let mut n = 0.0;
    for y in margin..(96 - margin) {
        for x in margin..(96 - margin) {
            before += img.get(x, y) as f64;
            after += out.get(x, y) as f64;
            n += 1.0;
        }
    }
    assert!((before / n - after / n).abs() <= 1.0);
}

#[test]
fn roi_candidate_count_is_monotone_in_min_area() {
    let mut rng = StdRng::seed_from_u64(0xA11CE);
    let img = GrayImage::from_fn(160, 120, |x, y| {
        if (x / 20 + y / 20) % 3 == 0 && rng.random_bool(0.9) {
            20
        } else {
            250
        }
    });
    let mut last = usize::MAX;
    for min_area in [0u32, 20, 60, 150, 400, 100_000] {
        let cfg = PipelineConfig {
            min_roi_area: min_area,
            ..PipelineConfig::default()
        };
        let got = extract_roi_candidates(&img, &cfg);
        assert!(got.len() <= last);
        last = got.len();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resize_output_stays_within_input_range(
        seed in any::<u64>(),
        sw in 1u32..24,
        sh in 1u32..24,
        dw in 1u32..48,
        dh in 1u32..48,
    ) {
        let mut rng = StdRng::seed_from_u64(seed);
        let img = GrayImage::from_fn(sw, sh, |_, _| rng.random());
        let (lo, hi) = img.min_max();
        let out = resize_bilinear(&img, dw, dh).unwrap();
        let (olo, ohi) = out.min_max();
        prop_assert!(olo >= lo && ohi <= hi);
    }

    #[test]
    fn zncc_is_symmetric_and_bounded(seed in any::<u64>(), w in 2u32..16, h in 2u32..16) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = GrayImage::from_fn(w, h, |_, _| rng.random());
        let b = GrayImage::from_fn(w, h, |_, _| rng.random());
        if let (Ok(ab), Ok(ba)) = (zncc_score(&a, &b), zncc_score(&b, &a)) {
            prop_assert!((ab - ba).abs() <= 1e-12);
            prop_assert!((-1.0..=1.0).contains(&ab));
        }
    }

    #[test]
    fn windowed_ssim_mean_matches_its_map(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = GrayImage::from_fn(20, 20, |_, _| rng.random());
        let b = GrayImage::from_fn(20, 20, |_, _| rng.random());
        let report = ssim_windowed(&a, &b, 8, 4, &SsimConstants::default()).unwrap();
        let mean = report.local_map.iter().sum::<f64>() / report.local_map.len() as f64;
        prop_assert!((report.global_score - mean).abs() <= 1e-12);
        prop_assert_eq!(
            report.local_map.len(),
            (report.grid_width * report.grid_height) as usize
        );
        for s in &report.local_map {
            prop_assert!((-1.0..=1.0).contains(s));
        }
    }

    #[test]
    fn global_ssim_stays_bounded(seed in any::<u64>(), w in 2u32..14, h in 2u32..14) {
        prop_assume!(w * h >= 4);
        let mut rng = StdRng::seed_from_u64(seed);
        let a = GrayImage::from_fn(w, h, |_, _| rng.random());
        let b = GrayImage::from_fn(w, h, |_, _| rng.random());
        let s = ssim_global(&a, &b, &SsimConstants::default()).unwrap();
        prop_assert!((-1.0..=1.0).contains(&s));
    }
}
