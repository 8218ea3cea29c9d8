//! Mutable drawing surface for synthesizing document pages.
//!
//! Images are immutable once built, so fixtures and template authoring draw
//! on a canvas and freeze it with [`GrayCanvas::into_image`].

use alloc::vec;
use alloc::vec::Vec;

use crate::geom::Rect;
use crate::imgproc::GrayImage;
use crate::ocr::atlas::GlyphAtlas;

#[derive(Debug, Clone)]
pub struct GrayCanvas {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl GrayCanvas {
    pub fn new(width: u32, height: u32, background: u8) -> Self {
        GrayCanvas {
            width: width.max(1),
            height: height.max(1),
            pixels: vec![background; width.max(1) as usize * height.max(1) as usize],
        }
    }

    pub fn from_image(img: &GrayImage) -> Self {
        GrayCanvas {
            width: img.width(),
            height: img.height(),
            pixels: img.pixels().to_vec(),
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Set one pixel; coordinates outside the canvas are ignored.
    pub fn set(&mut self, x: i64, y: i64, value: u8) {
        if x >= 0 && y >= 0 && x < self.width as i64 && y < self.height as i64 {
            self.pixels[y as usize * self.width as usize + x as usize] = value;
        }
    }

    pub fn fill_rect(&mut self, rect: Rect, value: u8) {
        let clipped = rect.clipped_to(self.width, self.height);
        for y in clipped.y..clipped.bottom() {
            for x in clipped.x..clipped.right() {
                self.pixels[y as usize * self.width as usize + x as usize] = value;
            }
        }
    }

    /// Single-pixel rectangle outline.
    pub fn outline_rect(&mut self, rect: Rect, value: u8) {
        if rect.is_empty() {
            return;
        }
        for x in rect.x..rect.right() {
            self.set(x as i64, rect.y as i64, value);
            self.set(x as i64, rect.bottom() as i64 - 1, value);
        }
        for y in rect.y..rect.bottom() {
            self.set(rect.x as i64, y as i64, value);
            self.set(rect.right() as i64 - 1, y as i64, value);
        }
    }

    pub fn blit(&mut self, img: &GrayImage, x: i64, y: i64) {
        for sy in 0..img.height() {
            for sx in 0..img.width() {
                self.set(x + sx as i64, y + sy as i64, img.get(sx, sy));
            }
        }
    }

    /// Render text with a glyph atlas, one cell per character starting at
    /// `(x, y)`. Characters missing from the atlas leave their cell blank.
    pub fn draw_text(&mut self, atlas: &GlyphAtlas, text: &str, x: i64, y: i64, ink: u8) {
        for (i, ch) in text.chars().enumerate() {
            let cx = x + i as i64 * atlas.cell_width() as i64;
            if let Some(glyph) = atlas.glyph(ch) {
                for gy in 0..atlas.cell_height() {
                    for gx in 0..atlas.cell_width() {
                        if glyph.is_ink(gx, gy) {
                            self.set(cx + gx as i64, y + gy as i64, ink);
                        }
                    }
                }
            }
        }
    }

    pub fn into_image(self) -> GrayImage {
        GrayImage::from_raw(self.width, self.height, self.pixels)
            .expect("canvas buffer always matches its dimensions")
    }
}
