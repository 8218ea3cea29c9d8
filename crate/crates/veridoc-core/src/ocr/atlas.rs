//! Built-in monospace glyph atlas: A–Z, 0–9, and `. , - : /` plus space in
//! fixed 8x12 cells. The fixture engine both renders and recognizes this
//! alphabet, giving the pipeline a closed, deterministic text loop.

use alloc::string::String;
use alloc::vec::Vec;

use crate::imgproc::GrayImage;

pub const CELL_WIDTH: u32 = 8;
pub const CELL_HEIGHT: u32 = 12;

/// Every character present in the built-in atlas.
pub const ALPHABET: &str = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789.,-:/ ";

/// One glyph's ink mask inside its cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Glyph {
    pub ch: char,
    rows: [u8; CELL_HEIGHT as usize],
    cell: GrayImage,
    ink_count: u32,
}

impl Glyph {
    pub fn is_ink(&self, x: u32, y: u32) -> bool {
        x < CELL_WIDTH && y < CELL_HEIGHT && (self.rows[y as usize] >> (7 - x)) & 1 == 1
    }

    /// Cell rendered as ink 0 on background 255.
    pub fn cell_image(&self) -> &GrayImage {
        &self.cell
    }

    pub fn ink_count(&self) -> u32 {
        self.ink_count
    }
}

/// The fixed-cell font. Construct once with [`GlyphAtlas::builtin`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlyphAtlas {
    glyphs: Vec<Glyph>,
}

impl GlyphAtlas {
    pub fn builtin() -> Self {
        let glyphs = GLYPH_PATTERNS
            .iter()
            .map(|&(ch, pattern)| {
                let mut rows = [0u8; CELL_HEIGHT as usize];
                let mut ink_count = 0;
                for (y, line) in pattern.iter().enumerate() {
                    debug_assert_eq!(line.len(), CELL_WIDTH as usize, "glyph {ch:?} row {y}");
                    let mut bits = 0u8;
                    for (x, c) in line.bytes().enumerate() {
                        if c == b'#' {
                            bits |= 1 << (7 - x);
                            ink_count += 1;
                        }
                    }
                    rows[y] = bits;
                }
                let cell = GrayImage::from_fn(CELL_WIDTH, CELL_HEIGHT, |x, y| {
                    if (rows[y as usize] >> (7 - x)) & 1 == 1 {
                        0
                    } else {
                        255
                    }
                });
                Glyph {
                    ch,
                    rows,
                    cell,
                    ink_count,
                }
            })
            .collect();
        GlyphAtlas { glyphs }
    }

    pub fn cell_width(&self) -> u32 {
        CELL_WIDTH
    }

    pub fn cell_height(&self) -> u32 {
        CELL_HEIGHT
    }

    pub fn glyph(&self, ch: char) -> Option<&Glyph> {
        self.glyphs.iter().find(|g| g.ch == ch)
    }

    pub fn glyphs(&self) -> &[Glyph] {
        &self.glyphs
    }

    pub fn alphabet(&self) -> String {
        self.glyphs.iter().map(|g| g.ch).collect()
    }
}

impl Default for GlyphAtlas {
    fn default() -> Self {
        GlyphAtlas::builtin()
    }
}

#[rustfmt::skip]
const GLYPH_PATTERNS: &[(char, [&str; 12])] = &[
    ('A', [
        "........",
        "...##...",
        "..#..#..",
        ".#....#.",
        ".#....#.",
        ".######.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        "........",
        "........",
    ]),
    ('B', [
        "........",
        ".#####..",
        ".#....#.",
        ".#....#.",
        ".#####..",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#####..",
        "........",
        "........",
    ]),
    ('C', [
        "........",
        "..#####.",
        ".#......",
        ".#......",
        ".#......",
        ".#......",
        ".#......",
        ".#......",
        ".#......",
        "..#####.",
        "........",
        "........",
    ]),
    ('D', [
        "........",
        ".####...",
        ".#...#..",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#...#..",
        ".####...",
        "........",
        "........",
    ]),
    ('E', [
        "........",
        ".######.",
        ".#......",
        ".#......",
        ".#......",
        ".#####..",
        ".#......",
        ".#......",
        ".#......",
        ".######.",
        "........",
        "........",
    ]),
    ('F', [
        "........",
        ".######.",
        ".#......",
        ".#......",
        ".#......",
        ".####...",
        ".#......",
        ".#......",
        ".#......",
        ".#......",
        "........",
        "........",
    ]),
    ('G', [
        "........",
        "..####..",
        ".#....#.",
        ".#......",
        ".#......",
        ".#..###.",
        ".#....#.",
        ".#....#.",
        ".#...##.",
        "..###.#.",
        "........",
        "........",
    ]),
    ('H', [
        "........",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".######.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        "........",
        "........",
    ]),
    ('I', [
        "........",
        "..####..",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "..####..",
        "........",
        "........",
    ]),
    ('J', [
        "........",
        "...####.",
        ".....#..",
        ".....#..",
        ".....#..",
        ".....#..",
        ".....#..",
        ".....#..",
        ".#...#..",
        "..###...",
        "........",
        "........",
    ]),
    ('K', [
        "........",
        ".#....#.",
        ".#...#..",
        ".#..#...",
        ".#.#....",
        ".###....",
        ".#..#...",
        ".#...#..",
        ".#....#.",
        ".#....#.",
        "........",
        "........",
    ]),
    ('L', [
        "........",
        ".#......",
        ".#......",
        ".#......",
        ".#......",
        ".#......",
        ".#......",
        ".#......",
        ".#......",
        ".######.",
        "........",
        "........",
    ]),
    ('M', [
        "........",
        ".#....#.",
        ".##..##.",
        ".#.##.#.",
        ".#.##.#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        "........",
        "........",
    ]),
    ('N', [
        "........",
        ".#....#.",
        ".##...#.",
        ".##...#.",
        ".#.#..#.",
        ".#..#.#.",
        ".#...##.",
        ".#...##.",
        ".#....#.",
        ".#....#.",
        "........",
        "........",
    ]),
    ('O', [
        "........",
        "..####..",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        "..####..",
        "........",
        "........",
    ]),
    ('P', [
        "........",
        ".#####..",
        ".#....#.",
        ".#....#.",
        ".#####..",
        ".#......",
        ".#......",
        ".#......",
        ".#......",
        ".#......",
        "........",
        "........",
    ]),
    ('Q', [
        "........",
        "..####..",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#.#..#.",
        ".#..##..",
        "..####..",
        "....###.",
        ".....##.",
    ]),
    ('R', [
        "........",
        ".#####..",
        ".#....#.",
        ".#....#.",
        ".#####..",
        ".#.##...",
        ".#..##..",
        ".#..##..",
        ".#...##.",
        ".#...##.",
        "........",
        "........",
    ]),
    ('S', [
        "........",
        "..####..",
        ".#....#.",
        ".#......",
        "..##....",
        "...##...",
        ".....#..",
        "......#.",
        ".#....#.",
        "..####..",
        "........",
        "........",
    ]),
    ('T', [
        "........",
        ".######.",
        ".######.",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "........",
        "........",
    ]),
    ('U', [
        "........",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        "..####..",
        "........",
        "........",
    ]),
    ('V', [
        "........",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        "..#..#..",
        "..#..#..",
        "..#..#..",
        "...##...",
        "........",
        "........",
    ]),
    ('W', [
        "........",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#....#.",
        ".#.##.#.",
        ".#.##.#.",
        ".#.##.#.",
        ".##..##.",
        ".#....#.",
        "........",
        "........",
    ]),
    ('X', [
        "........",
        ".#....#.",
        "..#..#..",
        "..#..#..",
        "...##...",
        "...##...",
        "..#..#..",
        "..#..#..",
        ".#....#.",
        ".#....#.",
        "........",
        "........",
    ]),
    ('Y', [
        "........",
        ".#....#.",
        ".#....#.",
        "..#..#..",
        "..#..#..",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "........",
        "........",
    ]),
    ('Z', [
        "........",
        ".######.",
        "......#.",
        ".....#..",
        "....#...",
        "...#....",
        "..#.....",
        ".#......",
        ".#......",
        ".######.",
        "........",
        "........",
    ]),
    ('0', [
        "........",
        "..####..",
        ".#...##.",
        ".#...##.",
        ".#..#.#.",
        ".#.#..#.",
        ".##...#.",
        ".##...#.",
        ".#....#.",
        "..####..",
        "........",
        "........",
    ]),
    ('1', [
        "........",
        "....##..",
        "...###..",
        "..#.##..",
        "....##..",
        "....##..",
        "....##..",
        "....##..",
        "....##..",
        ".######.",
        "........",
        "........",
    ]),
    ('2', [
        "........",
        "..####..",
        ".#....#.",
        "......#.",
        ".....#..",
        "....#...",
        "...#....",
        "..#.....",
        ".#......",
        ".######.",
        "........",
        "........",
    ]),
    ('3', [
        "........",
        "..####..",
        ".#....#.",
        "......#.",
        "...###..",
        "......#.",
        "......#.",
        "......#.",
        ".#....#.",
        "..####..",
        "........",
        "........",
    ]),
    ('4', [
        "........",
        "....##..",
        "...###..",
        "..#.##..",
        ".#..##..",
        ".######.",
        "....##..",
        "....##..",
        "....##..",
        "....##..",
        "........",
        "........",
    ]),
    ('5', [
        "........",
        ".######.",
        ".#......",
        ".#......",
        ".#####..",
        "......#.",
        "......#.",
        "......#.",
        ".#....#.",
        "..####..",
        "........",
        "........",
    ]),
    ('6', [
        "........",
        "...###..",
        "..#.....",
        ".#......",
        ".#......",
        ".#####..",
        ".##...#.",
        ".#....#.",
        ".#....#.",
        "..####..",
        "........",
        "........",
    ]),
    ('7', [
        "........",
        ".######.",
        "......#.",
        ".....#..",
        ".....#..",
        "....#...",
        "....#...",
        "...#....",
        "...#....",
        "...#....",
        "........",
        "........",
    ]),
    ('8', [
        "........",
        "...##...",
        "..#..#..",
        "..#..#..",
        "...##...",
        "..#..#..",
        "..#..#..",
        "..#..#..",
        "..#..#..",
        "...##...",
        "........",
        "........",
    ]),
    ('9', [
        "........",
        "..####..",
        ".#....#.",
        ".#....#.",
        "..#####.",
        "......#.",
        "......#.",
        ".....#..",
        "....#...",
        "...#....",
        "........",
        "........",
    ]),
    ('.', [
        "........",
        "........",
        "........",
        "........",
        "........",
        "........",
        "........",
        "...##...",
        "...##...",
        "...##...",
        "........",
        "........",
    ]),
    (',', [
        "........",
        "........",
        "........",
        "........",
        "........",
        "........",
        "........",
        "....##..",
        "....##..",
        ".....#..",
        "....#...",
        "...#....",
    ]),
    ('-', [
        "........",
        "........",
        "........",
        "........",
        ".######.",
        ".######.",
        "........",
        "........",
        "........",
        "........",
        "........",
        "........",
    ]),
    (':', [
        "........",
        "........",
        "...##...",
        "...##...",
        "........",
        "........",
        "........",
        "...##...",
        "...##...",
        "........",
        "........",
        "........",
    ]),
    ('/', [
        "........",
        "......#.",
        "......#.",
        ".....#..",
        ".....#..",
        "....#...",
        "...#....",
        "..#.....",
        "..#.....",
        ".#......",
        "........",
        "........",
    ]),
    (' ', [
        "........",
        "........",
        "........",
        "........",
        "........",
        "........",
        "........",
        "........",
        "........",
        "........",
        "........",
        "........",
    ]),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atlas_covers_the_declared_alphabet() {
        let atlas = GlyphAtlas::builtin();
        assert_eq!(atlas.alphabet(), ALPHABET);
        for ch in ALPHABET.chars() {
            assert!(atlas.glyph(ch).is_some(), "missing {ch:?}");
        }
        assert!(atlas.glyph('a').is_none());
    }

    #[test]
    fn glyphs_keep_a_minimum_pairwise_distance() {
        // classification margin under salt-and-pepper noise comes from the
        // bitmaps staying at least this many pixels apart
        let atlas = GlyphAtlas::builtin();
        for (i, a) in atlas.glyphs().iter().enumerate() {
            for b in atlas.glyphs().iter().skip(i + 1) {
                let mut dist = 0;
                for y in 0..CELL_HEIGHT {
                    for x in 0..CELL_WIDTH {
                        if a.is_ink(x, y) != b.is_ink(x, y) {
                            dist += 1;
                        }
                    }
                }
                assert!(dist >= 6, "{:?} and {:?} differ by only {dist} px", a.ch, b.ch);
            }
        }
    }

    #[test]
    fn every_visible_glyph_has_enough_ink() {
        // the blank-cell cutoff in the fixture engine is 5 ink pixels
        let atlas = GlyphAtlas::builtin();
        for g in atlas.glyphs() {
            if g.ch != ' ' {
                assert!(g.ink_count() >= 6, "{:?} has only {} ink px", g.ch, g.ink_count());
            }
        }
        assert_eq!(atlas.glyph(' ').unwrap().ink_count(), 0);
    }
}
