//! Small geometry types shared by every stage.

/// Axis-aligned rectangle in pixel coordinates, origin at the top left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x: u32,
    pub y: u32,
    pub width: u32,
    pub height: u32,
}

impl Rect {
    pub fn new(x: u32, y: u32, width: u32, height: u32) -> Self {
        Rect {
            x,
            y,
            width,
            height,
        }
    }

    /// One past the rightmost column.
    pub fn right(&self) -> u32 {
        self.x + self.width
    }

    /// One past the bottom row.
    pub fn bottom(&self) -> u32 {
        self.y + self.height
    }

    pub fn area(&self) -> u64 {
        self.width as u64 * self.height as u64
    }

    pub fn is_empty(&self) -> bool {
        self.width == 0 || self.height == 0
    }

    pub fn contains(&self, x: u32, y: u32) -> bool {
        x >= self.x && x < self.right() && y >= self.y && y < self.bottom()
    }

    /// True when the rectangle lies entirely inside a `width` x `height` image.
    pub fn fits_within(&self, width: u32, height: u32) -> bool {
        self.right() <= width && self.bottom() <= height
    }

    /// Intersect with the image bounds, possibly producing an empty rect.
    pub fn clipped_to(&self, width: u32, height: u32) -> Rect {
        let x = self.x.min(width);
        let y = self.y.min(height);
        Rect {
            x,
            y,
            width: self.right().min(width).saturating_sub(x),
            height: self.bottom().min(height).saturating_sub(y),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clip_shrinks_out_of_range_rects() {
        let r = Rect::new(8, 8, 10, 10).clipped_to(12, 12);
        assert_eq!(r, Rect::new(8, 8, 4, 4));
        assert!(Rect::new(20, 20, 5, 5).clipped_to(12, 12).is_empty());
    }

    #[test]
    fn fits_within_is_inclusive_of_the_far_edge() {
        assert!(Rect::new(0, 0, 12, 12).fits_within(12, 12));
        assert!(!Rect::new(1, 0, 12, 12).fits_within(12, 12));
    }
}
