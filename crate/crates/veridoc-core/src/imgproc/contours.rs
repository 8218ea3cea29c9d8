//! Outer-boundary extraction for 8-connected foreground components.

use alloc::vec;
use alloc::vec::Vec;

use super::{BinaryImage, Contour};
use crate::geom::Rect;

/// Clockwise 8-neighborhood ring starting East.
const RING: [(i64, i64); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];

fn ring_index(dx: i64, dy: i64) -> usize {
    RING.iter()
        .position(|&(x, y)| x == dx && y == dy)
        .expect("offset must be an 8-neighbor")
}

struct Component {
    start: (u32, u32),
    scan_index: usize,
    bbox: Rect,
    area: u32,
}

/// One contour per 8-connected foreground component, ordered top-to-bottom
/// then left-to-right by bounding-box origin. Boundary points come from
/// Moore border following around the component's outer edge; inner holes are
/// not reported. `area` counts the component's foreground pixels.
pub fn find_contours(img: &BinaryImage) -> Vec<Contour> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let mut labeled = vec![false; w * h];
    let mut components: Vec<Component> = Vec::new();

    for start_idx in 0..w * h {
        let sx = (start_idx % w) as u32;
        let sy = (start_idx / w) as u32;
        if labeled[start_idx] || !img.is_foreground(sx, sy) {
            continue;
        }

        // Flood-fill the 8-connected component to get its extent and area.
        let mut stack = vec![(sx, sy)];
        labeled[start_idx] = true;
        let (mut min_x, mut min_y, mut max_x, mut max_y) = (sx, sy, sx, sy);
        let mut area = 0u32;
        while let Some((x, y)) = stack.pop() {
            area += 1;
            min_x = min_x.min(x);
            min_y = min_y.min(y);
            max_x = max_x.max(x);
            max_y = max_y.max(y);
            for &(dx, dy) in &RING {
                let nx = x as i64 + dx;
                let ny = y as i64 + dy;
                if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                    continue;
                }
                let ni = ny as usize * w + nx as usize;
                if !labeled[ni] && img.is_foreground(nx as u32, ny as u32) {
                    labeled[ni] = true;
                    stack.push((nx as u32, ny as u32));
                }
            }
        }

        components.push(Component {
            start: (sx, sy),
            scan_index: start_idx,
            bbox: Rect::new(min_x, min_y, max_x - min_x + 1, max_y - min_y + 1),
            area,
        });
    }

    components.sort_by_key(|c| (c.bbox.y, c.bbox.x, c.scan_index));
    components
        .into_iter()
        .map(|c| Contour {
            points: trace_boundary(img, c.start, c.area),
            bounding_box: c.bbox,
            area: c.area,
        })
        .collect()
}

/// Moore border following starting at the component's topmost-leftmost
/// pixel, which scan order guarantees is entered from the West.
fn trace_boundary(img: &BinaryImage, start: (u32, u32), area: u32) -> Vec<(u32, u32)> {
    let (w, h) = (img.width() as i64, img.height() as i64);
    let fg = |x: i64, y: i64| x >= 0 && y >= 0 && x < w && y < h && img.is_foreground(x as u32, y as u32);

    let start_pos = (start.0 as i64, start.1 as i64);
    let initial_backtrack = ring_index(-1, 0); // West
    let mut points = vec![start];
    let mut cur = start_pos;
    let mut backtrack = initial_backtrack;

    // Each boundary pixel is visited at most four times; the cap only guards
    // against implementation bugs.
    let max_steps = 8 * area as usize + 16;
    for _ in 0..max_steps {
        let mut found = None;
        for k in 1..=8 {
            let dir = (backtrack + k) % 8;
            let (dx, dy) = RING[dir];
            if fg(cur.0 + dx, cur.1 + dy) {
                found = Some((dir, k));
                break;
            }
        }
        let Some((dir, k)) = found else {
            return points; // isolated pixel
        };

        // The neighbor checked just before the hit is background; seen from
        // the new pixel it becomes the next backtrack direction.
        let prev_dir = (backtrack + k - 1) % 8;
        let (bx, by) = RING[prev_dir];
        let background = (cur.0 + bx, cur.1 + by);
        let (dx, dy) = RING[dir];
        cur = (cur.0 + dx, cur.1 + dy);
        backtrack = ring_index(background.0 - cur.0, background.1 - cur.1);

        if cur == start_pos && backtrack == initial_backtrack {
            return points; // full cycle
        }
        points.push((cur.0 as u32, cur.1 as u32));
    }
    points
}
