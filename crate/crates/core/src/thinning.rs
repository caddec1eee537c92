//! Zhang-Suen parallel thinning.
//!
//! Neighbours of a centre pixel are labelled clockwise from north:
//!
//! ```text
//! P9 P2 P3
//! P8 P1 P4
//! P7 P6 P5
//! ```
//!
//! Each pass runs two subiterations. A foreground pixel is marked when it has
//! between 2 and 6 foreground neighbours, exactly one 0->1 transition around
//! the ring P2..P9,P2, and the subiteration's pair of "one of three is
//! background" tests holds (`P2*P4*P6`, `P4*P6*P8` first, then `P2*P4*P8`,
//! `P2*P6*P8`). Marks are applied together once the scan finishes.

use alloc::vec;
use alloc::vec::Vec;

use crate::image::BinaryImage;

/// Clockwise offsets P2..P9 in a padded row-major buffer of width `w`.
fn ring_offsets(w: isize) -> [isize; 8] {
    [-w, -w + 1, 1, w + 1, w, w - 1, -1, -w - 1]
}

/// Thins `img` to a one-pixel-wide skeleton. Pixels outside the image are
/// background.
pub fn thin_zhang_suen(img: &BinaryImage) -> BinaryImage {
    let (rows, cols) = (img.rows(), img.cols());
    let w = cols + 2;
    let mut grid = vec![0u8; (rows + 2) * w];
    let mut live: Vec<usize> = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if img.get(r, c) {
                let idx = (r + 1) * w + c + 1;
                grid[idx] = 1;
                live.push(idx);
            }
        }
    }

    let ring = ring_offsets(w as isize);
    let mut marked = Vec::new();
    loop {
        let mut changed = false;
        for step in 0..2 {
            marked.clear();
            for &idx in &live {
                let n = ring.map(|o| grid[(idx as isize + o) as usize]);
                let [p2, _, p4, _, p6, _, p8, _] = n;
                let b: u8 = n.iter().sum();
                if !(2..=6).contains(&b) {
                    continue;
                }
                let a = (0..8).filter(|&i| n[i] == 0 && n[(i + 1) % 8] == 1).count();
                if a != 1 {
                    continue;
                }
                let keep = if step == 0 {
                    p2 * p4 * p6 != 0 || p4 * p6 * p8 != 0
                } else {
                    p2 * p4 * p8 != 0 || p2 * p6 * p8 != 0
                };
                if !keep {
                    marked.push(idx);
                }
            }
            if !marked.is_empty() {
                changed = true;
                for &idx in &marked {
                    grid[idx] = 0;
                }
                live.retain(|&idx| grid[idx] == 1);
            }
        }
        if !changed {
            break;
        }
    }

    let mut out = BinaryImage::empty(rows, cols).expect("dimensions come from a valid image");
    for idx in live {
        out.set(idx / w - 1, idx % w - 1, true);
    }
    out
}
