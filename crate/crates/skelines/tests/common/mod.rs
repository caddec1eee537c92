//! Fixtures and independent oracles shared by the integration tests.

#![allow(dead_code)]

pub mod oracle;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skelines_core::{BinaryImage, GrayImage};

pub fn ascii(rows: &[&str]) -> BinaryImage {
    BinaryImage::from_ascii(rows).unwrap()
}

/// Two tails meeting above a loop. The junction cluster where they meet is
/// the bar-over-stem pattern: 4 initial junctions, 2 triangles.
pub fn cluster_loop_skeleton() -> BinaryImage {
    ascii(&[
        "...............",
        ".#...........#.",
        "..#.........#..",
        "...#.......#...",
        "....#######....",
        ".......#.......",
        "......#.#......",
        ".....#...#.....",
        ".....#...#.....",
        "......#.#......",
        ".......#.......",
        "...............",
    ])
}

/// A flat stroke at the top right and a tail-plus-loop at the bottom left.
pub fn lollipop_skeleton() -> BinaryImage {
    ascii(&[
        "....................",
        "...........#######..",
        "....................",
        "...#................",
        "...#................",
        "...#................",
        "...#................",
        "...#................",
        "..#.#...............",
        ".#...#..............",
        ".#...#..............",
        "..#.#...............",
        "...#................",
        "....................",
    ])
}

pub fn t_skeleton() -> BinaryImage {
    ascii(&[
        "..........",
        ".#######..",
        "....#.....",
        "....#.....",
        "....#.....",
        "....#.....",
        "....#.....",
        "..........",
        "..........",
        "..........",
    ])
}

pub fn ring_skeleton() -> BinaryImage {
    ascii(&[
        "..........",
        "...####...",
        "..#....#..",
        ".#......#.",
        ".#......#.",
        ".#......#.",
        "..#....#..",
        "...####...",
        "..........",
    ])
}

/// Many short parallel strokes: lots of terminals, no junctions.
pub fn lines_skeleton() -> BinaryImage {
    let mut img = BinaryImage::empty(40, 40).unwrap();
    for r in (2..38).step_by(3) {
        let start = 2 + (r % 7);
        for c in start..start + 20 {
            img.set(r, c, true);
        }
    }
    img
}

/// Skeleton drawn black on white.
pub fn to_gray(skel: &BinaryImage) -> GrayImage {
    let data = skel.data().iter().map(|&f| if f { 0 } else { 255 }).collect();
    GrayImage::new(skel.rows(), skel.cols(), data).unwrap()
}

/// Round-brush rasterizer over (x = col, y = row) coordinates.
pub struct Canvas {
    pub mask: BinaryImage,
}

impl Canvas {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { mask: BinaryImage::empty(rows, cols).unwrap() }
    }

    pub fn segment(&mut self, a: (f64, f64), b: (f64, f64), radius: f64) {
        let (rows, cols) = (self.mask.rows(), self.mask.cols());
        let lo_x = (a.0.min(b.0) - radius).floor().max(0.0) as usize;
        let hi_x = ((a.0.max(b.0) + radius).ceil() as usize).min(cols - 1);
        let lo_y = (a.1.min(b.1) - radius).floor().max(0.0) as usize;
        let hi_y = ((a.1.max(b.1) + radius).ceil() as usize).min(rows - 1);
        for r in lo_y..=hi_y {
            for c in lo_x..=hi_x {
                if dist_to_segment((c as f64, r as f64), a, b) <= radius {
                    self.mask.set(r, c, true);
                }
            }
        }
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], radius: f64) {
        for w in pts.windows(2) {
            self.segment(w[0], w[1], radius);
        }
    }

    pub fn disc(&mut self, center: (f64, f64), radius: f64) {
        self.segment(center, center, radius);
    }

    /// Elliptical arc from angle `a0` to `a1` (radians, y down).
    pub fn arc(&mut self, center: (f64, f64), rx: f64, ry: f64, a0: f64, a1: f64, radius: f64) {
        let steps = 64;
        let pts: Vec<(f64, f64)> = (0..=steps)
            .map(|i| {
                let t = a0 + (a1 - a0) * i as f64 / steps as f64;
                (center.0 + rx * t.cos(), center.1 + ry * t.sin())
            })
            .collect();
        self.polyline(&pts, radius);
    }

    /// Dark ink on a white page.
    pub fn to_gray(&self) -> GrayImage {
        to_gray(&self.mask)
    }
}

fn dist_to_segment(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 { 0.0 } else { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) };
    let (qx, qy) = (a.0 + t * dx, a.1 + t * dy);
    ((p.0 - qx).powi(2) + (p.1 - qy).powi(2)).sqrt()
}

use std::f64::consts::PI;

/// Handwritten-style "8" on a 28x28 canvas.
pub fn glyph28() -> GrayImage {
    let mut c = Canvas::new(28, 28);
    c.arc((14.0, 8.5), 5.0, 4.5, 0.0, 2.0 * PI, 1.6);
    c.arc((14.0, 18.5), 6.0, 5.0, 0.0, 2.0 * PI, 1.6);
    c.to_gray()
}

/// An "a": bowl plus right stem with a hooked top, on 64x64.
pub fn glyph64() -> GrayImage {
    let mut c = Canvas::new(64, 64);
    c.arc((28.0, 40.0), 12.0, 11.0, 0.0, 2.0 * PI, 3.0);
    c.polyline(&[(40.0, 52.0), (40.0, 22.0)], 3.0);
    c.arc((29.0, 22.0), 11.0, 9.0, PI, 2.0 * PI, 3.0);
    c.to_gray()
}

/// Lowercase "m" whose stems are `height` pixels tall.
pub fn m_glyph(height: f64, stroke: f64) -> GrayImage {
    let margin = stroke + 4.0;
    let arch_rx = height * 0.28;
    let arch_ry = height * 0.3;
    let top = margin;
    let bottom = top + height;
    let x0 = margin;
    let x1 = x0 + 2.0 * arch_rx;
    let x2 = x1 + 2.0 * arch_rx;
    let shoulder = top + arch_ry;
    let rows = (bottom + margin).ceil() as usize;
    let cols = (x2 + margin).ceil() as usize;
    let mut c = Canvas::new(rows, cols);
    c.polyline(&[(x0, bottom), (x0, shoulder)], stroke);
    c.arc((x0 + arch_rx, shoulder), arch_rx, arch_ry, PI, 2.0 * PI, stroke);
    c.polyline(&[(x1, shoulder), (x1, bottom)], stroke);
    c.arc((x1 + arch_rx, shoulder), arch_rx, arch_ry, PI, 2.0 * PI, stroke);
    c.polyline(&[(x2, shoulder), (x2, bottom)], stroke);
    c.to_gray()
}

/// White canvas with one dark stroke three pixels thick along the diagonal.
pub fn diagonal_stroke() -> GrayImage {
    let mut img = GrayImage::filled(24, 24, 255).unwrap();
    for i in 3..21 {
        for d in 0..3usize {
            img.set(i, i + d - 1, 0);
        }
    }
    img
}

/// Band boundaries of a smooth field: a dense contour map.
pub fn dense_contours(size: usize) -> GrayImage {
    let f = |r: usize, c: usize| {
        let (x, y) = (c as f64, r as f64);
        (x * 0.031).sin() * (y * 0.027).cos() + 0.6 * ((x + 2.0 * y) * 0.013).sin() + 0.4 * (x * 0.05 - y * 0.021).cos()
    };
    let band = |r: usize, c: usize| (f(r, c) / 0.11).floor() as i64;
    let mut img = GrayImage::filled(size, size, 0).unwrap();
    for r in 0..size {
        for c in 0..size {
            let b = band(r, c);
            let edge = (r + 1 < size && band(r + 1, c) != b) || (c + 1 < size && band(r, c + 1) != b);
            if edge {
                img.set(r, c, 255);
            }
        }
    }
    img
}

/// Union of thick discs and strokes on a `rows x cols` grid.
pub fn random_blob(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> BinaryImage {
    let mut c = Canvas::new(rows, cols);
    let point = |rng: &mut ChaCha8Rng| (rng.gen_range(0.0..cols as f64), rng.gen_range(0.0..rows as f64));
    for _ in 0..rng.gen_range(1..=4) {
        if rng.gen_bool(0.4) {
            let p = point(rng);
            c.disc(p, rng.gen_range(1.5..3.5));
        } else {
            let (a, b) = (point(rng), point(rng));
            c.segment(a, b, rng.gen_range(1.5..2.5));
        }
    }
    c.mask
}

/// Seeded corpus of random blobs over grids from 6x6 up to 16x16.
pub fn random_blob_corpus(n: usize, seed: u64) -> Vec<BinaryImage> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let (r, c) = (rng.gen_range(6..=16), rng.gen_range(6..=16));
            random_blob(&mut rng, r, c)
        })
        .collect()
}

/// Thick hand-checkable shapes: bars, L, T, plus, rings at 3 to 5 px.
pub fn thick_shapes() -> Vec<(String, BinaryImage)> {
    let mut out = Vec::new();
    let fill = |rows: usize, cols: usize, rects: &[(usize, usize, usize, usize)]| {
        let mut img = BinaryImage::empty(rows, cols).unwrap();
        for &(r0, c0, h, w) in rects {
            for r in r0..r0 + h {
                for c in c0..c0 + w {
                    img.set(r, c, true);
                }
            }
        }
        img
    };
    for t in 3..=5usize {
        out.push((format!("hbar{t}"), fill(t + 4, 20, &[(2, 2, t, 16)])));
        out.push((format!("vbar{t}"), fill(20, t + 4, &[(2, 2, 16, t)])));
        out.push((format!("L{t}"), fill(20, 20, &[(2, 2, 16, t), (18 - t, 2, t, 16)])));
        out.push((format!("T{t}"), fill(20, 20, &[(2, 2, t, 16), (2, 10 - t / 2, 16, t)])));
        out.push((format!("plus{t}"), fill(21, 21, &[(10 - t / 2, 2, t, 17), (2, 10 - t / 2, 17, t)])));
        out.push((format!("square_ring{t}"), {
            let s = 2 * t + 8;
            fill(s + 4, s + 4, &[(2, 2, t, s), (s + 2 - t, 2, t, s), (2, 2, s, t), (2, s + 2 - t, s, t)])
        }));
        let mut ring = BinaryImage::empty(24, 24).unwrap();
        let outer = 9.0;
        for r in 0..24 {
            for c in 0..24 {
                let d = ((r as f64 - 11.5).powi(2) + (c as f64 - 11.5).powi(2)).sqrt();
                if d <= outer && d > outer - t as f64 {
                    ring.set(r, c, true);
                }
            }
        }
        out.push((format!("ring{t}"), ring));
        let mut diag = BinaryImage::empty(22, 22).unwrap();
        for i in 2..19usize {
            for d in 0..t {
                diag.set(i, i + d, true);
            }
        }
        out.push((format!("diag{t}"), diag));
    }
    out.push(("H3".into(), fill(20, 20, &[(2, 2, 16, 3), (2, 15, 16, 3), (9, 2, 3, 16)])));
    out
}

/// Every pixel of `img` in a fresh 8-connected flood fill.
pub fn component_count(img: &BinaryImage) -> usize {
    let (rows, cols) = (img.rows(), img.cols());
    let mut seen = vec![false; rows * cols];
    let mut count = 0;
    for start in 0..rows * cols {
        if !img.data()[start] || seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let (r, c) = ((i / cols) as isize, (i % cols) as isize);
            for dr in -1..=1 {
                for dc in -1..=1 {
                    if img.get_or_background(r + dr, c + dc) {
                        let j = (r + dr) as usize * cols + (c + dc) as usize;
                        if !seen[j] {
                            seen[j] = true;
                            stack.push(j);
                        }
                    }
                }
            }
        }
    }
    count
}
