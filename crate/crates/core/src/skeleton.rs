//! Skeleton pixels as an 8-connected graph.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Graph, NodeId};
use crate::image::BinaryImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pixel {
    pub row: usize,
    pub col: usize,
}

impl Pixel {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    /// True when the two pixels touch only at a corner.
    pub fn is_diagonal_to(self, other: Pixel) -> bool {
        self.row != other.row && self.col != other.col
    }
}

/// Node `i` is the `i`-th foreground pixel in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonGraph {
    pub graph: Graph,
    pub coords: Vec<Pixel>,
    pub rows: usize,
    pub cols: usize,
}

impl SkeletonGraph {
    pub fn node_count(&self) -> usize {
        self.coords.len()
    }
}

/// Kept components and despeckled noise.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubgraphSet {
    /// Sorted node lists, ordered by minimum id.
    pub subgraphs: Vec<Vec<NodeId>>,
    /// Nodes of components at or below the speckle threshold, sorted.
    pub noise: Vec<NodeId>,
}

pub fn build_skeleton_graph(skel: &BinaryImage) -> SkeletonGraph {
    let (rows, cols) = (skel.rows(), skel.cols());
    let mut index = vec![usize::MAX; rows * cols];
    let mut coords = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if skel.get(r, c) {
                index[r * cols + c] = coords.len();
                coords.push(Pixel::new(r, c));
            }
        }
    }

    let mut graph = Graph::new(coords.len());
    // Forward half of the 8-neighbourhood; each edge is visited once.
    const FORWARD: [(isize, isize); 4] = [(0, 1), (1, -1), (1, 0), (1, 1)];
    for (u, p) in coords.iter().enumerate() {
        for (dr, dc) in FORWARD {
            let (r, c) = (p.row as isize + dr, p.col as isize + dc);
            if r < 0 || c < 0 || r as usize >= rows || c as usize >= cols {
                continue;
            }
            let v = index[r as usize * cols + c as usize];
            if v != usize::MAX {
                graph.add_edge(u, v).expect("ids come from the pixel index");
            }
        }
    }
    SkeletonGraph { graph, coords, rows, cols }
}

/// Splits into connected components; components with at most
/// `speckle_threshold` nodes become noise.
pub fn split_and_despeckle(sg: &SkeletonGraph, speckle_threshold: usize) -> SubgraphSet {
    let mut out = SubgraphSet::default();
    for comp in sg.graph.connected_components() {
        if comp.len() > speckle_threshold {
            out.subgraphs.push(comp);
        } else {
            out.noise.extend(comp);
        }
    }
    out.noise.sort_unstable();
    out
}
