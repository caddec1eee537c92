//! End-to-end detection: skeleton graph, per-subgraph simplification and
//! segmentation, merge, span check and metrics.
//!
//! Each subgraph is processed independently by [`process_subgraph`], which
//! is pure; the merge only concatenates records in subgraph order. Any
//! executor that returns records ordered by subgraph index (sequential or
//! parallel) therefore produces the same [`DetectionResult`].

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::time::Duration;

use crate::graph::{Edge, NodeId};
use crate::image::{binarize_fixed, binarize_otsu, invert, BinaryImage, GrayImage, Polarity};
use crate::segment::{segment_subgraph, verify_span, PathSeq};
use crate::simplify::{simplify_subgraph, NodeClass};
use crate::skeleton::{build_skeleton_graph, split_and_despeckle, Pixel, SkeletonGraph, SubgraphSet};
use crate::thinning::thin_zhang_suen;
use crate::{Error, Result};

/// Components with at most this many nodes are treated as speckle.
pub const DEFAULT_SPECKLE_THRESHOLD: usize = 2;

/// Monotonic time source used for stage timings.
pub trait Clock {
    fn now(&self) -> Duration;
}

/// Clock that never advances; all stage timings come out as zero.
#[derive(Debug, Clone, Copy, Default)]
pub struct NullClock;

impl Clock for NullClock {
    fn now(&self) -> Duration {
        Duration::ZERO
    }
}

/// Wall time spent per stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StageTimes {
    /// Binarization and thinning (zero when starting from a skeleton).
    pub preprocess: Duration,
    pub build: Duration,
    pub simplify: Duration,
    pub segment: Duration,
    pub merge: Duration,
    pub total: Duration,
}

/// Graph and image statistics of a detection run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Metrics {
    /// Primary junctions.
    pub junction_count: usize,
    pub terminal_count: usize,
    pub endpoint_count: usize,
    /// Skeleton pixels, noise included.
    pub node_count: usize,
    /// `endpoint_count / node_count`, 0 for an empty skeleton.
    pub endpoint_fraction: f64,
    pub image_pixel_count: usize,
    /// `node_count / image_pixel_count`.
    pub skeleton_pixel_fraction: f64,
    pub runtime: StageTimes,
}

/// Everything known about one connected subgraph.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubgraphRecord {
    /// Sorted node ids.
    pub nodes: Vec<NodeId>,
    /// Class of each node in `nodes` after simplification.
    pub classes: Vec<NodeClass>,
    pub initial_junctions: Vec<NodeId>,
    /// Primary junctions.
    pub junctions: Vec<NodeId>,
    pub terminals: Vec<NodeId>,
    pub endpoints: Vec<NodeId>,
    pub removed_edges: Vec<Edge>,
    pub cliques: Vec<[NodeId; 3]>,
    pub paths: Vec<PathSeq>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    pub rows: usize,
    pub cols: usize,
    /// Pixel of every skeleton node, indexed by node id.
    pub coords: Vec<Pixel>,
    /// Class on the simplified graph; `None` for noise.
    pub classes: Vec<Option<NodeClass>>,
    pub paths: Vec<PathSeq>,
    pub endpoints: Vec<NodeId>,
    pub removed_edges: Vec<Edge>,
    pub cliques: Vec<[NodeId; 3]>,
    pub noise_nodes: Vec<NodeId>,
    pub subgraphs: Vec<SubgraphRecord>,
    pub metrics: Metrics,
    pub span_ok: bool,
}

impl DetectionResult {
    /// Edges of the simplified skeleton graph: all 8-neighbour pixel pairs
    /// minus the removed diagonals, noise included.
    pub fn simplified_edges(&self) -> Vec<Edge> {
        let mut skel = BinaryImage::empty(self.rows, self.cols).expect("dims come from a valid image");
        for p in &self.coords {
            skel.set(p.row, p.col, true);
        }
        let removed: BTreeSet<Edge> = self.removed_edges.iter().copied().collect();
        build_skeleton_graph(&skel).graph.edges().filter(|e| !removed.contains(e)).collect()
    }
}

/// Simplifies and segments one component.
pub fn process_subgraph(sg: &SkeletonGraph, nodes: &[NodeId]) -> Result<SubgraphRecord> {
    process_timed(sg, nodes, &NullClock).map(|(r, _, _)| r)
}

fn process_timed(sg: &SkeletonGraph, nodes: &[NodeId], clock: &dyn Clock) -> Result<(SubgraphRecord, Duration, Duration)> {
    let t0 = clock.now();
    let simplified = simplify_subgraph(sg, nodes)?;
    let t1 = clock.now();
    let outcome = segment_subgraph(&simplified)?;
    let t2 = clock.now();
    if !outcome.uncovered_nodes.is_empty() {
        return Err(Error::Invariant("subgraph node not covered by any path"));
    }
    let classes = nodes
        .iter()
        .map(|&u| simplified.class_of(u).ok_or(Error::IsolatedNode(u)))
        .collect::<Result<Vec<_>>>()?;
    let record = SubgraphRecord {
        nodes: nodes.to_vec(),
        classes,
        initial_junctions: simplified.initial_junctions,
        junctions: simplified.junctions,
        terminals: simplified.terminals,
        endpoints: simplified.endpoints,
        removed_edges: simplified.removed_edges,
        cliques: simplified.cliques,
        paths: outcome.paths,
    };
    Ok((record, t1.saturating_sub(t0), t2.saturating_sub(t1)))
}

/// Concatenates per-subgraph records (given in subgraph order) into a
/// result and runs the span check. Metrics carry `runtime`.
pub fn merge_subgraphs(sg: &SkeletonGraph, set: &SubgraphSet, records: Vec<SubgraphRecord>, runtime: StageTimes) -> DetectionResult {
    let mut classes: Vec<Option<NodeClass>> = alloc::vec![None; sg.node_count()];
    let mut paths = Vec::new();
    let mut endpoints = Vec::new();
    let mut removed_edges = Vec::new();
    let mut cliques = Vec::new();
    for r in &records {
        for (&u, &c) in r.nodes.iter().zip(&r.classes) {
            classes[u] = Some(c);
        }
        paths.extend(r.paths.iter().cloned());
        endpoints.extend(r.endpoints.iter().copied());
        removed_edges.extend(r.removed_edges.iter().copied());
        cliques.extend(r.cliques.iter().copied());
    }
    let all: Vec<NodeId> = (0..sg.node_count()).collect();
    let span_ok = verify_span(&all, &set.noise, &paths);
    let mut result = DetectionResult {
        rows: sg.rows,
        cols: sg.cols,
        coords: sg.coords.clone(),
        classes,
        paths,
        endpoints,
        removed_edges,
        cliques,
        noise_nodes: set.noise.clone(),
        subgraphs: records,
        metrics: Metrics::default(),
        span_ok,
    };
    result.metrics = compute_metrics(&result, sg.rows * sg.cols, runtime);
    result
}

/// Runs detection on a skeleton with default settings and no timing.
pub fn detect_lines(skel: &BinaryImage) -> Result<DetectionResult> {
    detect_lines_with(skel, DEFAULT_SPECKLE_THRESHOLD, &NullClock)
}

/// Runs detection on a skeleton, timing each stage with `clock`.
pub fn detect_lines_with(skel: &BinaryImage, speckle_threshold: usize, clock: &dyn Clock) -> Result<DetectionResult> {
    detect_inner(skel, speckle_threshold, clock, Duration::ZERO)
}

fn detect_inner(skel: &BinaryImage, speckle_threshold: usize, clock: &dyn Clock, preprocess: Duration) -> Result<DetectionResult> {
    let start = clock.now();
    let sg = build_skeleton_graph(skel);
    let set = split_and_despeckle(&sg, speckle_threshold);
    let built = clock.now();

    let mut times = StageTimes { preprocess, build: built.saturating_sub(start), ..StageTimes::default() };
    let mut records = Vec::with_capacity(set.subgraphs.len());
    for nodes in &set.subgraphs {
        let (record, simplify, segment) = process_timed(&sg, nodes, clock)?;
        times.simplify += simplify;
        times.segment += segment;
        records.push(record);
    }

    let merge_start = clock.now();
    let mut result = merge_subgraphs(&sg, &set, records, times);
    let end = clock.now();
    result.metrics.runtime.merge = end.saturating_sub(merge_start);
    result.metrics.runtime.total = end.saturating_sub(start) + preprocess;
    Ok(result)
}

/// Preprocessing options for [`detect_from_gray`]. Detection itself has no
/// knobs beyond the speckle size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrayOptions {
    pub polarity: Polarity,
    /// Fixed threshold; Otsu when `None`.
    pub threshold: Option<u8>,
    pub invert: bool,
    /// Treat the binarized image as a skeleton and skip thinning.
    pub skip_thinning: bool,
    pub speckle_threshold: usize,
}

impl Default for GrayOptions {
    fn default() -> Self {
        Self {
            polarity: Polarity::Auto,
            threshold: None,
            invert: false,
            skip_thinning: false,
            speckle_threshold: DEFAULT_SPECKLE_THRESHOLD,
        }
    }
}

/// Binarize, optionally invert, thin, then detect.
pub fn detect_from_gray(img: &GrayImage, opts: &GrayOptions, clock: &dyn Clock) -> Result<DetectionResult> {
    let start = clock.now();
    let mut binary = match opts.threshold {
        Some(t) => binarize_fixed(img, t, opts.polarity),
        None => binarize_otsu(img, opts.polarity)?,
    };
    if opts.invert {
        binary = invert(&binary);
    }
    let skel = if opts.skip_thinning { binary } else { thin_zhang_suen(&binary) };
    let preprocess = clock.now().saturating_sub(start);
    detect_inner(&skel, opts.speckle_threshold, clock, preprocess)
}

/// Recomputes the graph statistics of `result`.
pub fn compute_metrics(result: &DetectionResult, image_pixels: usize, runtime: StageTimes) -> Metrics {
    let count = |want: NodeClass| result.classes.iter().filter(|c| **c == Some(want)).count();
    let junction_count = count(NodeClass::Junction);
    let terminal_count = count(NodeClass::Terminal);
    let endpoint_count = result.endpoints.len();
    let node_count = result.coords.len();
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    Metrics {
        junction_count,
        terminal_count,
        endpoint_count,
        node_count,
        endpoint_fraction: ratio(endpoint_count, node_count),
        image_pixel_count: image_pixels,
        skeleton_pixel_fraction: ratio(node_count, image_pixels),
        runtime,
    }
}
