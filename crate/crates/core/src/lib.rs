//! Raster-to-vector line detection over image skeleton graphs.
//!
//! The pipeline binarizes a grayscale image, thins it to a one-pixel
//! skeleton, turns the skeleton into an 8-connected pixel graph, simplifies
//! junction clusters by dropping the diagonal chords of junction triangles,
//! and finally segments every connected subgraph into open paths and cycles
//! that start and end at terminals or primary junctions.
//!
//! Everything in this crate is pure and allocation-only (`no_std` + `alloc`).
//! Decoding, serialization and timing sources live in the `skelines` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;
pub mod graph;
pub mod image;
pub mod pipeline;
pub mod segment;
pub mod simplify;
pub mod skeleton;
pub mod thinning;

pub use error::Error;
pub use graph::{Edge, Graph, NodeId};
pub use image::{binarize_fixed, binarize_otsu, invert, otsu_threshold, BinaryImage, GrayImage, Polarity};
pub use pipeline::{
    compute_metrics, detect_from_gray, detect_lines, detect_lines_with, merge_subgraphs, process_subgraph, Clock,
    DetectionResult, GrayOptions, Metrics, NullClock, StageTimes, SubgraphRecord,
    DEFAULT_SPECKLE_THRESHOLD,
};
pub use segment::{segment_subgraph, verify_span, PathKind, PathSeq, SegmentationOutcome};
pub use simplify::{
    classify_nodes, junction_triangles, select_removable_edges, simplify_subgraph, NodeClass,
    SimplifiedSubgraph,
};
pub use skeleton::{build_skeleton_graph, split_and_despeckle, Pixel, SkeletonGraph, SubgraphSet};
pub use thinning::thin_zhang_suen;

pub type Result<T, E = Error> = core::result::Result<T, E>;
