use core::fmt;

use crate::graph::{Edge, NodeId};

/// Errors raised by the detection core.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Image dimensions are zero or do not match the pixel buffer.
    Dimensions { rows: usize, cols: usize, len: usize },
    /// Every pixel has the same intensity, so no automatic threshold exists.
    DegenerateHistogram,
    /// The node id is out of range or was removed.
    InvalidNode(NodeId),
    /// The edge is not present in the graph.
    MissingEdge(Edge),
    /// A node without neighbours reached classification; despeckling missed it.
    IsolatedNode(NodeId),
    /// A segmentation invariant failed. This signals a bug, not bad input.
    Invariant(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimensions { rows, cols, len } => {
                write!(f, "invalid image dimensions {rows}x{cols} for {len} pixels")
            }
            Error::DegenerateHistogram => {
                f.write_str("constant image: histogram has a single class, pick a threshold or polarity")
            }
            Error::InvalidNode(u) => write!(f, "invalid node {u}"),
            Error::MissingEdge(e) => write!(f, "missing edge ({}, {})", e.u, e.v),
            Error::IsolatedNode(u) => write!(f, "node {u} has no neighbours"),
            Error::Invariant(what) => write!(f, "internal invariant violated: {what}"),
        }
    }
}

impl core::error::Error for Error {}
