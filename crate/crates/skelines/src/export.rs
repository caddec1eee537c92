//! JSON and SVG views of a [`DetectionResult`].
//!
//! The JSON document is versioned (`schema_version: "1"`) and carries
//! everything needed to rebuild the result exactly; see [`ResultDocument`].

use std::fmt::Write as _;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use skelines_core::{DetectionResult, Edge, Metrics, NodeClass, NodeId, PathKind, PathSeq, Pixel, StageTimes, SubgraphRecord};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: String,
    pub image: ImageDims,
    pub nodes: Vec<NodeDoc>,
    pub paths: Vec<PathDoc>,
    pub removed_edges: Vec<[NodeId; 2]>,
    pub cliques: Vec<[NodeId; 3]>,
    pub endpoints: Vec<NodeId>,
    pub noise: Vec<NodeId>,
    pub subgraphs: Vec<SubgraphDoc>,
    pub span_ok: bool,
    pub metrics: MetricsDoc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageDims {
    pub rows: usize,
    pub cols: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeClassDoc {
    Terminal,
    Turning,
    Junction,
    /// Member of a despeckled component.
    Noise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub id: NodeId,
    pub row: usize,
    pub col: usize,
    pub class: NodeClassDoc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathKindDoc {
    Open,
    Cycle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathDoc {
    pub kind: PathKindDoc,
    pub node_ids: Vec<NodeId>,
}

/// Per-subgraph record. Its paths are `paths[path_range[0]..path_range[1]]`
/// of the document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgraphDoc {
    pub nodes: Vec<NodeId>,
    pub initial_junctions: Vec<NodeId>,
    pub junctions: Vec<NodeId>,
    pub terminals: Vec<NodeId>,
    pub endpoints: Vec<NodeId>,
    pub removed_edges: Vec<[NodeId; 2]>,
    pub cliques: Vec<[NodeId; 3]>,
    pub path_range: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsDoc {
    pub junctions: usize,
    pub terminals: usize,
    pub endpoints: usize,
    pub nodes: usize,
    pub endpoint_fraction: f64,
    pub image_pixels: usize,
    pub skeleton_fraction: f64,
    pub runtime_ns: RuntimeDoc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuntimeDoc {
    pub preprocess: u64,
    pub build: u64,
    pub simplify: u64,
    pub segment: u64,
    pub merge: u64,
    pub total: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum ExportError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid document: {0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> ExportError {
    ExportError::Invalid(msg.into())
}

fn edge_pair(e: &Edge) -> [NodeId; 2] {
    [e.u, e.v]
}

fn nanos(d: Duration) -> u64 {
    u64::try_from(d.as_nanos()).unwrap_or(u64::MAX)
}

impl From<&Metrics> for MetricsDoc {
    fn from(m: &Metrics) -> Self {
        let t = &m.runtime;
        Self {
            junctions: m.junction_count,
            terminals: m.terminal_count,
            endpoints: m.endpoint_count,
            nodes: m.node_count,
            endpoint_fraction: m.endpoint_fraction,
            image_pixels: m.image_pixel_count,
            skeleton_fraction: m.skeleton_pixel_fraction,
            runtime_ns: RuntimeDoc {
                preprocess: nanos(t.preprocess),
                build: nanos(t.build),
                simplify: nanos(t.simplify),
                segment: nanos(t.segment),
                merge: nanos(t.merge),
                total: nanos(t.total),
            },
        }
    }
}

impl From<&MetricsDoc> for Metrics {
    fn from(m: &MetricsDoc) -> Self {
        let t = &m.runtime_ns;
        Self {
            junction_count: m.junctions,
            terminal_count: m.terminals,
            endpoint_count: m.endpoints,
            node_count: m.nodes,
            endpoint_fraction: m.endpoint_fraction,
            image_pixel_count: m.image_pixels,
            skeleton_pixel_fraction: m.skeleton_fraction,
            runtime: StageTimes {
                preprocess: Duration::from_nanos(t.preprocess),
                build: Duration::from_nanos(t.build),
                simplify: Duration::from_nanos(t.simplify),
                segment: Duration::from_nanos(t.segment),
                merge: Duration::from_nanos(t.merge),
                total: Duration::from_nanos(t.total),
            },
        }
    }
}

impl From<&DetectionResult> for ResultDocument {
    fn from(r: &DetectionResult) -> Self {
        let nodes = r
            .coords
            .iter()
            .zip(&r.classes)
            .enumerate()
            .map(|(id, (p, c))| NodeDoc {
                id,
                row: p.row,
                col: p.col,
                class: match c {
                    Some(NodeClass::Terminal) => NodeClassDoc::Terminal,
                    Some(NodeClass::Turning) => NodeClassDoc::Turning,
                    Some(NodeClass::Junction) => NodeClassDoc::Junction,
                    None => NodeClassDoc::Noise,
                },
            })
            .collect();
        let paths = r
            .paths
            .iter()
            .map(|p| PathDoc {
                kind: match p.kind {
                    PathKind::Open => PathKindDoc::Open,
                    PathKind::Cycle => PathKindDoc::Cycle,
                },
                node_ids: p.nodes.clone(),
            })
            .collect();
        let mut next = 0;
        let subgraphs = r
            .subgraphs
            .iter()
            .map(|s| {
                let range = [next, next + s.paths.len()];
                next = range[1];
                SubgraphDoc {
                    nodes: s.nodes.clone(),
                    initial_junctions: s.initial_junctions.clone(),
                    junctions: s.junctions.clone(),
                    terminals: s.terminals.clone(),
                    endpoints: s.endpoints.clone(),
                    removed_edges: s.removed_edges.iter().map(edge_pair).collect(),
                    cliques: s.cliques.clone(),
                    path_range: range,
                }
            })
            .collect();
        Self {
            schema_version: SCHEMA_VERSION.into(),
            image: ImageDims { rows: r.rows, cols: r.cols },
            nodes,
            paths,
            removed_edges: r.removed_edges.iter().map(edge_pair).collect(),
            cliques: r.cliques.clone(),
            endpoints: r.endpoints.clone(),
            noise: r.noise_nodes.clone(),
            subgraphs,
            span_ok: r.span_ok,
            metrics: MetricsDoc::from(&r.metrics),
        }
    }
}

impl ResultDocument {
    /// Rebuilds the result, checking that every id reference resolves.
    pub fn to_result(&self) -> Result<DetectionResult, ExportError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(invalid(format!("unsupported schema_version {:?}", self.schema_version)));
        }
        let n = self.nodes.len();
        let check = |u: NodeId| if u < n { Ok(u) } else { Err(invalid(format!("node id {u} out of range"))) };
        let check_all = |ids: &[NodeId]| ids.iter().try_for_each(|&u| check(u).map(|_| ()));
        let edge = |[u, v]: [NodeId; 2]| {
            check(u)?;
            check(v)?;
            if u == v {
                return Err(invalid(format!("self-loop edge [{u}, {u}]")));
            }
            Ok(Edge::new(u, v))
        };

        let mut coords = Vec::with_capacity(n);
        let mut classes = Vec::with_capacity(n);
        for (i, node) in self.nodes.iter().enumerate() {
            if node.id != i {
                return Err(invalid(format!("node at index {i} has id {}", node.id)));
            }
            if node.row >= self.image.rows || node.col >= self.image.cols {
                return Err(invalid(format!("node {i} lies outside the image")));
            }
            coords.push(Pixel::new(node.row, node.col));
            classes.push(match node.class {
                NodeClassDoc::Terminal => Some(NodeClass::Terminal),
                NodeClassDoc::Turning => Some(NodeClass::Turning),
                NodeClassDoc::Junction => Some(NodeClass::Junction),
                NodeClassDoc::Noise => None,
            });
        }

        let mut paths = Vec::with_capacity(self.paths.len());
        for p in &self.paths {
            check_all(&p.node_ids)?;
            paths.push(PathSeq {
                kind: match p.kind {
                    PathKindDoc::Open => PathKind::Open,
                    PathKindDoc::Cycle => PathKind::Cycle,
                },
                nodes: p.node_ids.clone(),
            });
        }

        let mut subgraphs = Vec::with_capacity(self.subgraphs.len());
        for s in &self.subgraphs {
            for ids in [&s.nodes, &s.initial_junctions, &s.junctions, &s.terminals, &s.endpoints] {
                check_all(ids)?;
            }
            s.cliques.iter().try_for_each(|c| check_all(c))?;
            let [a, b] = s.path_range;
            if a > b || b > paths.len() {
                return Err(invalid(format!("path_range [{a}, {b}] out of range")));
            }
            let classes = s
                .nodes
                .iter()
                .map(|&u| classes[u].ok_or_else(|| invalid(format!("subgraph node {u} is marked noise"))))
                .collect::<Result<_, _>>()?;
            subgraphs.push(SubgraphRecord {
                nodes: s.nodes.clone(),
                classes,
                initial_junctions: s.initial_junctions.clone(),
                junctions: s.junctions.clone(),
                terminals: s.terminals.clone(),
                endpoints: s.endpoints.clone(),
                removed_edges: s.removed_edges.iter().map(|&e| edge(e)).collect::<Result<_, _>>()?,
                cliques: s.cliques.clone(),
                paths: paths[a..b].to_vec(),
            });
        }

        check_all(&self.endpoints)?;
        check_all(&self.noise)?;
        self.cliques.iter().try_for_each(|c| check_all(c))?;
        Ok(DetectionResult {
            rows: self.image.rows,
            cols: self.image.cols,
            coords,
            classes,
            paths,
            endpoints: self.endpoints.clone(),
            removed_edges: self.removed_edges.iter().map(|&e| edge(e)).collect::<Result<_, _>>()?,
            cliques: self.cliques.clone(),
            noise_nodes: self.noise.clone(),
            subgraphs,
            metrics: Metrics::from(&self.metrics),
            span_ok: self.span_ok,
        })
    }
}

pub fn to_json(result: &DetectionResult) -> String {
    serde_json::to_string_pretty(&ResultDocument::from(result)).expect("document is always serializable")
}

pub fn from_json(text: &str) -> Result<DetectionResult, ExportError> {
    serde_json::from_str::<ResultDocument>(text)?.to_result()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgStyle {
    pub stroke_width: f64,
    pub palette_seed: u64,
    pub endpoint_radius: f64,
}

impl Default for SvgStyle {
    fn default() -> Self {
        Self { stroke_width: 0.5, palette_seed: 0, endpoint_radius: 0.6 }
    }
}

/// Distinct colors: hues stepped by the golden angle from a seeded start.
fn palette(seed: u64, n: usize) -> Vec<String> {
    let start: f64 = ChaCha8Rng::seed_from_u64(seed).gen_range(0.0..360.0);
    (0..n)
        .map(|i| format!("hsl({:.1},80%,45%)", (start + i as f64 * 137.507_764) % 360.0))
        .collect()
}

fn points(result: &DetectionResult, path: &PathSeq) -> String {
    let mut s = String::new();
    for (i, &u) in path.nodes.iter().enumerate() {
        let p = result.coords[u];
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{},{}", p.col, p.row).expect("writing to a String");
    }
    s
}

/// One `<polyline>` per open path and one `<polygon>` per cycle, in path
/// order, followed by a circle on every endpoint. Pixel centers sit on
/// integer (col, row) coordinates.
pub fn to_svg(result: &DetectionResult, style: &SvgStyle) -> String {
    let (w, h) = (result.cols, result.rows);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="-0.5 -0.5 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect x="-0.5" y="-0.5" width="{w}" height="{h}" fill="white"/>"#);
    let colors = palette(style.palette_seed, result.paths.len());
    let _ = writeln!(s, r#"<g fill="none" stroke-width="{}" stroke-linejoin="round" stroke-linecap="round">"#, style.stroke_width);
    for (path, color) in result.paths.iter().zip(&colors) {
        let tag = if path.is_cycle() { "polygon" } else { "polyline" };
        let _ = writeln!(s, r#"<{tag} stroke="{color}" points="{}"/>"#, points(result, path));
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g fill="black">"#);
    for &u in &result.endpoints {
        let p = result.coords[u];
        let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="{}"/>"#, p.col, p.row, style.endpoint_radius);
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}
