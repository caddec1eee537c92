//! Junction-triangle simplification and segmentation endpoints.
//!
//! Junction pixels that crowd together form 3-cliques in the 8-connected
//! graph. Each such triangle has exactly one diagonal chord (three pixels
//! that touch pairwise fit in a 2x2 box); dropping those chords removes the
//! short-cuts that would otherwise make paths double back. Node classes are
//! then recomputed: a junction left with two neighbours becomes a turning
//! node, and the surviving junctions are the primary junctions.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::graph::{Edge, Graph, NodeId};
use crate::skeleton::{Pixel, SkeletonGraph};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeClass {
    /// Exactly one neighbour.
    Terminal,
    /// Exactly two neighbours; never splits a path.
    Turning,
    /// Three or more neighbours.
    Junction,
}

impl NodeClass {
    pub fn from_degree(degree: usize) -> Option<Self> {
        match degree {
            0 => None,
            1 => Some(NodeClass::Terminal),
            2 => Some(NodeClass::Turning),
            _ => Some(NodeClass::Junction),
        }
    }

    /// Terminals and junctions delimit paths.
    pub fn is_endpoint(self) -> bool {
        self != NodeClass::Turning
    }
}

/// Classifies `nodes` by degree. A degree-0 node is a contract violation
/// (despeckling should have removed it).
pub fn classify_nodes(g: &Graph, nodes: &[NodeId]) -> Result<BTreeMap<NodeId, NodeClass>> {
    nodes
        .iter()
        .map(|&u| {
            let class = NodeClass::from_degree(g.degree(u)?).ok_or(Error::IsolatedNode(u))?;
            Ok((u, class))
        })
        .collect()
}

/// Triangles of the subgraph induced on `junctions`.
pub fn junction_triangles(g: &Graph, junctions: &BTreeSet<NodeId>) -> Vec<[NodeId; 3]> {
    let mut out = Vec::new();
    for &u in junctions {
        for &v in g.neighbors(u).iter().filter(|&&v| v > u && junctions.contains(&v)) {
            for &w in g.neighbors(v).iter().filter(|&&w| w > v && junctions.contains(&w)) {
                if g.has_edge(u, w) {
                    out.push([u, v, w]);
                }
            }
        }
    }
    out
}

/// Diagonal edges of the given triangles, deduplicated and sorted.
///
/// A triangle without a diagonal edge cannot come from pixel geometry; it is
/// skipped with a warning.
pub fn select_removable_edges(triangles: &[[NodeId; 3]], coords: impl Fn(NodeId) -> Pixel) -> Vec<Edge> {
    let mut out = BTreeSet::new();
    for &[a, b, c] in triangles {
        let mut found = false;
        for (x, y) in [(a, b), (b, c), (a, c)] {
            if coords(x).is_diagonal_to(coords(y)) {
                out.insert(Edge::new(x, y));
                found = true;
            }
        }
        if !found {
            log::warn!("triangle {:?} has no diagonal edge; not a pixel triangle", [a, b, c]);
        }
    }
    out.into_iter().collect()
}

/// One connected subgraph after diagonal removal.
///
/// `graph` uses local ids `0..ids.len()`, where local `i` is global
/// `ids[i]`. Every other field holds global ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplifiedSubgraph {
    pub ids: Vec<NodeId>,
    pub graph: Graph,
    pub removed_edges: Vec<Edge>,
    pub cliques: Vec<[NodeId; 3]>,
    /// Junctions before simplification.
    pub initial_junctions: Vec<NodeId>,
    /// Primary junctions.
    pub junctions: Vec<NodeId>,
    pub terminals: Vec<NodeId>,
    /// `junctions ∪ terminals`, sorted.
    pub endpoints: Vec<NodeId>,
}

impl SimplifiedSubgraph {
    /// Simplifies a local graph. `ids` maps local ids to global ids and must
    /// be ascending; `coords` takes local ids.
    pub fn simplify(ids: Vec<NodeId>, mut graph: Graph, coords: impl Fn(NodeId) -> Pixel) -> Result<Self> {
        let local: Vec<NodeId> = graph.nodes().collect();
        let classes = classify_nodes(&graph, &local)?;
        let junctions: BTreeSet<NodeId> =
            classes.iter().filter(|(_, &c)| c == NodeClass::Junction).map(|(&u, _)| u).collect();
        let triangles = junction_triangles(&graph, &junctions);
        let removable = select_removable_edges(&triangles, coords);
        for &e in &removable {
            graph.remove_edge(e)?;
        }

        let to_global = |u: NodeId| ids[u];
        let mut out = Self::unsimplified(ids.clone(), graph)?;
        out.removed_edges = removable.iter().map(|e| Edge::new(to_global(e.u), to_global(e.v))).collect();
        out.cliques = triangles.iter().map(|t| t.map(to_global)).collect();
        out.initial_junctions = junctions.iter().map(|&u| to_global(u)).collect();
        Ok(out)
    }

    /// Wraps a graph as-is: no removals, classes taken from its degrees.
    pub fn unsimplified(ids: Vec<NodeId>, graph: Graph) -> Result<Self> {
        let local: Vec<NodeId> = graph.nodes().collect();
        let classes = classify_nodes(&graph, &local)?;
        let pick = |want: NodeClass| -> Vec<NodeId> {
            classes.iter().filter(|(_, &c)| c == want).map(|(&u, _)| ids[u]).collect()
        };
        let junctions = pick(NodeClass::Junction);
        let terminals = pick(NodeClass::Terminal);
        let mut endpoints: Vec<NodeId> = junctions.iter().chain(&terminals).copied().collect();
        endpoints.sort_unstable();
        Ok(Self {
            initial_junctions: junctions.clone(),
            ids,
            graph,
            removed_edges: Vec::new(),
            cliques: Vec::new(),
            junctions,
            terminals,
            endpoints,
        })
    }

    pub fn global(&self, local: NodeId) -> NodeId {
        self.ids[local]
    }

    pub fn local(&self, global: NodeId) -> Option<NodeId> {
        self.ids.binary_search(&global).ok()
    }

    /// Simplified edges in global ids.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.graph.edges().map(|e| Edge::new(self.ids[e.u], self.ids[e.v]))
    }

    /// Class of a global node on the simplified graph.
    pub fn class_of(&self, global: NodeId) -> Option<NodeClass> {
        let local = self.local(global)?;
        NodeClass::from_degree(self.graph.degree(local).ok()?)
    }
}

/// Simplifies the component `nodes` (sorted ascending) of `sg`.
pub fn simplify_subgraph(sg: &SkeletonGraph, nodes: &[NodeId]) -> Result<SimplifiedSubgraph> {
    let graph = sg.graph.compact_subgraph(nodes)?;
    SimplifiedSubgraph::simplify(nodes.to_vec(), graph, |u| sg.coords[nodes[u]])
}
