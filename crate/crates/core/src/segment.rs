//! Segmentation of a simplified subgraph into open paths and cycles.
//!
//! Work happens on a throwaway copy of the simplified graph:
//!
//! 1. Cycle phase: fundamental cycles are taken in ascending order of their
//!    smallest node. Edges already claimed by an earlier cycle are dropped;
//!    an intact cycle is recorded whole, otherwise its surviving runs are
//!    recorded as open chains. Recorded edges leave the copy.
//! 2. Path phase: while an endpoint still has edges, the smallest such
//!    endpoint is joined to its nearest other endpoint by BFS and that path
//!    leaves the copy. Endpoints stay until their last edge is gone.
//! 3. Split phase: every record is cut at interior endpoints so each open
//!    piece runs endpoint to endpoint with none inside. Cycles through two or
//!    more endpoints become open pieces; the rest are rotated to a canonical
//!    start.
//!
//! Every simplified edge ends up in exactly one returned path.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::graph::{Edge, Graph, NodeId};
use crate::simplify::SimplifiedSubgraph;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathKind {
    Open,
    Cycle,
}

/// An ordered node sequence. A cycle does not repeat its first node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathSeq {
    pub kind: PathKind,
    pub nodes: Vec<NodeId>,
}

impl PathSeq {
    pub fn open(nodes: Vec<NodeId>) -> Self {
        Self { kind: PathKind::Open, nodes }
    }

    pub fn cycle(nodes: Vec<NodeId>) -> Self {
        Self { kind: PathKind::Cycle, nodes }
    }

    pub fn is_cycle(&self) -> bool {
        self.kind == PathKind::Cycle
    }

    /// Consecutive-pair edges, plus the closing edge of a cycle.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let n = self.nodes.len();
        let closing = (self.is_cycle() && n >= 3).then(|| Edge::new(self.nodes[n - 1], self.nodes[0]));
        self.nodes.windows(2).map(|w| Edge::new(w[0], w[1])).chain(closing)
    }

    fn map(self, f: impl Fn(NodeId) -> NodeId) -> Self {
        Self { kind: self.kind, nodes: self.nodes.into_iter().map(f).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SegmentationOutcome {
    pub paths: Vec<PathSeq>,
    pub covered_edges: BTreeSet<Edge>,
    /// Subgraph nodes missing from every path; empty on success.
    pub uncovered_nodes: Vec<NodeId>,
}

pub fn segment_subgraph(s: &SimplifiedSubgraph) -> Result<SegmentationOutcome> {
    let endpoint: Vec<bool> = s.ids.iter().map(|&g| s.endpoints.binary_search(&g).is_ok()).collect();
    let mut copy = s.graph.clone();
    let mut raw = cycle_phase(&mut copy);
    path_phase(&mut copy, &endpoint, &mut raw)?;
    if copy.edge_count() != 0 {
        return Err(Error::Invariant("edges left over after segmentation"));
    }

    let mut paths = Vec::new();
    for p in raw {
        split_into(p, &endpoint, &s.graph, &mut paths);
    }
    let paths: Vec<PathSeq> = paths.into_iter().map(|p| p.map(|u| s.ids[u])).collect();

    let mut covered_edges = BTreeSet::new();
    for p in &paths {
        for e in p.edges() {
            if !covered_edges.insert(e) {
                return Err(Error::Invariant("edge covered twice"));
            }
        }
    }
    let seen: BTreeSet<NodeId> = paths.iter().flat_map(|p| p.nodes.iter().copied()).collect();
    let uncovered_nodes = s.ids.iter().copied().filter(|u| !seen.contains(u)).collect();
    Ok(SegmentationOutcome { paths, covered_edges, uncovered_nodes })
}

fn cycle_phase(copy: &mut Graph) -> Vec<PathSeq> {
    let mut cycles = copy.fundamental_cycles();
    cycles.sort_by_cached_key(|c| (c.iter().copied().min(), c.clone()));

    let mut consumed: BTreeSet<Edge> = BTreeSet::new();
    let mut out = Vec::new();
    for c in cycles {
        let k = c.len();
        let edge = |i: usize| Edge::new(c[i], c[(i + 1) % k]);
        let alive: Vec<bool> = (0..k).map(|i| !consumed.contains(&edge(i))).collect();

        if alive.iter().all(|&a| a) {
            out.push(PathSeq::cycle(c.clone()));
        } else {
            // Walk once around starting just after a consumed edge so every
            // run of surviving edges is contiguous.
            let first_dead = alive.iter().position(|&a| !a).expect("some edge is consumed");
            let mut run: Vec<NodeId> = Vec::new();
            for step in 1..=k {
                let i = (first_dead + step) % k;
                if alive[i] {
                    if run.is_empty() {
                        run.push(c[i]);
                    }
                    run.push(c[(i + 1) % k]);
                } else if !run.is_empty() {
                    out.push(PathSeq::open(core::mem::take(&mut run)));
                }
            }
            if !run.is_empty() {
                out.push(PathSeq::open(run));
            }
        }

        for i in (0..k).filter(|&i| alive[i]) {
            let e = edge(i);
            consumed.insert(e);
            copy.remove_edge(e).expect("cycle edges exist until consumed");
        }
        for &u in &c {
            if copy.is_live(u) && copy.neighbors(u).is_empty() {
                copy.remove_node(u).expect("live node");
            }
        }
    }
    out
}

fn path_phase(copy: &mut Graph, endpoint: &[bool], out: &mut Vec<PathSeq>) -> Result<()> {
    let mut active: BTreeSet<NodeId> =
        copy.nodes().filter(|&u| endpoint[u] && !copy.neighbors(u).is_empty()).collect();

    while let Some(&src) = active.iter().next() {
        let path = match copy.shortest_path_bfs(src, &active) {
            Some(p) => p,
            None => dead_end_walk(copy, src, endpoint),
        };
        if path.len() < 2 {
            return Err(Error::Invariant("endpoint with edges produced an empty path"));
        }
        for w in path.windows(2) {
            copy.remove_edge(Edge::new(w[0], w[1]))?;
        }
        for &u in &path {
            if copy.is_live(u) && copy.neighbors(u).is_empty() {
                copy.remove_node(u)?;
                active.remove(&u);
            }
        }
        out.push(PathSeq::open(path));
    }
    Ok(())
}

/// Fallback when no other endpoint is reachable: follow the smallest
/// unused neighbour until the chain ends.
fn dead_end_walk(copy: &Graph, src: NodeId, endpoint: &[bool]) -> Vec<NodeId> {
    let mut path = alloc::vec![src];
    let mut used: BTreeSet<Edge> = BTreeSet::new();
    let mut cur = src;
    loop {
        let next = copy.neighbors(cur).iter().copied().find(|&v| !used.contains(&Edge::new(cur, v)) && !path.contains(&v));
        let Some(v) = next else { break };
        used.insert(Edge::new(cur, v));
        path.push(v);
        cur = v;
        if endpoint[v] {
            break;
        }
    }
    path
}

/// Rotates the cycle to begin at `start`.
fn rotate_cycle(mut nodes: Vec<NodeId>, start: usize, graph: &Graph) -> Vec<NodeId> {
    nodes.rotate_left(start);
    // Orient toward the smaller-id neighbour of the start node.
    let k = nodes.len();
    if k >= 3 && nodes[k - 1] < nodes[1] {
        nodes[1..].reverse();
    }
    debug_assert!(nodes.windows(2).all(|w| graph.has_edge(w[0], w[1])));
    nodes
}

fn split_into(p: PathSeq, endpoint: &[bool], graph: &Graph, out: &mut Vec<PathSeq>) {
    match p.kind {
        PathKind::Open => {
            let last = p.nodes.len() - 1;
            let mut start = 0;
            for i in 1..=last {
                if i == last || endpoint[p.nodes[i]] {
                    out.push(PathSeq::open(p.nodes[start..=i].to_vec()));
                    start = i;
                }
            }
        }
        PathKind::Cycle => {
            let ends: Vec<usize> = (0..p.nodes.len()).filter(|&i| endpoint[p.nodes[i]]).collect();
            let start = match ends.as_slice() {
                [] => (0..p.nodes.len()).min_by_key(|&i| p.nodes[i]).expect("cycle is non-empty"),
                _ => ends.iter().copied().min_by_key(|&i| p.nodes[i]).expect("non-empty"),
            };
            let mut nodes = rotate_cycle(p.nodes, start, graph);
            if ends.len() < 2 {
                out.push(PathSeq::cycle(nodes));
                return;
            }
            nodes.push(nodes[0]);
            split_into(PathSeq::open(nodes), endpoint, graph, out);
        }
    }
}

/// True when every node is either noise or on some path.
pub fn verify_span(all_nodes: &[NodeId], noise: &[NodeId], paths: &[PathSeq]) -> bool {
    let mut left: BTreeSet<NodeId> = all_nodes.iter().copied().collect();
    for u in noise {
        left.remove(u);
    }
    for p in paths {
        for u in &p.nodes {
            left.remove(u);
        }
    }
    left.is_empty()
}
