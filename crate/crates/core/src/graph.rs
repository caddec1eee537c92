//! Undirected simple graph over dense integer ids.
//!
//! Ids stay stable across removals: a removed node keeps its slot and is
//! flagged dead. Neighbour lists are kept sorted, and every traversal expands
//! neighbours in ascending id order so results are reproducible.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

pub type NodeId = usize;

/// Undirected edge stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
}

impl Edge {
    /// Normalizes the endpoint order.
    ///
    /// # Panics
    /// On a self-loop.
    pub fn new(a: NodeId, b: NodeId) -> Self {
        assert_ne!(a, b, "self-loop edge");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<NodeId>>,
    live: Vec<bool>,
    edge_count: usize,
}

impl Graph {
    /// `n` live nodes, no edges.
    pub fn new(n: usize) -> Self {
        Self { adj: vec![Vec::new(); n], live: vec![true; n], edge_count: 0 }
    }

    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut g = Self::new(n);
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Size of the id space, dead slots included.
    pub fn capacity(&self) -> usize {
        self.adj.len()
    }

    pub fn live_count(&self) -> usize {
        self.live.iter().filter(|&&l| l).count()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_live(&self, u: NodeId) -> bool {
        self.live.get(u).copied().unwrap_or(false)
    }

    /// Live node ids in ascending order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.live.iter().enumerate().filter(|(_, &l)| l).map(|(i, _)| i)
    }

    /// Sorted neighbours; empty for dead or unknown ids.
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        self.adj.get(u).map_or(&[], |a| a.as_slice())
    }

    pub fn degree(&self, u: NodeId) -> Result<usize> {
        if !self.is_live(u) {
            return Err(Error::InvalidNode(u));
        }
        Ok(self.adj[u].len())
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.neighbors(a).binary_search(&b).is_ok()
    }

    /// All edges sorted by `(u, v)`.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| Edge { u, v }))
    }

    /// Adds an edge; returns `false` if it already existed.
    pub fn add_edge(&mut self, a: NodeId, b: NodeId) -> Result<bool> {
        for x in [a, b] {
            if !self.is_live(x) {
                return Err(Error::InvalidNode(x));
            }
        }
        if a == b {
            return Err(Error::InvalidNode(a));
        }
        match self.adj[a].binary_search(&b) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[a].insert(pos, b);
                let pos = self.adj[b].binary_search(&a).unwrap_err();
                self.adj[b].insert(pos, a);
                self.edge_count += 1;
                Ok(true)
            }
        }
    }

    pub fn remove_edge(&mut self, e: Edge) -> Result<()> {
        let Ok(i) = self.neighbors(e.u).binary_search(&e.v) else {
            return Err(Error::MissingEdge(e));
        };
        self.adj[e.u].remove(i);
        let j = self.adj[e.v].binary_search(&e.u).map_err(|_| Error::MissingEdge(e))?;
        self.adj[e.v].remove(j);
        self.edge_count -= 1;
        Ok(())
    }

    /// Drops every incident edge and marks the node dead.
    pub fn remove_node(&mut self, u: NodeId) -> Result<()> {
        if !self.is_live(u) {
            return Err(Error::InvalidNode(u));
        }
        for v in core::mem::take(&mut self.adj[u]) {
            let j = self.adj[v].binary_search(&u).expect("adjacency is symmetric");
            self.adj[v].remove(j);
            self.edge_count -= 1;
        }
        self.live[u] = false;
        Ok(())
    }

    /// Subgraph on `keep`, same id space: nodes outside `keep` are dead.
    pub fn induced_subgraph(&self, keep: &BTreeSet<NodeId>) -> Result<Graph> {
        let mut g = Graph {
            adj: vec![Vec::new(); self.capacity()],
            live: vec![false; self.capacity()],
            edge_count: 0,
        };
        for &u in keep {
            if !self.is_live(u) {
                return Err(Error::InvalidNode(u));
            }
            g.live[u] = true;
        }
        for &u in keep {
            g.adj[u] = self.adj[u].iter().copied().filter(|v| keep.contains(v)).collect();
            g.edge_count += g.adj[u].iter().filter(|&&v| v > u).count();
        }
        Ok(g)
    }

    /// Subgraph on the ascending id list `ids`, renumbered `0..ids.len()`.
    ///
    /// Local id `i` stands for `ids[i]`. Since the map is monotone, every
    /// ascending-id rule gives the same answer on the compact graph.
    pub fn compact_subgraph(&self, ids: &[NodeId]) -> Result<Graph> {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        let mut g = Graph::new(ids.len());
        for (i, &u) in ids.iter().enumerate() {
            if !self.is_live(u) {
                return Err(Error::InvalidNode(u));
            }
            let local: Vec<NodeId> =
                self.adj[u].iter().filter_map(|v| ids.binary_search(v).ok()).collect();
            g.edge_count += local.iter().filter(|&&j| j > i).count();
            g.adj[i] = local;
        }
        Ok(g)
    }

    /// Connected components of the live nodes. Each set is sorted and the
    /// sets are ordered by their minimum id.
    pub fn connected_components(&self) -> Vec<Vec<NodeId>> {
        let mut seen = vec![false; self.capacity()];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for s in self.nodes() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            stack.push(s);
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Every 3-clique once, as sorted triples in lexicographic order.
    pub fn triangles(&self) -> Vec<[NodeId; 3]> {
        let mut out = Vec::new();
        for u in self.nodes() {
            for &v in self.adj[u].iter().filter(|&&v| v > u) {
                for &w in self.adj[v].iter().filter(|&&w| w > v) {
                    if self.has_edge(u, w) {
                        out.push([u, v, w]);
                    }
                }
            }
        }
        out
    }

    /// Minimum-hop path from `src` to the nearest node in `targets`.
    ///
    /// BFS expands neighbours in ascending order and keeps the first parent
    /// found; among equally near targets the smallest id wins. `src` itself
    /// is never a target.
    pub fn shortest_path_bfs(&self, src: NodeId, targets: &BTreeSet<NodeId>) -> Option<Vec<NodeId>> {
        if !self.is_live(src) {
            return None;
        }
        let mut parent: BTreeMap<NodeId, NodeId> = BTreeMap::new();
        parent.insert(src, src);
        let mut frontier = vec![src];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            let mut hit: Option<NodeId> = None;
            for &u in &frontier {
                for &v in &self.adj[u] {
                    if parent.contains_key(&v) {
                        continue;
                    }
                    parent.insert(v, u);
                    next.push(v);
                    if targets.contains(&v) && hit.is_none_or(|h| v < h) {
                        hit = Some(v);
                    }
                }
            }
            if let Some(t) = hit {
                let mut path = vec![t];
                let mut cur = t;
                while cur != src {
                    cur = parent[&cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            frontier = next;
        }
        None
    }

    /// One cycle per non-tree edge of a BFS spanning forest.
    ///
    /// Each tree is rooted at its smallest id and grown in ascending order.
    /// A cycle is reported as `[u, .., lca, .., v]` for the non-tree edge
    /// `(u, v)`, without repeating the first node; cycles follow the sorted
    /// order of their non-tree edges.
    pub fn fundamental_cycles(&self) -> Vec<Vec<NodeId>> {
        let n = self.capacity();
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![0usize; n];
        let mut queue = VecDeque::new();
        for root in self.nodes() {
            if parent[root] != usize::MAX {
                continue;
            }
            parent[root] = root;
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if parent[v] == usize::MAX {
                        parent[v] = u;
                        depth[v] = depth[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
        }

        let mut cycles = Vec::new();
        for e in self.edges() {
            if parent[e.v] == e.u || parent[e.u] == e.v {
                continue;
            }
            let (mut a, mut b) = (e.u, e.v);
            let mut up = vec![a];
            let mut down = vec![b];
            while depth[a] > depth[b] {
                a = parent[a];
                up.push(a);
            }
            while depth[b] > depth[a] {
                b = parent[b];
                down.push(b);
            }
            while a != b {
                a = parent[a];
                b = parent[b];
                up.push(a);
                down.push(b);
            }
            down.pop();
            up.extend(down.into_iter().rev());
            cycles.push(up);
        }
        cycles
    }
}
