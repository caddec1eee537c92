//! Slow, direct reference implementations used to cross-check the library.

use std::collections::BTreeSet;

use skelines_core::BinaryImage;

type Grid = Vec<Vec<bool>>;

fn grid(img: &BinaryImage) -> Grid {
    (0..img.rows()).map(|r| (0..img.cols()).map(|c| img.get(r, c)).collect()).collect()
}

fn at(g: &Grid, r: isize, c: isize) -> u8 {
    if r < 0 || c < 0 || r as usize >= g.len() || c as usize >= g[0].len() {
        0
    } else {
        g[r as usize][c as usize] as u8
    }
}

/// Zhang-Suen thinning written out rule by rule.
pub fn zhang_suen(img: &BinaryImage) -> BinaryImage {
    let mut g = grid(img);
    loop {
        let mut changed = false;
        for step in 0..2 {
            let mut doomed = Vec::new();
            for r in 0..g.len() {
                for c in 0..g[0].len() {
                    if !g[r][c] {
                        continue;
                    }
                    let (ri, ci) = (r as isize, c as isize);
                    let p2 = at(&g, ri - 1, ci);
                    let p3 = at(&g, ri - 1, ci + 1);
                    let p4 = at(&g, ri, ci + 1);
                    let p5 = at(&g, ri + 1, ci + 1);
                    let p6 = at(&g, ri + 1, ci);
                    let p7 = at(&g, ri + 1, ci - 1);
                    let p8 = at(&g, ri, ci - 1);
                    let p9 = at(&g, ri - 1, ci - 1);
                    let seq = [p2, p3, p4, p5, p6, p7, p8, p9, p2];
                    let b: u8 = seq[..8].iter().sum();
                    let a = seq.windows(2).filter(|w| w[0] == 0 && w[1] == 1).count();
                    let (c3, c4) = if step == 0 {
                        (p2 * p4 * p6, p4 * p6 * p8)
                    } else {
                        (p2 * p4 * p8, p2 * p6 * p8)
                    };
                    if (2..=6).contains(&b) && a == 1 && c3 == 0 && c4 == 0 {
                        doomed.push((r, c));
                    }
                }
            }
            changed |= !doomed.is_empty();
            for (r, c) in doomed {
                g[r][c] = false;
            }
        }
        if !changed {
            break;
        }
    }
    let data = g.iter().flatten().copied().collect();
    BinaryImage::new(img.rows(), img.cols(), data).unwrap()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Piece {
    /// Open chain, identified by its edge set.
    Chain(BTreeSet<(usize, usize)>),
    Cycle(BTreeSet<(usize, usize)>),
}

/// Expected segmentation of a skeleton, in pixel coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expected {
    pub pieces: BTreeSet<Piece>,
    pub open: usize,
    pub cycles: usize,
    pub removed: BTreeSet<(usize, usize)>,
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// Segments a skeleton from scratch: pairwise adjacency, junction-triangle
/// diagonals removed, then maximal chains between endpoints plus
/// endpoint-free or single-endpoint loops. Ids are row-major pixel order.
pub fn segment(img: &BinaryImage, speckle: usize) -> Expected {
    let px: Vec<(usize, usize)> =
        (0..img.rows()).flat_map(|r| (0..img.cols()).map(move |c| (r, c))).filter(|&(r, c)| img.get(r, c)).collect();
    let n = px.len();
    let adjacent = |a: usize, b: usize| {
        let (p, q) = (px[a], px[b]);
        a != b && p.0.abs_diff(q.0) <= 1 && p.1.abs_diff(q.1) <= 1
    };
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|a| (0..n).filter(|&b| adjacent(a, b)).collect()).collect();

    let junction: Vec<bool> = adj.iter().map(|s| s.len() >= 3).collect();
    let mut removed = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if junction[a] && junction[b] && junction[c] && adjacent(a, b) && adjacent(b, c) && adjacent(a, c) {
                    for (u, v) in [(a, b), (b, c), (a, c)] {
                        if px[u].0 != px[v].0 && px[u].1 != px[v].1 {
                            removed.insert(key(u, v));
                        }
                    }
                }
            }
        }
    }
    for &(u, v) in &removed {
        adj[u].remove(&v);
        adj[v].remove(&u);
    }

    // components; small ones are noise
    let mut comp = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        let mut stack = vec![s];
        comp[s] = id;
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for &v in &adj[u] {
                if comp[v] == usize::MAX {
                    comp[v] = id;
                    stack.push(v);
                }
            }
        }
        sizes.push(size);
    }
    let kept = |u: usize| sizes[comp[u]] > speckle;

    let endpoint = |u: usize| adj[u].len() != 2;
    let mut used: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut pieces = BTreeSet::new();
    let (mut open, mut cycles) = (0, 0);

    let walk = |start: usize, first: usize, used: &mut BTreeSet<(usize, usize)>| {
        let mut edges = BTreeSet::new();
        let (mut prev, mut cur) = (start, first);
        edges.insert(key(prev, cur));
        used.insert(key(prev, cur));
        while !endpoint(cur) {
            let next = *adj[cur].iter().find(|&&w| !used.contains(&key(cur, w)) && w != prev).unwrap_or(&start);
            if used.contains(&key(cur, next)) {
                break;
            }
            used.insert(key(cur, next));
            edges.insert(key(cur, next));
            prev = cur;
            cur = next;
            if cur == start {
                break;
            }
        }
        (edges, cur)
    };

    for s in (0..n).filter(|&u| kept(u) && endpoint(u)) {
        for &f in &adj[s] {
            if used.contains(&key(s, f)) {
                continue;
            }
            let (edges, end) = walk(s, f, &mut used);
            if end == s {
                cycles += 1;
                pieces.insert(Piece::Cycle(edges));
            } else {
                open += 1;
                pieces.insert(Piece::Chain(edges));
            }
        }
    }
    // what is left are rings of degree-2 nodes
    for s in (0..n).filter(|&u| kept(u)) {
        for &f in &adj[s] {
            if !used.contains(&key(s, f)) {
                let (edges, _) = walk(s, f, &mut used);
                cycles += 1;
                pieces.insert(Piece::Cycle(edges));
            }
        }
    }

    Expected { pieces, open, cycles, removed }
}

/// Pieces of a library result in the same representation.
pub fn pieces_of(result: &skelines_core::DetectionResult) -> BTreeSet<Piece> {
    result
        .paths
        .iter()
        .map(|p| {
            let edges = p.edges().map(|e| (e.u, e.v)).collect();
            if p.is_cycle() {
                Piece::Cycle(edges)
            } else {
                Piece::Chain(edges)
            }
        })
        .collect()
}
