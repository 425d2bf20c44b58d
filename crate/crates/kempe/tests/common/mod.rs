//! Shared helpers for the integration suites: named graphs, deterministic
//! colouring search, and exhaustive generation of small triangle-free graphs
//! up to isomorphism.

#![allow(dead_code)]

use kempe::{Colour, Colouring, Edge, Graph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub fn cycle(n: usize) -> Graph {
    Graph::new(n, (1..=n).map(|i| (i, i % n + 1))).unwrap()
}

pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i, i + 1))).unwrap()
}

/// Star K₁,ₙ: centre 1, leaves 2..=n+1.
pub fn star(leaves: usize) -> Graph {
    Graph::new(leaves + 1, (2..=leaves + 1).map(|v| (1, v))).unwrap()
}

pub fn complete(n: usize) -> Graph {
    let mut e = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            e.push((u, v));
        }
    }
    Graph::new(n, e).unwrap()
}

/// Complete bipartite K_{a,b}: sides 1..=a and a+1..=a+b.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut e = Vec::new();
    for u in 1..=a {
        for v in a + 1..=a + b {
            e.push((u, v));
        }
    }
    Graph::new(a + b, e).unwrap()
}

/// The 3-cube: rings 1-2-3-4 and 5-6-7-8 joined by rungs i-(i+4).
pub fn cube() -> Graph {
    Graph::new(
        8,
        [
            (1, 2),
            (2, 3),
            (3, 4),
            (1, 4),
            (5, 6),
            (6, 7),
            (7, 8),
            (5, 8),
            (1, 5),
            (2, 6),
            (3, 7),
            (4, 8),
        ],
    )
    .unwrap()
}

/// The Wagner graph: C₈ plus the four diameters.
pub fn wagner() -> Graph {
    let mut e: Vec<(usize, usize)> = (1..=8).map(|i| (i, i % 8 + 1)).collect();
    e.extend((1..=4).map(|i| (i, i + 4)));
    Graph::new(8, e).unwrap()
}

/// The Petersen graph: outer ring 1..5, inner pentagram 6..10, spokes.
pub fn petersen() -> Graph {
    let mut e: Vec<(usize, usize)> = (0..5).map(|i| (i + 1, (i + 1) % 5 + 1)).collect();
    e.extend((0..5).map(|i| (i + 6, (i + 2) % 5 + 6)));
    e.extend((0..5).map(|i| (i + 1, i + 6)));
    Graph::new(10, e).unwrap()
}

/// First proper `k`-edge-colouring under lexicographic backtracking (edges in
/// sorted order, colours ascending). Deterministic.
pub fn find_proper_colouring(g: &Graph, k: Colour) -> Option<Colouring> {
    fn go(g: &Graph, k: Colour, idx: usize, cols: &mut Vec<Colour>) -> bool {
        if idx == g.edge_count() {
            return true;
        }
        let e = g.edges()[idx];
        'cand: for c in 1..=k {
            for &(_, i) in g.neighbours(e.u()).iter().chain(g.neighbours(e.v())) {
                if i < idx && cols[i] == c {
                    continue 'cand;
                }
            }
            cols[idx] = c;
            if go(g, k, idx + 1, cols) {
                return true;
            }
        }
        false
    }
    let mut cols = vec![0; g.edge_count()];
    go(g, k, 0, &mut cols).then(|| Colouring::new(g, k, cols).unwrap())
}

/// Chromatic index: Δ if a Δ-edge-colouring exists, else Δ+1 (never more on
/// simple graphs).
pub fn chi_prime(g: &Graph) -> Colour {
    let d = g.max_degree() as Colour;
    if d == 0 {
        return 0;
    }
    if find_proper_colouring(g, d).is_some() {
        d
    } else {
        let c = find_proper_colouring(g, d + 1);
        assert!(c.is_some(), "simple graphs are (Δ+1)-edge-colourable");
        d + 1
    }
}

// ---------------------------------------------------------------------------
// Exhaustive generation of small graphs up to isomorphism.
//
// Graphs on n ≤ 8 vertices are adjacency bitmask rows; the canonical key is
// the lexicographically smallest upper-triangle bit string over all vertex
// orderings, found by branch-and-bound.
// ---------------------------------------------------------------------------

type Rows = Vec<u32>;

fn tri_bits(rows: &Rows) -> usize {
    let n = rows.len();
    n * (n - 1) / 2
}

/// Lexicographically smallest upper-triangle encoding over all orderings.
fn canon_key(rows: &Rows) -> u64 {
    let n = rows.len();
    let total = tri_bits(rows);
    let mut best = u64::MAX;
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(
        rows: &Rows,
        n: usize,
        total: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        acc: u64,
        bits: usize,
        best: &mut u64,
    ) {
        if perm.len() == n {
            if acc < *best {
                *best = acc;
            }
            return;
        }
        let i = perm.len();
        for cand in 0..n {
            if used[cand] {
                continue;
            }
            // New bits: adjacency between position i and positions 0..i.
            let mut chunk = 0u64;
            for (pos, &orig) in perm.iter().enumerate() {
                let adj = (rows[cand] >> orig) & 1;
                chunk |= (adj as u64) << (i - 1 - pos);
            }
            let acc2 = (acc << i) | chunk;
            let bits2 = bits + i;
            // Prune against the best completed key's prefix.
            if *best != u64::MAX && acc2 > (*best >> (total - bits2)) {
                continue;
            }
            used[cand] = true;
            perm.push(cand);
            rec(rows, n, total, perm, used, acc2, bits2, best);
            perm.pop();
            used[cand] = false;
        }
    }
    rec(rows, n, total, &mut perm, &mut used, 0, 0, &mut best);
    best
}

fn rows_to_graph(rows: &Rows) -> Graph {
    let n = rows.len();
    let mut e = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if (rows[u] >> v) & 1 == 1 {
                e.push((u + 1, v + 1));
            }
        }
    }
    Graph::new(n, e).unwrap()
}

/// All connected triangle-free graphs on exactly `n` vertices up to
/// isomorphism, optionally capping the maximum degree. Built by vertex
/// augmentation: every connected graph arises from a connected graph one
/// vertex smaller by attaching a new vertex to a non-empty independent set
/// (delete any non-cut vertex to see completeness), and an independent
/// neighbourhood is exactly what keeps the result triangle-free.
pub fn connected_triangle_free(n: usize, max_degree: Option<usize>) -> Vec<Graph> {
    assert!((1..=8).contains(&n), "canonical keys are 64-bit");
    let mut level: Vec<Rows> = vec![vec![0u32]];
    for k in 2..=n {
        let mut seen: BTreeMap<u64, Rows> = BTreeMap::new();
        for parent in &level {
            for s in 1u32..(1 << (k - 1)) {
                if let Some(cap) = max_degree {
                    if s.count_ones() as usize > cap
                        || (0..k - 1).any(|v| (s >> v) & 1 == 1 && parent[v].count_ones() as usize >= cap)
                    {
                        continue;
                    }
                }
                // The new neighbourhood must be independent.
                if (0..k - 1).any(|v| (s >> v) & 1 == 1 && parent[v] & s != 0) {
                    continue;
                }
                let mut child = parent.clone();
                for v in 0..k - 1 {
                    if (s >> v) & 1 == 1 {
                        child[v] |= 1 << (k - 1);
                    }
                }
                child.push(s);
                seen.entry(canon_key(&child)).or_insert(child);
            }
        }
        level = seen.into_values().collect();
    }
    level.iter().map(rows_to_graph).collect()
}

/// Every connected cubic triangle-free graph on at most 8 vertices up to
/// isomorphism: K₃,₃, the 3-cube, and the Wagner graph.
pub fn cubic_triangle_free_upto8() -> Vec<Graph> {
    let mut out = Vec::new();
    for n in (4..=8).step_by(2) {
        for g in connected_triangle_free(n, Some(3)) {
            if g.regular_degree() == Some(3) {
                out.push(g);
            }
        }
    }
    assert_eq!(out.len(), 3, "K3,3, the cube, and the Wagner graph");
    out
}

/// Random connected cubic bipartite graph with `half` vertices per side
/// (sides 1..=half and half+1..=2·half), plus its proper 3-edge-colouring:
/// the graph is a union of three pairwise disjoint perfect matchings and the
/// matchings are the colour classes.
pub fn random_cubic_bipartite(half: usize, seed: u64) -> (Graph, Colouring) {
    assert!(half >= 4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut perms: Vec<Vec<usize>> = Vec::new();
        for _ in 0..3 {
            let mut p: Vec<usize> = (0..half).collect();
            p.shuffle(&mut rng);
            perms.push(p);
        }
        // Reject multi-edges: two matchings pairing some left vertex alike.
        if (0..half).any(|j| {
            perms[0][j] == perms[1][j] || perms[0][j] == perms[2][j] || perms[1][j] == perms[2][j]
        }) {
            continue;
        }
        let mut edges = Vec::new();
        let mut cols = Vec::new();
        for (c, p) in perms.iter().enumerate() {
            for (j, &img) in p.iter().enumerate() {
                edges.push((j + 1, half + img + 1));
                cols.push((Edge::new(j + 1, half + img + 1), (c + 1) as Colour));
            }
        }
        let g = Graph::new(2 * half, edges).unwrap();
        if !is_connected(&g) {
            continue;
        }
        let c = Colouring::from_edge_colours(&g, 3, cols).unwrap();
        return (g, c);
    }
}

pub fn is_connected(g: &Graph) -> bool {
    let n = g.vertex_count();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n + 1];
    let mut stack = vec![1];
    seen[1] = true;
    let mut found = 1;
    while let Some(u) = stack.pop() {
        for &(w, _) in g.neighbours(u) {
            if !seen[w] {
                seen[w] = true;
                found += 1;
                stack.push(w);
            }
        }
    }
    found == n
}

/// Deterministic pseudorandom pick in `0..bound` (helper for sampling).
pub fn pick(rng: &mut ChaCha8Rng, bound: usize) -> usize {
    rng.random_range(0..bound)
}

// ---------------------------------------------------------------------------
// A 32-vertex cubic triangle-free graph whose fixed 4-colouring has a
// saturated cycle fan. Bipartite graphs can never have one: the chain that
// saturation requires is an even-length path from the centre to one of its
// own neighbours. This graph is built around interlocking odd cycles instead:
// an 8-vertex gadget (centre 1, cycle fan (2, 3), both chains ending exactly
// where saturation demands) made cubic by two explicit doubling layers.
// ---------------------------------------------------------------------------

fn gadget_base() -> (Vec<(usize, usize)>, Vec<Colour>) {
    let edges = vec![
        (1, 2),
        (1, 3),
        (1, 4),
        (2, 5),
        (2, 7),
        (3, 6),
        (3, 8),
        (5, 6),
        (5, 8),
        (6, 7),
        (7, 8),
    ];
    let colours = vec![1, 2, 3, 4, 3, 4, 3, 1, 2, 2, 4];
    (edges, colours)
}

/// The graph, its saturated colouring, and the fan pair `(u, v) = (1, 2)`:
/// `fan_sequence(g, c, 1, 2)` is a saturated cycle and `fan_sequence(g, c,
/// 2, 1)` is a cycle, so the pair drives the saturated-double-cycle surgery.
pub fn saturated_gadget() -> (Graph, Colouring) {
    let (base_e, base_c) = gadget_base();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut cols: Vec<(Edge, Colour)> = Vec::new();
    for off in [0usize, 8, 16, 24] {
        for (i, &(u, v)) in base_e.iter().enumerate() {
            edges.push((u + off, v + off));
            cols.push((Edge::new(u + off, v + off), base_c[i]));
        }
    }
    for (u, v, c) in [(4, 12, 1), (20, 28, 1), (4, 20, 2), (12, 28, 2)] {
        edges.push((u, v));
        cols.push((Edge::new(u, v), c));
    }
    let g = Graph::new(32, edges).unwrap();
    let c = Colouring::from_edge_colours(&g, 4, cols).unwrap();
    (g, c)
}
