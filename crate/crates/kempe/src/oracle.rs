//! Ground-truth brute force for small instances: enumerate every proper
//! k-edge-colouring of a graph, build the reconfiguration graph whose edges
//! are single Kempe moves, and answer equivalence / component / shortest-path
//! queries. The engine is validated against this oracle wherever both run.
//!
//! Colourings are deduplicated by exact assignment — no quotienting by colour
//! permutation, since Kempe equivalence is defined on labelled colourings and
//! quotienting would change class counts.
//!
//! Every entry point is guarded by a feasibility bound: the estimated state
//! count (a per-component product `k·(k−1)^(E_c−1)`, an upper bound because a
//! connected component's edges can be ordered so each shares an endpoint with
//! an earlier one) must stay within a configurable cap.
//!
//! With the `parallel` feature (default), enumeration fixes the colours of a
//! short edge prefix and hands the prefixes to independent workers; workers
//! share nothing and emit rows that a single sequential reducer folds, so
//! both modes produce bit-identical results.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::chain::{chain_at, ChainError, KempeMove};
use crate::colouring::{validate_colouring, Colour, Colouring, ColouringError};
use crate::graph::Graph;
use crate::trace::{verify_trace, Trace, Verdict};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Default feasibility cap on the estimated number of proper colourings.
pub const DEFAULT_STATE_CAP: u64 = 10_000_000;

/// Errors from oracle queries.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("palette must contain at least one colour")]
    EmptyPalette,
    #[error("estimated {estimate} states exceed the cap of {cap}; raise the cap to proceed")]
    CapExceeded { estimate: u64, cap: u64 },
    #[error("colour-vector index space {palette}^{edges} exceeds 64 bits")]
    IndexSpace { edges: usize, palette: Colour },
    #[error("index {index} lies beyond the last colour vector")]
    IndexRange { index: u64 },
    #[error("colourings have palettes {first} and {second}, which must match")]
    PaletteMismatch { first: Colour, second: Colour },
    #[error("{which} colouring is not proper")]
    NotProper { which: &'static str },
    #[error(transparent)]
    Colouring(#[from] ColouringError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// Whether to run the data-parallel implementation or the sequential
/// fallback. `Parallel` silently behaves as `Sequential` when the crate is
/// built without the `parallel` feature.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExecMode {
    Sequential,
    Parallel,
}

impl Default for ExecMode {
    fn default() -> ExecMode {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

/// Knobs for oracle queries.
#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    /// Feasibility cap on the estimated state count.
    pub cap: u64,
    /// Parallel or sequential execution.
    pub mode: ExecMode,
}

impl Default for OracleOptions {
    fn default() -> OracleOptions {
        OracleOptions {
            cap: DEFAULT_STATE_CAP,
            mode: ExecMode::default(),
        }
    }
}

/// Canonical integer encoding of a colouring: mixed radix over the graph's
/// sorted edges, first edge most significant, digit = colour − 1. Indices
/// are bijective with colour vectors, so proper colourings map to distinct
/// stable keys, and the enumeration order below is exactly increasing index
/// order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ColouringIndex(pub u64);

fn encode_raw(colours: &[Colour], palette: Colour) -> Result<u64, OracleError> {
    let k = palette as u64;
    let mut idx: u64 = 0;
    for &col in colours {
        idx = idx
            .checked_mul(k)
            .and_then(|i| i.checked_add(col as u64 - 1))
            .ok_or(OracleError::IndexSpace {
                edges: colours.len(),
                palette,
            })?;
    }
    Ok(idx)
}

impl ColouringIndex {
    /// Encodes a colouring; fails only when `palette^edges` exceeds 64 bits.
    pub fn encode(c: &Colouring) -> Result<ColouringIndex, OracleError> {
        encode_raw(c.colours(), c.palette()).map(ColouringIndex)
    }

    /// Inverse of [`ColouringIndex::encode`] for the given graph and palette.
    /// The result need not be proper; the bijection covers all colour
    /// vectors.
    pub fn decode(self, g: &Graph, palette: Colour) -> Result<Colouring, OracleError> {
        if palette == 0 {
            return Err(OracleError::EmptyPalette);
        }
        let k = palette as u64;
        let mut digits = vec![0 as Colour; g.edge_count()];
        let mut rem = self.0;
        for slot in digits.iter_mut().rev() {
            *slot = (rem % k) as Colour + 1;
            rem /= k;
        }
        if rem != 0 {
            return Err(OracleError::IndexRange { index: self.0 });
        }
        Ok(Colouring::new(g, palette, digits)?)
    }
}

/// Upper bound on the number of proper k-edge-colourings: the product over
/// connected components of `k·(k−1)^(E_c−1)` (edgeless components count 1).
/// Each component's edges can be ordered so that every edge after the first
/// shares an endpoint with an earlier one, leaving at most k−1 choices; on
/// paths the bound is exact. Saturates at `u64::MAX`.
pub fn estimate_state_count(g: &Graph, k: Colour) -> u64 {
    let k64 = k as u64;
    let mut seen = vec![false; g.vertex_count() + 1];
    let mut total: u64 = 1;
    for v in g.vertices() {
        if seen[v] {
            continue;
        }
        let mut stack = vec![v];
        seen[v] = true;
        let mut degree_sum: u64 = 0;
        while let Some(u) = stack.pop() {
            degree_sum += g.degree(u) as u64;
            for &(w, _) in g.neighbours(u) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        let edges = degree_sum / 2;
        let contribution = if edges == 0 {
            1
        } else {
            k64.saturating_mul(k64.saturating_sub(1).saturating_pow((edges - 1) as u32))
        };
        total = total.saturating_mul(contribution);
    }
    total
}

fn feasibility(g: &Graph, k: Colour, options: &OracleOptions) -> Result<(), OracleError> {
    if k == 0 {
        return Err(OracleError::EmptyPalette);
    }
    let estimate = estimate_state_count(g, k);
    if estimate > options.cap {
        return Err(OracleError::CapExceeded {
            estimate,
            cap: options.cap,
        });
    }
    if (k as u64).checked_pow(g.edge_count() as u32).is_none() {
        return Err(OracleError::IndexSpace {
            edges: g.edge_count(),
            palette: k,
        });
    }
    Ok(())
}

/// Completes a proper partial colouring of the first `prefix.len()` sorted
/// edges to all proper total colourings, in lexicographic order.
fn complete_from(g: &Graph, k: Colour, prefix: &[Colour], out: &mut Vec<Colouring>) {
    fn go(
        g: &Graph,
        k: Colour,
        colours: &mut Vec<Colour>,
        used: &mut [Vec<bool>],
        out: &mut Vec<Colouring>,
    ) {
        if colours.len() == g.edge_count() {
            out.push(
                Colouring::new(g, k, colours.clone()).expect("backtracking stays in palette"),
            );
            return;
        }
        let e = g.edges()[colours.len()];
        for col in 1..=k {
            if used[e.u()][col as usize] || used[e.v()][col as usize] {
                continue;
            }
            colours.push(col);
            used[e.u()][col as usize] = true;
            used[e.v()][col as usize] = true;
            go(g, k, colours, used, out);
            used[e.u()][col as usize] = false;
            used[e.v()][col as usize] = false;
            colours.pop();
        }
    }

    let mut used = vec![vec![false; k as usize + 1]; g.vertex_count() + 1];
    for (idx, &col) in prefix.iter().enumerate() {
        let e = g.edges()[idx];
        debug_assert!(!used[e.u()][col as usize] && !used[e.v()][col as usize]);
        used[e.u()][col as usize] = true;
        used[e.v()][col as usize] = true;
    }
    let mut colours = prefix.to_vec();
    colours.reserve(g.edge_count());
    go(g, k, &mut colours, &mut used, out);
}

/// All proper partial colourings of the first `depth` sorted edges, in
/// lexicographic order.
fn proper_prefixes(g: &Graph, k: Colour, depth: usize) -> Vec<Vec<Colour>> {
    let mut cur: Vec<Vec<Colour>> = vec![Vec::new()];
    for idx in 0..depth {
        let e = g.edges()[idx];
        let mut next = Vec::new();
        for p in &cur {
            for col in 1..=k {
                let clash = p.iter().enumerate().any(|(j, &pc)| {
                    pc == col && {
                        let f = g.edges()[j];
                        f.touches(e.u()) || f.touches(e.v())
                    }
                });
                if !clash {
                    let mut q = p.clone();
                    q.push(col);
                    next.push(q);
                }
            }
        }
        cur = next;
    }
    cur
}

fn enumerate_sequential(g: &Graph, k: Colour) -> Vec<Colouring> {
    let mut out = Vec::new();
    complete_from(g, k, &[], &mut out);
    out
}

#[cfg(feature = "parallel")]
fn enumerate_parallel(g: &Graph, k: Colour) -> Vec<Colouring> {
    let target = rayon::current_num_threads().max(1) * 8;
    let mut depth = 0;
    let mut count = 1usize;
    while depth < g.edge_count() && count < target {
        count = count.saturating_mul(k as usize);
        depth += 1;
    }
    let prefixes = proper_prefixes(g, k, depth);
    // Prefixes are in lexicographic order and collect preserves it, so the
    // concatenation equals the sequential enumeration bit for bit.
    let parts: Vec<Vec<Colouring>> = prefixes
        .par_iter()
        .map(|p| {
            let mut out = Vec::new();
            complete_from(g, k, p, &mut out);
            out
        })
        .collect();
    parts.into_iter().flatten().collect()
}

#[cfg(not(feature = "parallel"))]
fn enumerate_parallel(g: &Graph, k: Colour) -> Vec<Colouring> {
    enumerate_sequential(g, k)
}

/// Every proper k-edge-colouring of `g`, each exactly once, in canonical
/// order (lexicographic in the colour vector over sorted edges, equivalently
/// increasing [`ColouringIndex`]), by backtracking over sorted edges.
pub fn enumerate_colourings(
    g: &Graph,
    k: Colour,
    options: &OracleOptions,
) -> Result<Vec<Colouring>, OracleError> {
    feasibility(g, k, options)?;
    Ok(match options.mode {
        ExecMode::Sequential => enumerate_sequential(g, k),
        ExecMode::Parallel => enumerate_parallel(g, k),
    })
}

/// Calls `f` once per Kempe move available from `c`: for every unordered
/// colour pair, one move per chain component, anchored at the component's
/// smallest edge. Distinct anchors on one chain give the same neighbour, so
/// this covers every reachable neighbour exactly once per chain. `f`
/// receives the move and the full neighbour colour vector.
fn for_each_transition<F>(g: &Graph, c: &Colouring, mut f: F) -> Result<(), OracleError>
where
    F: FnMut(KempeMove, &[Colour]),
{
    let k = c.palette();
    let mut done = vec![false; g.edge_count()];
    let mut scratch: Vec<Colour> = Vec::with_capacity(g.edge_count());
    for a in 1..=k {
        for b in a + 1..=k {
            done.fill(false);
            for idx in 0..g.edge_count() {
                let col = c.colour(idx);
                if done[idx] || (col != a && col != b) {
                    continue;
                }
                let chain = chain_at(g, c, a, b, g.edges()[idx])?;
                // An ascending scan discovers each component at its smallest
                // edge, the canonical anchor.
                debug_assert_eq!(chain.edges()[0], g.edges()[idx]);
                scratch.clear();
                scratch.extend_from_slice(c.colours());
                for &e in chain.edges() {
                    let j = g.edge_index(e).expect("chain edges come from g");
                    done[j] = true;
                    scratch[j] = if scratch[j] == a { b } else { a };
                }
                f(KempeMove::new(a, b, chain.edges()[0]), &scratch);
            }
        }
    }
    Ok(())
}

/// The canonical move set of a colouring: one [`KempeMove`] per chain
/// component per unordered colour pair, anchored at each component's
/// smallest edge. This is the out-neighbourhood generator of the
/// reconfiguration graph.
pub fn available_moves(g: &Graph, c: &Colouring) -> Result<Vec<KempeMove>, OracleError> {
    let mut moves = Vec::new();
    for_each_transition(g, c, |mv, _| moves.push(mv))?;
    Ok(moves)
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
    }
}

/// Partition of all proper k-edge-colourings into Kempe equivalence classes.
/// Class ids are assigned by first appearance in canonical enumeration
/// order, so the report is deterministic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComponentReport {
    /// Every proper colouring, in canonical enumeration order.
    pub states: Vec<Colouring>,
    /// Class id of each state, parallel to `states`.
    pub class_of: Vec<u32>,
    /// Size of each class, indexed by class id.
    pub class_sizes: Vec<u64>,
    /// Position in `states` of each class's first member.
    pub first_member: Vec<u32>,
}

impl ComponentReport {
    /// Number of proper colourings.
    pub fn total(&self) -> u64 {
        self.states.len() as u64
    }

    /// Number of Kempe equivalence classes.
    pub fn class_count(&self) -> usize {
        self.class_sizes.len()
    }

    /// Class sizes in decreasing order (the shape CLI reports use).
    pub fn sizes_sorted_desc(&self) -> Vec<u64> {
        let mut sizes = self.class_sizes.clone();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    /// The first-enumerated member of a class.
    pub fn representative(&self, class: u32) -> &Colouring {
        &self.states[self.first_member[class as usize] as usize]
    }

    /// Positions (into `states`) of a class's members, ascending.
    pub fn members(&self, class: u32) -> Vec<usize> {
        (0..self.states.len())
            .filter(|&i| self.class_of[i] == class)
            .collect()
    }
}

fn neighbour_positions(
    g: &Graph,
    c: &Colouring,
    index_of: &HashMap<u64, u32>,
) -> Result<Vec<u32>, OracleError> {
    let k = c.palette();
    let mut out = Vec::new();
    for_each_transition(g, c, |_, nb| {
        let enc = encode_raw(nb, k).expect("feasibility guard admitted the index space");
        let pos = index_of
            .get(&enc)
            .copied()
            .expect("Kempe moves preserve properness and the enumeration is complete");
        out.push(pos);
    })?;
    Ok(out)
}

fn union_transitions_sequential(
    g: &Graph,
    states: &[Colouring],
    index_of: &HashMap<u64, u32>,
    uf: &mut UnionFind,
) -> Result<(), OracleError> {
    for (i, c) in states.iter().enumerate() {
        for pos in neighbour_positions(g, c, index_of)? {
            uf.union(i as u32, pos);
        }
    }
    Ok(())
}

#[cfg(feature = "parallel")]
fn union_transitions_parallel(
    g: &Graph,
    states: &[Colouring],
    index_of: &HashMap<u64, u32>,
    uf: &mut UnionFind,
) -> Result<(), OracleError> {
    const BATCH: usize = 2048;
    // Workers share nothing and emit (state, neighbour) pairs; the single
    // reducer below owns the union-find. Batching bounds peak memory.
    for (batch_no, batch) in states.chunks(BATCH).enumerate() {
        let base = batch_no * BATCH;
        let pairs: Vec<Result<Vec<(u32, u32)>, OracleError>> = batch
            .par_iter()
            .enumerate()
            .map(|(off, c)| {
                let i = (base + off) as u32;
                neighbour_positions(g, c, index_of)
                    .map(|ns| ns.into_iter().map(|p| (i, p)).collect())
            })
            .collect();
        for row in pairs {
            for (a, b) in row? {
                uf.union(a, b);
            }
        }
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn union_transitions_parallel(
    g: &Graph,
    states: &[Colouring],
    index_of: &HashMap<u64, u32>,
    uf: &mut UnionFind,
) -> Result<(), OracleError> {
    union_transitions_sequential(g, states, index_of, uf)
}

/// Enumerates all proper k-edge-colourings and partitions them into Kempe
/// equivalence classes by exploring, from every colouring, every possible
/// Kempe move (one per chain component per colour pair — other anchors on
/// the same chain reach the same neighbour).
pub fn reconfiguration_components(
    g: &Graph,
    k: Colour,
    options: &OracleOptions,
) -> Result<ComponentReport, OracleError> {
    let states = enumerate_colourings(g, k, options)?;
    assert!(states.len() <= u32::MAX as usize, "cap keeps positions in u32");
    let mut index_of: HashMap<u64, u32> = HashMap::with_capacity(states.len());
    for (i, s) in states.iter().enumerate() {
        let enc = ColouringIndex::encode(s)?;
        let previous = index_of.insert(enc.0, i as u32);
        assert!(previous.is_none(), "enumeration emits each colouring once");
    }
    let mut uf = UnionFind::new(states.len());
    match options.mode {
        ExecMode::Sequential => union_transitions_sequential(g, &states, &index_of, &mut uf)?,
        ExecMode::Parallel => union_transitions_parallel(g, &states, &index_of, &mut uf)?,
    }
    let mut class_of = vec![0u32; states.len()];
    let mut class_sizes: Vec<u64> = Vec::new();
    let mut first_member: Vec<u32> = Vec::new();
    let mut id_of_root: HashMap<u32, u32> = HashMap::new();
    for i in 0..states.len() {
        let root = uf.find(i as u32);
        let id = *id_of_root.entry(root).or_insert_with(|| {
            class_sizes.push(0);
            first_member.push(i as u32);
            (class_sizes.len() - 1) as u32
        });
        class_of[i] = id;
        class_sizes[id as usize] += 1;
    }
    Ok(ComponentReport {
        states,
        class_of,
        class_sizes,
        first_member,
    })
}

struct BfsRun {
    dist: HashMap<u64, u32>,
    parent: HashMap<u64, (u64, KempeMove)>,
    found: bool,
}

/// Breadth-first search over the implicit reconfiguration graph from
/// `origin`, stopping early when `stop` is reached (if given). Distances are
/// numbers of Kempe moves, so first discovery is a shortest path.
fn bfs(g: &Graph, k: Colour, origin: &Colouring, stop: Option<u64>) -> Result<BfsRun, OracleError> {
    let origin_idx = ColouringIndex::encode(origin)?.0;
    let mut dist: HashMap<u64, u32> = HashMap::new();
    let mut parent: HashMap<u64, (u64, KempeMove)> = HashMap::new();
    let mut queue: VecDeque<u64> = VecDeque::new();
    dist.insert(origin_idx, 0);
    queue.push_back(origin_idx);
    if stop == Some(origin_idx) {
        return Ok(BfsRun {
            dist,
            parent,
            found: true,
        });
    }
    while let Some(cur) = queue.pop_front() {
        let d = dist[&cur];
        let c = ColouringIndex(cur).decode(g, k)?;
        let mut hit = false;
        for_each_transition(g, &c, |mv, nb| {
            let enc = encode_raw(nb, k).expect("feasibility guard admitted the index space");
            if let Entry::Vacant(slot) = dist.entry(enc) {
                slot.insert(d + 1);
                parent.insert(enc, (cur, mv));
                queue.push_back(enc);
                if stop == Some(enc) {
                    hit = true;
                }
            }
        })?;
        if hit {
            return Ok(BfsRun {
                dist,
                parent,
                found: true,
            });
        }
    }
    Ok(BfsRun {
        dist,
        parent,
        found: false,
    })
}

fn unwind(parent: &HashMap<u64, (u64, KempeMove)>, origin: u64, dest: u64) -> Vec<KempeMove> {
    let mut moves = Vec::new();
    let mut cur = dest;
    while cur != origin {
        let &(prev, mv) = parent.get(&cur).expect("reached states have parents");
        moves.push(mv);
        cur = prev;
    }
    moves.reverse();
    moves
}

fn ensure_proper(g: &Graph, c: &Colouring, which: &'static str) -> Result<(), OracleError> {
    if !validate_colouring(g, c)?.is_proper() {
        return Err(OracleError::NotProper { which });
    }
    Ok(())
}

/// Whether `a` and `b` (proper colourings with one palette) are connected by
/// Kempe moves; if so, also a shortest move sequence as a verified trace.
/// Breadth-first search from `a` with early exit at `b`; sequential in both
/// modes (the search is inherently frontier-ordered).
pub fn are_equivalent(
    g: &Graph,
    a: &Colouring,
    b: &Colouring,
    options: &OracleOptions,
) -> Result<(bool, Option<Trace>), OracleError> {
    let k = a.palette();
    if b.palette() != k {
        return Err(OracleError::PaletteMismatch {
            first: k,
            second: b.palette(),
        });
    }
    ensure_proper(g, a, "first")?;
    ensure_proper(g, b, "second")?;
    if a == b {
        return Ok((true, Some(Trace::new(g, a, Vec::new()))));
    }
    feasibility(g, k, options)?;
    let dest = ColouringIndex::encode(b)?.0;
    let run = bfs(g, k, a, Some(dest))?;
    if !run.found {
        return Ok((false, None));
    }
    let origin = ColouringIndex::encode(a)?.0;
    let trace = Trace::new(g, a, unwind(&run.parent, origin, dest));
    let verdict = verify_trace(g, a, &trace, Some(b)).expect("digests match by construction");
    assert!(
        matches!(verdict, Verdict::Accepted { .. }),
        "BFS path must replay to the destination: {verdict:?}"
    );
    Ok((true, Some(trace)))
}

/// Single-source shortest distances (in Kempe moves) from `origin` to every
/// colouring in its class.
#[derive(Clone, Debug)]
pub struct KempeDistances {
    origin: Colouring,
    dist: HashMap<u64, u32>,
    parent: HashMap<u64, (u64, KempeMove)>,
}

impl KempeDistances {
    /// The search origin.
    pub fn origin(&self) -> &Colouring {
        &self.origin
    }

    /// Number of colourings reached (the origin's class size).
    pub fn reached(&self) -> u64 {
        self.dist.len() as u64
    }

    /// Largest distance from the origin within its class.
    pub fn eccentricity(&self) -> u32 {
        self.dist.values().copied().max().unwrap_or(0)
    }

    /// Moves needed to reach `dest`, `None` when it is in another class.
    pub fn distance_to(&self, dest: &Colouring) -> Option<u32> {
        let enc = ColouringIndex::encode(dest).ok()?;
        self.dist.get(&enc.0).copied()
    }

    /// A shortest verified trace origin → `dest`, `None` when unreachable.
    pub fn trace_to(&self, g: &Graph, dest: &Colouring) -> Option<Trace> {
        let dest_idx = ColouringIndex::encode(dest).ok()?.0;
        self.dist.get(&dest_idx)?;
        let origin_idx =
            ColouringIndex::encode(&self.origin).expect("origin encoded during the search").0;
        let trace = Trace::new(g, &self.origin, unwind(&self.parent, origin_idx, dest_idx));
        let verdict =
            verify_trace(g, &self.origin, &trace, Some(dest)).expect("digests match by construction");
        assert!(
            matches!(verdict, Verdict::Accepted { .. }),
            "BFS path must replay to the destination: {verdict:?}"
        );
        Some(trace)
    }
}

/// Full breadth-first sweep from `origin` (no early exit): shortest
/// distances to every colouring in its Kempe class.
pub fn kempe_distances(
    g: &Graph,
    origin: &Colouring,
    options: &OracleOptions,
) -> Result<KempeDistances, OracleError> {
    ensure_proper(g, origin, "origin")?;
    feasibility(g, origin.palette(), options)?;
    let run = bfs(g, origin.palette(), origin, None)?;
    Ok(KempeDistances {
        origin: origin.clone(),
        dist: run.dist,
        parent: run.parent,
    })
}

fn eccentricity_of(g: &Graph, state: &Colouring) -> Result<u32, OracleError> {
    let run = bfs(g, state.palette(), state, None)?;
    Ok(run.dist.values().copied().max().unwrap_or(0))
}

/// Reconfiguration diameter of every class in the report (largest shortest
/// distance between two members), indexed by class id. Runs one full search
/// per state — quadratic in class size, intended for small reports only.
pub fn class_diameters(
    g: &Graph,
    report: &ComponentReport,
    mode: ExecMode,
) -> Result<Vec<u32>, OracleError> {
    let mut out = Vec::with_capacity(report.class_count());
    for class in 0..report.class_count() as u32 {
        let members = report.members(class);
        let ecc = match mode {
            ExecMode::Sequential => {
                let mut best = 0;
                for &i in &members {
                    best = best.max(eccentricity_of(g, &report.states[i])?);
                }
                Ok::<u32, OracleError>(best)
            }
            ExecMode::Parallel => diameters_parallel(g, report, &members),
        }?;
        out.push(ecc);
    }
    Ok(out)
}

#[cfg(feature = "parallel")]
fn diameters_parallel(
    g: &Graph,
    report: &ComponentReport,
    members: &[usize],
) -> Result<u32, OracleError> {
    members
        .par_iter()
        .map(|&i| eccentricity_of(g, &report.states[i]))
        .try_reduce(|| 0, |a, b| Ok(a.max(b)))
}

#[cfg(not(feature = "parallel"))]
fn diameters_parallel(
    g: &Graph,
    report: &ComponentReport,
    members: &[usize],
) -> Result<u32, OracleError> {
    let mut best = 0;
    for &i in members {
        best = best.max(eccentricity_of(g, &report.states[i])?);
    }
    Ok(best)
}
