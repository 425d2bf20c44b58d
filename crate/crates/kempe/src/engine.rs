//! The constructive engine: turns any proper (x+1)-edge-colouring of a
//! triangle-free graph into any given proper x-edge-colouring of the same
//! graph via an explicit, verifiable sequence of Kempe moves.
//!
//! The pipeline has three parts.
//!
//! 1. **Regularization** ([`regularize`], [`extend_start`]): the graph is
//!    embedded into an x-regular, still triangle-free host by repeatedly
//!    taking two identically coloured copies and joining the copies of each
//!    minimum-degree vertex with an edge in a colour missing there. The
//!    target colouring extends along the way; the start colouring extends by
//!    replaying the same doubling.
//! 2. **Descent** ([`make_class_monochromatic`], [`reduce_step`]): on the
//!    x-regular host, each target class is a perfect matching `M`. Fixing a
//!    designated colour, edges are *good* (in `M`, designated colour), *bad*
//!    (in `M`, other colour) or *ugly* (designated colour, outside `M`).
//!    Each reduction step fires the first applicable case — swap a bad edge
//!    whose endpoints both miss the designated colour; invert a path or
//!    comet fan at an ugly edge; or free a matched partner by inverting a
//!    cycle fan and then swap — and strictly decreases `(|bad|, |ugly|)`
//!    lexicographically. Classes are processed from the highest colour down;
//!    each finished class is deleted, leaving a smaller regular graph whose
//!    palette keeps the original slack colour, so every level move is also a
//!    valid move of the full host ([`transform`] checks this chain-for-chain).
//! 3. **Projection** ([`project_trace`]): every host chain meets the
//!    embedded original in whole chains of the original, so each host move
//!    projects to zero or more moves there. The projected trace replays to
//!    the target exactly.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::chain::{apply_move, chain_at, ChainError, KempeMove};
use crate::colouring::{
    colour_class, is_proper, missing_colours, validate_colouring, Colour, Colouring,
    ColouringError,
};
use crate::fan::{
    fan_sequence, invert_sequence, realize_comet, realize_nonsaturated_cycle, realize_path,
    realize_saturated_cycle, smallest_nonsaturation_witness, FanError, FanShape,
};
use crate::graph::{Edge, Graph, GraphError, Matching, Vertex};
use crate::trace::{verify_trace, Trace, TraceError, Verdict};

/// Errors from the engine pipeline.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("graph has a triangle {0}-{1}-{2}")]
    Triangle(Vertex, Vertex, Vertex),
    #[error("start palette {start} must be exactly one more than target palette {target}")]
    PaletteMismatch { start: Colour, target: Colour },
    #[error("palette {palette} is below the maximum degree {degree}")]
    PaletteBelowDegree { palette: Colour, degree: usize },
    #[error("{which} colouring is improper at vertex {vertex} (colour {colour} repeats)")]
    Improper {
        which: &'static str,
        vertex: Vertex,
        colour: Colour,
    },
    #[error("no bad edge to reduce")]
    NoBadEdges,
    #[error("emitted {moves} moves, exceeding the cap of {cap}")]
    MoveCapExceeded { moves: u64, cap: u64 },
    #[error("host trace rejected at move {index}: {reason}")]
    HostTraceRejected { index: usize, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Colouring(#[from] ColouringError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Trace(#[from] TraceError),
}

/// Partition of edges relative to a matching `m` and a designated colour:
/// *good* edges are matching edges wearing the colour, *bad* edges are
/// matching edges wearing another colour, *ugly* edges wear the colour
/// outside the matching.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EdgeStatus {
    pub good: Vec<Edge>,
    pub bad: Vec<Edge>,
    pub ugly: Vec<Edge>,
}

impl EdgeStatus {
    /// The termination measure `(|bad|, |ugly|)`; tuples compare
    /// lexicographically.
    pub fn measure(&self) -> (usize, usize) {
        (self.bad.len(), self.ugly.len())
    }

    /// Whether the designated class already equals the matching.
    pub fn is_aligned(&self) -> bool {
        self.bad.is_empty() && self.ugly.is_empty()
    }
}

/// Which reduction case fired.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum ReduceCase {
    /// A bad edge with both endpoints free: one single-edge swap.
    FreeBadEdge,
    /// An ugly edge with a path fan sequence: invert the path.
    UglyPath,
    /// An ugly edge with a comet fan sequence: collapse and invert.
    UglyComet,
    /// All ugly sequences are cycles: invert one to free a matched partner,
    /// then swap the freed bad edge.
    CycleInversion { saturated: bool },
}

impl ReduceCase {
    /// Stable name used in reports.
    pub fn name(&self) -> &'static str {
        match self {
            ReduceCase::FreeBadEdge => "free-bad-edge",
            ReduceCase::UglyPath => "ugly-path",
            ReduceCase::UglyComet => "ugly-comet",
            ReduceCase::CycleInversion { saturated: false } => "cycle-nonsaturated",
            ReduceCase::CycleInversion { saturated: true } => "cycle-saturated",
        }
    }
}

/// Totals of the reduction cases fired during a run.
#[derive(Clone, Copy, Default, PartialEq, Eq, Debug)]
pub struct CaseCounts {
    pub free_bad_edge: usize,
    pub ugly_path: usize,
    pub ugly_comet: usize,
    pub cycle_nonsaturated: usize,
    pub cycle_saturated: usize,
}

impl CaseCounts {
    fn record(&mut self, case: ReduceCase) {
        match case {
            ReduceCase::FreeBadEdge => self.free_bad_edge += 1,
            ReduceCase::UglyPath => self.ugly_path += 1,
            ReduceCase::UglyComet => self.ugly_comet += 1,
            ReduceCase::CycleInversion { saturated: false } => self.cycle_nonsaturated += 1,
            ReduceCase::CycleInversion { saturated: true } => self.cycle_saturated += 1,
        }
    }

    /// Total number of reduction checkpoints.
    pub fn total(&self) -> usize {
        self.free_bad_edge
            + self.ugly_path
            + self.ugly_comet
            + self.cycle_nonsaturated
            + self.cycle_saturated
    }

    /// `(name, count)` rows in a stable order.
    pub fn rows(&self) -> [(&'static str, usize); 5] {
        [
            ("free-bad-edge", self.free_bad_edge),
            ("ugly-path", self.ugly_path),
            ("ugly-comet", self.ugly_comet),
            ("cycle-nonsaturated", self.cycle_nonsaturated),
            ("cycle-saturated", self.cycle_saturated),
        ]
    }
}

/// One descent checkpoint recorded by [`make_class_monochromatic`]: which
/// reduction case fired, how many moves it spent, and the `(|bad|, |ugly|)`
/// measure on either side. `measure_after < measure_before` always holds
/// (lexicographically); the run asserts it and callers can audit it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Checkpoint {
    /// Reduction case that fired.
    pub case: ReduceCase,
    /// Moves the case spent.
    pub moves: usize,
    /// `(|bad|, |ugly|)` before the case ran.
    pub measure_before: (usize, usize),
    /// `(|bad|, |ugly|)` after it ran.
    pub measure_after: (usize, usize),
}

/// An embedding of a graph into a regular host produced by [`regularize`]:
/// the original sits as an induced subgraph (vertices `1..=n`, identity map)
/// and `layers` records how many doubling steps built the host.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Embedding {
    source: Graph,
    host: Graph,
    vertex_map: Vec<Vertex>,
    layers: usize,
    degree: usize,
}

impl Embedding {
    /// The embedded graph.
    pub fn source(&self) -> &Graph {
        &self.source
    }

    /// The regular host graph.
    pub fn host(&self) -> &Graph {
        &self.host
    }

    /// Number of doubling steps taken.
    pub fn layers(&self) -> usize {
        self.layers
    }

    /// The host's regular degree.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Host vertex carrying source vertex `v`.
    pub fn host_vertex(&self, v: Vertex) -> Vertex {
        self.vertex_map[v]
    }

    /// Source vertex sitting at host vertex `h`, if any.
    pub fn source_vertex(&self, h: Vertex) -> Option<Vertex> {
        // The map is the identity prefix by construction; keep a general
        // search in case that ever changes.
        self.vertex_map[1..].iter().position(|&hv| hv == h).map(|i| i + 1)
    }

    /// Whether the host is the source itself.
    pub fn is_identity(&self) -> bool {
        self.layers == 0
    }

    /// `(source vertex, host vertex)` pairs.
    pub fn pairs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertex_map
            .iter()
            .enumerate()
            .skip(1)
            .map(|(g, &h)| (g, h))
    }
}

fn ensure_proper(g: &Graph, c: &Colouring, which: &'static str) -> Result<(), EngineError> {
    let report = validate_colouring(g, c)?;
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(EngineError::Improper {
            which,
            vertex: v.vertex,
            colour: v.colour,
        }),
    }
}

/// Whether `u` misses the designated colour.
fn is_free(g: &Graph, c: &Colouring, u: Vertex, colour: Colour) -> bool {
    g.neighbours(u).iter().all(|&(_, idx)| c.colour(idx) != colour)
}

/// Partitions the matching and the designated colour class into good, bad
/// and ugly edges (each list sorted).
pub fn classify_edges(
    g: &Graph,
    c: &Colouring,
    m: &Matching,
    colour: Colour,
) -> Result<EdgeStatus, EngineError> {
    if colour == 0 || colour > c.palette() {
        return Err(ColouringError::ColourOutOfPalette {
            colour,
            palette: c.palette(),
        }
        .into());
    }
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for &e in m.edges() {
        let idx = g.edge_index(e).ok_or(GraphError::MissingEdge(e))?;
        if c.colour(idx) == colour {
            good.push(e);
        } else {
            bad.push(e);
        }
    }
    let ugly = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(idx, e)| c.colour(idx) == colour && !m.contains(*e))
        .map(|(_, e)| *e)
        .collect();
    Ok(EdgeStatus { good, bad, ugly })
}

/// Follows the smallest ugly edge's cycle to a free vertex: the last spoke
/// `x_p` of the cycle misses the designated colour. Returns that free vertex
/// `u`, its matching partner `v` (the edge `uv` is necessarily bad), and the
/// unique ugly edge at `v`. Returns `None` when no ugly edge exists.
///
/// Preconditions (the third reduction case): bad edges exist, no bad edge
/// has two free endpoints, every ugly fan sequence is a cycle, and `m` is
/// perfect.
pub fn find_free_vertex_via_ugly(
    g: &Graph,
    c: &Colouring,
    m: &Matching,
    colour: Colour,
) -> Result<Option<(Vertex, Vertex, Edge)>, EngineError> {
    let st = classify_edges(g, c, m, colour)?;
    let Some(&e) = st.ugly.first() else {
        return Ok(None);
    };
    let s = fan_sequence(g, c, e.u(), e.v())?;
    assert!(
        matches!(s.shape(), FanShape::Cycle { .. }),
        "this case runs only when every ugly sequence is a cycle"
    );
    let u = *s.spokes().last().expect("cycles have spokes");
    assert!(
        is_free(g, c, u, colour),
        "the cycle closes through the designated colour, so its last spoke misses it"
    );
    let v = m
        .partner(u)
        .expect("a perfect matching covers the free vertex");
    let uv = Edge::new(u, v);
    assert_ne!(
        c.edge_colour(g, uv),
        Some(colour),
        "u misses the designated colour, so its matching edge is bad"
    );
    let vw = g
        .neighbours(v)
        .iter()
        .find(|&&(_, idx)| c.colour(idx) == colour)
        .map(|&(w, _)| Edge::new(v, w))
        .expect("v is not free (else the bad edge uv had two free endpoints)");
    assert!(!m.contains(vw), "v's matching edge is uv, so vw is ugly");
    assert!(
        !g.has_edge(u, vw.other(v)),
        "triangle-freeness keeps the free vertex away from the ugly edge's far end"
    );
    Ok(Some((u, v, vw)))
}

/// Swaps the single-edge component of `K(colour, c(e))` at a bad edge whose
/// endpoints both miss the designated colour, turning it good.
fn swap_free_bad_edge(
    g: &Graph,
    c: &Colouring,
    colour: Colour,
    e: Edge,
) -> Result<(Colouring, KempeMove), EngineError> {
    let ce = c.edge_colour(g, e).expect("edge exists");
    assert_ne!(ce, colour, "a bad edge wears another colour");
    let chain = chain_at(g, c, colour, ce, e)?;
    assert_eq!(
        chain.edges(),
        &[e],
        "both endpoints miss the designated colour, so the component is the edge alone"
    );
    let mv = KempeMove::new(colour, ce, e);
    Ok((apply_move(g, c, mv)?, mv))
}

/// Scans the ugly edges (sorted, smaller endpoint as centre first) for a
/// path or comet fan sequence and realizes the first hit.
fn try_ugly_path_or_comet(
    g: &Graph,
    c: &Colouring,
    ugly: &[Edge],
) -> Result<Option<(Colouring, Trace, ReduceCase)>, EngineError> {
    for &e in ugly {
        for (centre, start) in [(e.u(), e.v()), (e.v(), e.u())] {
            let s = fan_sequence(g, c, centre, start)?;
            match s.shape() {
                FanShape::Path => {
                    let t = realize_path(g, c, &s)?;
                    let c2 = invert_sequence(g, c, &s)?;
                    return Ok(Some((c2, t, ReduceCase::UglyPath)));
                }
                FanShape::Comet { .. } => {
                    let (c2, t) = realize_comet(g, c, &s)?;
                    return Ok(Some((c2, t, ReduceCase::UglyComet)));
                }
                FanShape::Cycle { .. } => {}
            }
        }
    }
    Ok(None)
}

/// Inverts the cycle fan of ugly edge `e` centred at `centre` (choosing the
/// saturated or non-saturated realization as needed) and returns the
/// resulting colouring, trace and case tag.
fn invert_ugly_cycle(
    g: &Graph,
    c: &Colouring,
    e: Edge,
    centre: Vertex,
) -> Result<(Colouring, Trace, ReduceCase), EngineError> {
    let other = e.other(centre);
    let su = fan_sequence(g, c, centre, other)?;
    let saturated = match su.shape() {
        FanShape::Cycle { saturated } => saturated,
        shape => panic!(
            "paths and comets were handled before: sequence at {centre} is a {}",
            shape.name()
        ),
    };
    let t = if saturated {
        let sv = fan_sequence(g, c, other, centre)?;
        assert!(
            matches!(sv.shape(), FanShape::Cycle { .. }),
            "paths and comets were handled at both endpoints"
        );
        realize_saturated_cycle(g, c, &su, &sv)?
    } else {
        let r = smallest_nonsaturation_witness(g, c, &su)?.expect("non-saturated cycle");
        realize_nonsaturated_cycle(g, c, &su, r)?
    };
    let c2 = invert_sequence(g, c, &su)?;
    Ok((c2, t, ReduceCase::CycleInversion { saturated }))
}

/// One descent checkpoint. Exactly one case fires, tried in order: (1) a bad
/// edge with two free endpoints is swapped directly; (2) an ugly edge with a
/// path or comet sequence at either endpoint is inverted; (3) otherwise every
/// ugly sequence is a cycle — follow one to a free vertex `u`, invert the
/// cycle at the far end of the ugly edge at `u`'s partner `v` (freeing `v`
/// while triangle-freeness keeps `u` free), then swap the bad edge `uv`.
/// The measure `(|bad|, |ugly|)` strictly decreases.
pub fn reduce_step(
    g: &Graph,
    c: &Colouring,
    m: &Matching,
    colour: Colour,
) -> Result<(Colouring, Trace, ReduceCase), EngineError> {
    let st = classify_edges(g, c, m, colour)?;
    if st.bad.is_empty() {
        return Err(EngineError::NoBadEdges);
    }
    for &e in &st.bad {
        if is_free(g, c, e.u(), colour) && is_free(g, c, e.v(), colour) {
            let (c2, mv) = swap_free_bad_edge(g, c, colour, e)?;
            return Ok((c2, Trace::new(g, c, vec![mv]), ReduceCase::FreeBadEdge));
        }
    }
    if let Some(hit) = try_ugly_path_or_comet(g, c, &st.ugly)? {
        return Ok(hit);
    }
    let (u, v, vw) = find_free_vertex_via_ugly(g, c, m, colour)?
        .expect("bad edges without two free endpoints force an ugly edge");
    let w = vw.other(v);
    let (after, t, case) = invert_ugly_cycle(g, c, vw, w)?;
    assert!(
        is_free(g, &after, v, colour),
        "the inverted cycle hands v the spoke colour of its ugly edge"
    );
    assert!(
        is_free(g, &after, u, colour),
        "u is not adjacent to the centre, so its edges were untouched"
    );
    let (c2, mv) = swap_free_bad_edge(g, &after, colour, Edge::new(u, v))?;
    let mut moves = t.moves;
    moves.push(mv);
    Ok((c2, Trace::new(g, c, moves), case))
}

/// Runs [`reduce_step`] until no bad edge remains, then clears any leftover
/// ugly edges the same way (with a perfect matching a bad-free state has no
/// ugly edges — the colour class and the matching both touch every vertex —
/// so the second loop is defensive). Returns the final colouring, the
/// concatenated trace, and one [`Checkpoint`] row per reduction.
/// Terminal state: the designated colour class equals `m` exactly.
pub fn make_class_monochromatic(
    g: &Graph,
    c: &Colouring,
    m: &Matching,
    colour: Colour,
) -> Result<(Colouring, Trace, Vec<Checkpoint>), EngineError> {
    let mut cur = c.clone();
    let mut moves: Vec<KempeMove> = Vec::new();
    let mut steps: Vec<Checkpoint> = Vec::new();
    let checkpoint_cap = g.edge_count() * (c.palette() as usize + 1) + 1;
    let mut st = classify_edges(g, &cur, m, colour)?;
    while !st.bad.is_empty() {
        let before = st.measure();
        let (next, t, case) = reduce_step(g, &cur, m, colour)?;
        let spent = t.moves.len();
        moves.extend(t.moves);
        cur = next;
        st = classify_edges(g, &cur, m, colour)?;
        assert!(
            st.measure() < before,
            "every checkpoint strictly decreases (|bad|, |ugly|)"
        );
        steps.push(Checkpoint {
            case,
            moves: spent,
            measure_before: before,
            measure_after: st.measure(),
        });
        assert!(steps.len() < checkpoint_cap, "descent exceeded its checkpoint bound");
    }
    while !st.ugly.is_empty() {
        let before = st.measure();
        let (next, t, case) = match try_ugly_path_or_comet(g, &cur, &st.ugly)? {
            Some(hit) => hit,
            None => {
                let e = st.ugly[0];
                invert_ugly_cycle(g, &cur, e, e.u())?
            }
        };
        let spent = t.moves.len();
        moves.extend(t.moves);
        cur = next;
        st = classify_edges(g, &cur, m, colour)?;
        assert!(
            st.measure() < before,
            "designated-colour cleanup must strictly decrease (|bad|, |ugly|)"
        );
        steps.push(Checkpoint {
            case,
            moves: spent,
            measure_before: before,
            measure_after: st.measure(),
        });
        assert!(steps.len() < checkpoint_cap, "cleanup exceeded its checkpoint bound");
    }
    assert!(st.is_aligned());
    assert_eq!(
        colour_class(g, &cur, colour)?,
        *m,
        "terminal state: the designated class is exactly the matching"
    );
    Ok((cur, Trace::new(g, c, moves), steps))
}

/// One doubling step: two identically coloured copies, plus one edge between
/// the copies of every minimum-degree vertex, coloured with the smallest
/// colour missing at that vertex (the copies miss the same colours).
fn double_once(h: &Graph, col: &Colouring) -> Result<(Graph, Colouring), EngineError> {
    let n = h.vertex_count();
    let dmin = h.min_degree();
    let mut pairs: Vec<(Vertex, Vertex)> = Vec::with_capacity(2 * h.edge_count() + n);
    let mut coloured: Vec<(Edge, Colour)> = Vec::with_capacity(pairs.capacity());
    for (idx, e) in h.edges().iter().enumerate() {
        let ce = col.colour(idx);
        pairs.push((e.u(), e.v()));
        coloured.push((*e, ce));
        pairs.push((e.u() + n, e.v() + n));
        coloured.push((Edge::new(e.u() + n, e.v() + n), ce));
    }
    for v in h.vertices().filter(|&v| h.degree(v) == dmin) {
        let miss = missing_colours(h, col, v);
        let cross = *miss
            .first()
            .expect("degree below the palette leaves a colour free");
        pairs.push((v, v + n));
        coloured.push((Edge::new(v, v + n), cross));
    }
    let doubled = Graph::new(2 * n, pairs)?;
    let col2 = Colouring::from_edge_colours(&doubled, col.palette(), coloured)?;
    assert!(
        is_proper(&doubled, &col2),
        "cross edges take a colour missing at both copies"
    );
    Ok((doubled, col2))
}

/// Embeds `g` into an x-regular host (x = the target's palette) by repeated
/// doubling, extending the target colouring along the way. The host is
/// triangle-free whenever `g` is, and `g` is an induced subgraph of the host
/// (both checked).
pub fn regularize(g: &Graph, target: &Colouring) -> Result<(Embedding, Colouring), EngineError> {
    let x = target.palette() as usize;
    if x < g.max_degree() {
        return Err(EngineError::PaletteBelowDegree {
            palette: target.palette(),
            degree: g.max_degree(),
        });
    }
    ensure_proper(g, target, "target")?;
    let mut host = g.clone();
    let mut col = target.clone();
    let mut layers = 0;
    while host.regular_degree() != Some(x) {
        let (h2, c2) = double_once(&host, &col)?;
        host = h2;
        col = c2;
        layers += 1;
        assert!(
            layers <= x,
            "each doubling raises the minimum degree, so at most x steps happen"
        );
    }
    if g.triangle_witness().is_none() {
        assert!(
            host.triangle_witness().is_none(),
            "cross edges form a matching between copies and cannot close a triangle"
        );
    }
    let n = g.vertex_count();
    let induced: Vec<Edge> = host
        .edges()
        .iter()
        .copied()
        .filter(|e| e.v() <= n)
        .collect();
    assert_eq!(
        induced,
        g.edges(),
        "the original graph sits induced on vertices 1..=n"
    );
    let emb = Embedding {
        source: g.clone(),
        host,
        vertex_map: (0..=n).collect(),
        layers,
        degree: x,
    };
    Ok((emb, col))
}

/// Extends a start colouring of the source to the host by replaying the same
/// doubling steps; cross edges take the smallest colour missing at the
/// vertex (identical copies guarantee one exists while the degree is below
/// the palette). The restriction to the embedded source is the start
/// colouring itself.
pub fn extend_start(emb: &Embedding, start: &Colouring) -> Result<Colouring, EngineError> {
    ensure_proper(emb.source(), start, "start")?;
    let mut g = emb.source().clone();
    let mut col = start.clone();
    for _ in 0..emb.layers() {
        let (g2, c2) = double_once(&g, &col)?;
        g = g2;
        col = c2;
    }
    assert_eq!(
        g,
        *emb.host(),
        "the doubling is structure-driven, so replaying it reproduces the host"
    );
    Ok(col)
}

/// Splits a set of edges into connected components, each sorted, components
/// ordered by their smallest edge.
fn edge_components(edges: &[Edge]) -> Vec<Vec<Edge>> {
    let mut at: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        at.entry(e.u()).or_default().push(i);
        at.entry(e.v()).or_default().push(i);
    }
    let mut seen = vec![false; edges.len()];
    let mut comps = Vec::new();
    for start in 0..edges.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![edges[start]];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let e = edges[i];
            for v in [e.u(), e.v()] {
                for &j in &at[&v] {
                    if !seen[j] {
                        seen[j] = true;
                        comp.push(edges[j]);
                        stack.push(j);
                    }
                }
            }
        }
        comp.sort();
        comps.push(comp);
    }
    comps.sort();
    comps
}

/// Projects a host trace onto the embedded source: each host chain meets the
/// source in zero or more whole source chains (checked move by move), and
/// each such chain becomes one source move. After every host move the source
/// colouring equals the host colouring restricted to the embedding (checked).
/// With the identity embedding the trace is returned unchanged.
pub fn project_trace(
    emb: &Embedding,
    h_trace: &Trace,
    g_start: &Colouring,
) -> Result<Trace, EngineError> {
    let g = emb.source();
    let h = emb.host();
    let start_h = extend_start(emb, g_start)?;
    match verify_trace(h, &start_h, h_trace, None)? {
        Verdict::Accepted { .. } => {}
        Verdict::RejectedMove { index, reason } => {
            return Err(EngineError::HostTraceRejected { index, reason })
        }
        Verdict::FinalMismatch { .. } => unreachable!("no expected colouring supplied"),
    }

    let n_h = h.vertex_count();
    let mut inv: Vec<Option<Vertex>> = vec![None; n_h + 1];
    for (gv, hv) in emb.pairs() {
        inv[hv] = Some(gv);
    }
    let to_source = |e: Edge| -> Option<Edge> {
        match (inv[e.u()], inv[e.v()]) {
            (Some(a), Some(b)) => {
                assert!(g.has_edge(a, b), "the embedding is induced");
                Some(Edge::new(a, b))
            }
            _ => None,
        }
    };

    let mut h_col = start_h;
    let mut g_col = g_start.clone();
    let mut out: Vec<KempeMove> = Vec::new();
    for mv in &h_trace.moves {
        let chain = chain_at(h, &h_col, mv.c1(), mv.c2(), mv.anchor())?;
        let mut part: Vec<Edge> = chain.edges().iter().filter_map(|&e| to_source(e)).collect();
        part.sort();
        let anchor_override = to_source(mv.anchor());
        for comp in edge_components(&part) {
            let anchor = match anchor_override {
                Some(a) if comp.binary_search(&a).is_ok() => a,
                _ => comp[0],
            };
            let g_chain = chain_at(g, &g_col, mv.c1(), mv.c2(), anchor)?;
            assert_eq!(
                g_chain.edges(),
                &comp[..],
                "a host chain meets the embedded source in whole source chains"
            );
            let gm = KempeMove::new(mv.c1(), mv.c2(), anchor);
            g_col = apply_move(g, &g_col, gm)?;
            out.push(gm);
        }
        h_col = apply_move(h, &h_col, *mv)?;
        for (idx, e) in g.edges().iter().enumerate() {
            let he = Edge::new(emb.host_vertex(e.u()), emb.host_vertex(e.v()));
            assert_eq!(
                g_col.colour(idx),
                h_col.edge_colour(h, he).expect("embedded edge"),
                "projection tracks the host restriction after every move"
            );
        }
    }
    Ok(Trace::new(g, g_start, out))
}

/// Knobs for [`transform`].
#[derive(Clone, Debug, Default)]
pub struct TransformOptions {
    /// Abort if the host trace exceeds this many moves (default: |E(host)|³,
    /// far above the analytical bound — hitting it means a bug).
    pub move_cap: Option<u64>,
    /// Record the host colouring after every checkpoint in the report.
    pub collect_checkpoints: bool,
}

/// Statistics of a [`transform`] run.
#[derive(Clone, PartialEq, Debug)]
pub struct TransformReport {
    /// Levels processed (the target palette size).
    pub levels: usize,
    /// Doubling steps used by regularization.
    pub layers: usize,
    /// Moves in the host trace.
    pub host_moves: usize,
    /// Moves in the projected trace.
    pub projected_moves: usize,
    /// Reduction checkpoints across all levels.
    pub checkpoints: usize,
    /// How often each reduction case fired.
    pub cases: CaseCounts,
    /// The analytical move bound 4·|E(host)|·(Δ+2)·Δ.
    pub move_bound: u64,
    /// `(label, host colouring)` pairs when checkpoint collection is on.
    pub checkpoint_colourings: Vec<(String, Colouring)>,
    /// One `(label, checkpoint)` row per reduction, always collected.
    pub checkpoint_log: Vec<(String, Checkpoint)>,
}

/// Result of [`transform`]: the projected trace on the input graph plus the
/// host-level artefacts it was derived from.
#[derive(Clone, PartialEq, Debug)]
pub struct TransformOutcome {
    /// Verifiable trace on the input graph: start → target.
    pub trace: Trace,
    /// The untranslated trace on the regular host.
    pub host_trace: Trace,
    /// The embedding used.
    pub embedding: Embedding,
    /// The start colouring extended to the host.
    pub host_start: Colouring,
    /// The target colouring extended to the host.
    pub host_target: Colouring,
    /// Run statistics.
    pub report: TransformReport,
}

/// Transforms `start` (palette x+1) into `target` (palette x) on a
/// triangle-free graph by explicit Kempe moves: regularize around the
/// target, extend the start, then walk the levels x down to 1 — at level ℓ
/// the working palette is {1..ℓ} plus the slack colour x+1 (renamed ℓ+1
/// locally), the target class ℓ is made monochromatic in colour ℓ and
/// retired. Every level move is checked to have the same chain in the full
/// host before being applied there. The final host colouring equals the
/// extended target, and the projected trace replays on `g` to `target`
/// (self-verified).
pub fn transform(
    g: &Graph,
    start: &Colouring,
    target: &Colouring,
    options: &TransformOptions,
) -> Result<TransformOutcome, EngineError> {
    if let Some((a, b, c3)) = g.triangle_witness() {
        return Err(EngineError::Triangle(a, b, c3));
    }
    let x = target.palette();
    if start.palette() != x + 1 {
        return Err(EngineError::PaletteMismatch {
            start: start.palette(),
            target: x,
        });
    }
    ensure_proper(g, start, "start")?;
    let (emb, host_target) = regularize(g, target)?;
    let host_start = extend_start(&emb, start)?;
    let h = emb.host().clone();
    let cap = options
        .move_cap
        .unwrap_or_else(|| (h.edge_count() as u64).pow(3));

    let mut cur_graph = h.clone();
    let mut full = host_start.clone();
    let mut host_moves: Vec<KempeMove> = Vec::new();
    let mut cases = CaseCounts::default();
    let mut checkpoint_colourings: Vec<(String, Colouring)> = Vec::new();
    let mut checkpoint_log: Vec<(String, Checkpoint)> = Vec::new();

    for level in (1..=x).rev() {
        let mut local_vec: Vec<Colour> = Vec::with_capacity(cur_graph.edge_count());
        for e in cur_graph.edges() {
            let fc = full.edge_colour(&h, *e).expect("level edges live in the host");
            let lc = if fc <= level {
                fc
            } else {
                assert_eq!(fc, x + 1, "level palette is 1..=level plus the slack colour");
                level + 1
            };
            local_vec.push(lc);
        }
        let local = Colouring::new(&cur_graph, level + 1, local_vec)?;
        let m = colour_class(&h, &host_target, level)?;
        assert!(
            m.is_perfect(&cur_graph),
            "target classes are perfect matchings of the level graph"
        );
        let (local_fin, t, steps) = make_class_monochromatic(&cur_graph, &local, &m, level)?;

        let translate = |c: Colour| if c <= level { c } else { x + 1 };
        let boundaries: Vec<usize> = steps
            .iter()
            .scan(0usize, |acc, s| {
                *acc += s.moves;
                Some(*acc)
            })
            .collect();
        let mut next_boundary = 0usize;
        let mut local_cur = local.clone();
        for (i, mv) in t.moves.iter().enumerate() {
            let local_chain = chain_at(&cur_graph, &local_cur, mv.c1(), mv.c2(), mv.anchor())?;
            let fmv = KempeMove::new(translate(mv.c1()), translate(mv.c2()), mv.anchor());
            let full_chain = chain_at(&h, &full, fmv.c1(), fmv.c2(), fmv.anchor())?;
            assert_eq!(
                full_chain.edges(),
                local_chain.edges(),
                "retired classes wear colours outside the level palette, so level chains are host chains"
            );
            local_cur = apply_move(&cur_graph, &local_cur, *mv)?;
            full = apply_move(&h, &full, fmv)?;
            host_moves.push(fmv);
            if host_moves.len() as u64 > cap {
                return Err(EngineError::MoveCapExceeded {
                    moves: host_moves.len() as u64,
                    cap,
                });
            }
            if next_boundary < boundaries.len() && boundaries[next_boundary] == i + 1 {
                if options.collect_checkpoints {
                    checkpoint_colourings
                        .push((format!("level-{level}-checkpoint-{next_boundary}"), full.clone()));
                }
                next_boundary += 1;
            }
        }
        assert_eq!(local_cur, local_fin, "replay matches the level run");
        for (i, s) in steps.iter().enumerate() {
            cases.record(s.case);
            checkpoint_log.push((format!("level-{level}-checkpoint-{i}"), *s));
        }
        assert_eq!(
            colour_class(&cur_graph, &local_cur, level)?,
            m,
            "level ends with its class aligned"
        );
        cur_graph = cur_graph.remove_matching(&m)?;
    }
    assert_eq!(
        full.colours(),
        host_target.colours(),
        "all target classes aligned, so the host colouring equals the extended target"
    );

    let host_trace = Trace::new(&h, &host_start, host_moves);
    let trace = project_trace(&emb, &host_trace, start)?;
    match verify_trace(g, start, &trace, Some(target))? {
        Verdict::Accepted { .. } => {}
        bad => panic!("self-verification failed: {bad:?}"),
    }

    let degree = x as u64;
    let report = TransformReport {
        levels: x as usize,
        layers: emb.layers(),
        host_moves: host_trace.len(),
        projected_moves: trace.len(),
        checkpoints: cases.total(),
        cases,
        move_bound: 4 * h.edge_count() as u64 * (degree + 2) * degree,
        checkpoint_colourings,
        checkpoint_log,
    };
    Ok(TransformOutcome {
        trace,
        host_trace,
        embedding: emb,
        host_start,
        host_target,
        report,
    })
}
