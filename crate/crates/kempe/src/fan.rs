//! Fan sequences around a vertex and their realization as Kempe-move traces.
//!
//! Fix a Δ-regular graph with a proper (Δ+1)-colouring, a centre `u`, and a
//! neighbour `v`. Walking "the edge at `u` whose colour is the missing colour
//! of the previous spoke" from `uv` visits a sequence of neighbours
//! `x₀ = v, x₁, …, x_p`. Because every vertex misses exactly one colour, the
//! walk has out-degree ≤ 1 and must end one of three ways:
//!
//! * **path** — `m(x_p) = m(u)`, no edge at `u` continues the walk;
//! * **cycle** — the walk returns to `x₀`;
//! * **comet** — the walk returns to an interior spoke `x_q`, `0 < q < p`.
//!
//! *Inverting* a path or cycle recolours each spoke edge `ux_i` with the
//! missing colour of `x_i` ([`invert_sequence`]); the result is again proper
//! and swaps the roles of the spoke colours. The `realize_*` procedures
//! produce the same colouring as an explicit, verifiable sequence of Kempe
//! moves: single-edge swaps for paths, a three-stage chain surgery for
//! non-saturated cycles, a case split for comets, and — the hard case — an
//! eight-stage surgery for saturated cycles that leans on the cycle at the
//! far end of the shared edge and on triangle-freeness.
//!
//! A cycle is *saturated* when for every `i` the bicoloured component of
//! `K(colour(ux_i), m(u))` through `u` also contains the previous spoke; a
//! *witness* is an index where that containment fails. Every procedure
//! carries runtime assertions mirroring the intermediate claims it relies on
//! (chain shapes, disjointness, expected missing colours) and aborts rather
//! than emit an unverified trace; the final state is always checked against
//! the declarative inversion.

use thiserror::Error;

use crate::chain::{chain_at, Chain, ChainError, ChainShape, KempeMove};
use crate::colouring::{is_proper, missing_colour, Colour, Colouring, ColouringError};
use crate::graph::{Edge, Graph, Vertex};
use crate::trace::Trace;

/// Errors from fan classification and realization.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("{0}-{1} is not an edge")]
    NotAnEdge(Vertex, Vertex),
    #[error("graph is not regular (degrees {min}..{max}); fan machinery needs Δ-regular input")]
    NotRegular { min: usize, max: usize },
    #[error("palette {palette} with degree {degree}; fan machinery needs palette = Δ+1")]
    WrongPalette { palette: Colour, degree: usize },
    #[error("expected a {expected} sequence, found a {found}")]
    ShapeMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("sequence at centre {centre} from {start} does not match the colouring")]
    SequenceMismatch { centre: Vertex, start: Vertex },
    #[error("cycle is saturated: no non-saturation witness exists")]
    Saturated,
    #[error("cycle is not saturated (witness at index {witness})")]
    NotSaturated { witness: usize },
    #[error("rotation {rotation} out of range for a {len}-spoke cycle")]
    RotationRange { rotation: usize, len: usize },
    #[error("index {rotation} does not witness non-saturation")]
    NotAWitness { rotation: usize },
    #[error("comet sequences have no inversion")]
    CometNotInvertible,
    #[error("the two sequences do not start at the shared edge")]
    NotPaired,
    #[error("graph has a triangle {0}-{1}-{2}")]
    Triangle(Vertex, Vertex, Vertex),
    #[error(transparent)]
    Colouring(#[from] ColouringError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// Terminal behaviour of the fan walk.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FanShape {
    /// The walk stops: the last spoke misses `m(u)`.
    Path,
    /// The walk returns to the first spoke.
    Cycle { saturated: bool },
    /// The walk returns to spoke `target` (`0 < target < p`).
    Comet { target: usize },
}

impl FanShape {
    /// Shape name for reports and errors.
    pub fn name(&self) -> &'static str {
        match self {
            FanShape::Path => "path",
            FanShape::Cycle { .. } => "cycle",
            FanShape::Comet { .. } => "comet",
        }
    }
}

/// The maximal fan walk from one edge: centre, ordered spokes, shape.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FanSequence {
    centre: Vertex,
    spokes: Vec<Vertex>,
    shape: FanShape,
}

impl FanSequence {
    /// The centre `u`.
    pub fn centre(&self) -> Vertex {
        self.centre
    }

    /// Spokes `x₀, …, x_p` in walk order.
    pub fn spokes(&self) -> &[Vertex] {
        &self.spokes
    }

    /// Shape of the walk's end.
    pub fn shape(&self) -> FanShape {
        self.shape
    }

    /// Number of spokes (`p + 1`).
    pub fn len(&self) -> usize {
        self.spokes.len()
    }

    /// Whether the sequence has no spokes (never true for valid sequences).
    pub fn is_empty(&self) -> bool {
        self.spokes.is_empty()
    }

    /// The edge `u-xᵢ`.
    pub fn edge(&self, i: usize) -> Edge {
        Edge::new(self.centre, self.spokes[i])
    }

    /// Spoke edges in walk order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.spokes.iter().map(|&x| Edge::new(self.centre, x))
    }

    /// `Some(saturated)` for cycles, `None` otherwise.
    pub fn saturated(&self) -> Option<bool> {
        match self.shape {
            FanShape::Cycle { saturated } => Some(saturated),
            _ => None,
        }
    }

    /// `Some(q)` for comets, `None` otherwise.
    pub fn comet_target(&self) -> Option<usize> {
        match self.shape {
            FanShape::Comet { target } => Some(target),
            _ => None,
        }
    }
}

fn check_regular_palette(g: &Graph, c: &Colouring) -> Result<usize, FanError> {
    let degree = g.regular_degree().ok_or(FanError::NotRegular {
        min: g.min_degree(),
        max: g.max_degree(),
    })?;
    if c.palette() as usize != degree + 1 {
        return Err(FanError::WrongPalette {
            palette: c.palette(),
            degree,
        });
    }
    Ok(degree)
}

/// Whether index `i` witnesses non-saturation: the component of
/// `K(colour(u·spokes[i]), m(u))` containing `u` misses the previous spoke.
fn index_is_witness(
    g: &Graph,
    c: &Colouring,
    centre: Vertex,
    spokes: &[Vertex],
    i: usize,
) -> Result<bool, FanError> {
    let m_u = missing_colour(g, c, centre)?;
    let prev = spokes[(i + spokes.len() - 1) % spokes.len()];
    let a_i = c
        .edge_colour(g, Edge::new(centre, spokes[i]))
        .expect("spoke edges exist");
    let comp = chain_at(g, c, a_i, m_u, centre)?;
    Ok(!comp.contains_vertex(prev))
}

fn smallest_witness_inner(
    g: &Graph,
    c: &Colouring,
    centre: Vertex,
    spokes: &[Vertex],
) -> Result<Option<usize>, FanError> {
    for i in 0..spokes.len() {
        if index_is_witness(g, c, centre, spokes, i)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// The maximal fan walk at centre `u` starting from the edge `uv`, with the
/// shape classified (cycles get their saturation flag evaluated).
pub fn fan_sequence(g: &Graph, c: &Colouring, u: Vertex, v: Vertex) -> Result<FanSequence, FanError> {
    check_regular_palette(g, c)?;
    if !g.has_edge(u, v) {
        return Err(FanError::NotAnEdge(u, v));
    }
    let m_u = missing_colour(g, c, u)?;
    // u's edges carry pairwise distinct colours (checked by missing_colour),
    // covering the palette except m(u).
    let mut at_u: Vec<Option<Vertex>> = vec![None; c.palette() as usize + 1];
    for &(w, idx) in g.neighbours(u) {
        at_u[c.colour(idx) as usize] = Some(w);
    }
    let mut pos: Vec<Option<usize>> = vec![None; g.vertex_count() + 1];
    pos[v] = Some(0);
    let mut spokes = vec![v];
    let shape = loop {
        let x = *spokes.last().expect("nonempty");
        let m_x = missing_colour(g, c, x)?;
        if m_x == m_u {
            break FanShape::Path;
        }
        let w = at_u[m_x as usize].expect("every colour but m(u) appears at u");
        match pos[w] {
            Some(0) => break FanShape::Cycle { saturated: false },
            Some(j) => break FanShape::Comet { target: j },
            None => {
                pos[w] = Some(spokes.len());
                spokes.push(w);
            }
        }
    };
    let shape = match shape {
        FanShape::Cycle { .. } => FanShape::Cycle {
            saturated: smallest_witness_inner(g, c, u, &spokes)?.is_none(),
        },
        other => other,
    };
    Ok(FanSequence {
        centre: u,
        spokes,
        shape,
    })
}

/// Recomputes the sequence and demands exact agreement — guards every
/// realization against stale or hand-built sequences.
fn check_consistent(g: &Graph, c: &Colouring, s: &FanSequence) -> Result<(), FanError> {
    if s.is_empty() {
        return Err(FanError::SequenceMismatch {
            centre: s.centre,
            start: 0,
        });
    }
    let fresh = fan_sequence(g, c, s.centre, s.spokes[0])?;
    if fresh != *s {
        return Err(FanError::SequenceMismatch {
            centre: s.centre,
            start: s.spokes[0],
        });
    }
    Ok(())
}

/// Smallest index witnessing non-saturation of a cycle sequence (`None` iff
/// saturated).
pub fn smallest_nonsaturation_witness(
    g: &Graph,
    c: &Colouring,
    s: &FanSequence,
) -> Result<Option<usize>, FanError> {
    check_consistent(g, c, s)?;
    if !matches!(s.shape, FanShape::Cycle { .. }) {
        return Err(FanError::ShapeMismatch {
            expected: "cycle",
            found: s.shape.name(),
        });
    }
    smallest_witness_inner(g, c, s.centre, &s.spokes)
}

/// The declarative inversion: every spoke edge `uxᵢ` takes the missing
/// colour of `xᵢ`; everything else is untouched. Defined for paths and
/// cycles only. The result is proper, and each spoke's new missing colour is
/// the old colour of its edge (checked).
pub fn invert_sequence(g: &Graph, c: &Colouring, s: &FanSequence) -> Result<Colouring, FanError> {
    if matches!(s.shape, FanShape::Comet { .. }) {
        return Err(FanError::CometNotInvertible);
    }
    check_consistent(g, c, s)?;
    let mut out = c.clone();
    for (i, &x) in s.spokes.iter().enumerate() {
        let idx = g.edge_index(s.edge(i)).expect("spoke edge exists");
        out.set(idx, missing_colour(g, c, x)?);
    }
    assert!(is_proper(g, &out), "inversion must preserve properness");
    for (i, &x) in s.spokes.iter().enumerate() {
        let idx = g.edge_index(s.edge(i)).expect("spoke edge exists");
        assert_eq!(
            missing_colour(g, &out, x).expect("still regular and proper"),
            c.colour(idx),
            "after inversion, spoke {x} must miss the old colour of its edge"
        );
    }
    Ok(out)
}

/// Working state for the realization procedures: the current colouring plus
/// the moves recorded so far. All invariants (regularity, properness) are
/// maintained by construction, so violations are bugs and panic.
struct Recorder<'a> {
    g: &'a Graph,
    cur: Colouring,
    moves: Vec<KempeMove>,
}

impl<'a> Recorder<'a> {
    fn new(g: &'a Graph, c: &Colouring) -> Recorder<'a> {
        Recorder {
            g,
            cur: c.clone(),
            moves: Vec::new(),
        }
    }

    fn colour_of(&self, e: Edge) -> Colour {
        self.cur.edge_colour(self.g, e).expect("edge exists")
    }

    fn missing(&self, v: Vertex) -> Colour {
        missing_colour(self.g, &self.cur, v).expect("regular graph, proper colouring")
    }

    fn chain_v(&self, c1: Colour, c2: Colour, v: Vertex) -> Chain {
        chain_at(self.g, &self.cur, c1, c2, v).expect("valid colour pair")
    }

    fn chain_e(&self, c1: Colour, c2: Colour, e: Edge) -> Chain {
        chain_at(self.g, &self.cur, c1, c2, e).expect("anchor carries a pair colour")
    }

    /// Swaps a whole chain and records one move anchored at its smallest
    /// edge (the same convention `swap_classes` uses).
    fn swap(&mut self, chain: &Chain) {
        assert!(!chain.is_empty(), "refusing to record a move for an empty chain");
        let (c1, c2) = chain.colours();
        self.moves.push(KempeMove::new(c1, c2, chain.edges()[0]));
        for &e in chain.edges() {
            let idx = self.g.edge_index(e).expect("chain edge exists");
            let old = self.cur.colour(idx);
            self.cur.set(idx, if old == c1 { c2 } else { c1 });
        }
        debug_assert!(is_proper(self.g, &self.cur));
    }
}

/// Core of the path realization: process spokes from last to first, each
/// step swapping the single-edge chain `K(colour(uxᵢ), m(u))` at `uxᵢ`.
/// `s` must be a path consistent with `rec.cur`.
fn path_steps(rec: &mut Recorder, s: &FanSequence) {
    assert_eq!(s.shape, FanShape::Path, "path_steps needs a path");
    let u = s.centre;
    for i in (0..s.len()).rev() {
        let e = s.edge(i);
        let col = rec.colour_of(e);
        let m_u = rec.missing(u);
        assert_eq!(
            rec.missing(s.spokes[i]),
            m_u,
            "path step {i}: centre and spoke must miss the same colour"
        );
        let chain = rec.chain_e(col, m_u, e);
        assert_eq!(
            chain.edges(),
            &[e],
            "path step {i}: both endpoints miss {m_u}, so the chain is the edge alone"
        );
        rec.swap(&chain);
    }
}

/// Inverts a path sequence by `p + 1` single-edge Kempe moves, processed
/// from the last spoke to the first; the replayed trace yields exactly
/// [`invert_sequence`].
pub fn realize_path(g: &Graph, c: &Colouring, s: &FanSequence) -> Result<Trace, FanError> {
    check_consistent(g, c, s)?;
    if s.shape != FanShape::Path {
        return Err(FanError::ShapeMismatch {
            expected: "path",
            found: s.shape.name(),
        });
    }
    let mut rec = Recorder::new(g, c);
    path_steps(&mut rec, s);
    assert_eq!(
        rec.cur,
        invert_sequence(g, c, s)?,
        "path realization must equal the declarative inversion"
    );
    Ok(Trace::new(g, c, rec.moves))
}

/// Core of the non-saturated cycle realization. `rot` must be a cycle
/// consistent with `rec.cur` whose index 0 is a non-saturation witness.
///
/// Stage 1 moves the far end's component `C` of `K(colour(ux₀), m(u))` out
/// of the way (it cannot contain `u` — that is what the witness guarantees),
/// turning the cycle into a path over the same spokes; stage 2 realizes that
/// path; stage 3 swaps `C ∪ {ux_p}`, which restores `C` and gives `ux_p` its
/// cyclic colour.
fn cycle_steps_at_witness(rec: &mut Recorder, rot: &FanSequence) {
    let before = rec.cur.clone();
    let u = rot.centre;
    let x = rot.spokes();
    let p = x.len() - 1;
    let m_u = rec.missing(u);
    let a0 = rec.colour_of(rot.edge(0));

    let comp_u = rec.chain_v(a0, m_u, u);
    assert!(
        !comp_u.contains_vertex(x[p]),
        "index 0 must witness non-saturation"
    );
    let c_chain = rec.chain_v(a0, m_u, x[p]);
    assert!(
        !c_chain.is_empty(),
        "x_p misses {a0} and therefore has an {m_u}-edge"
    );
    assert_eq!(c_chain.shape(), ChainShape::Path);
    assert!(!c_chain.contains_vertex(u));
    let ends = c_chain.endpoints().expect("path has endpoints");
    assert!(ends.0 == x[p] || ends.1 == x[p], "x_p is an endpoint of C");
    rec.swap(&c_chain);

    let path = fan_sequence(rec.g, &rec.cur, u, x[0]).expect("fan preconditions maintained");
    assert_eq!(path.spokes(), x, "the C-swap keeps every spoke in place");
    assert_eq!(
        path.shape,
        FanShape::Path,
        "after the C-swap, x_p misses m(u) and the walk stops"
    );
    path_steps(rec, &path);

    let e_p = rot.edge(p);
    let c_prime = rec.chain_e(a0, m_u, e_p);
    let mut want: Vec<Edge> = c_chain.edges().to_vec();
    want.push(e_p);
    want.sort();
    assert_eq!(
        c_prime.edges(),
        &want[..],
        "the final chain is exactly C plus the edge ux_p"
    );
    rec.swap(&c_prime);

    assert_eq!(
        rec.cur,
        invert_sequence(rec.g, &before, rot).expect("rot is a consistent cycle"),
        "cycle realization must equal the declarative inversion"
    );
}

/// Inverts a non-saturated cycle. `rotation` must index a non-saturation
/// witness; the realization works on the rotated sequence (same inversion —
/// the assignment is rotation-invariant) and replays to
/// `invert_sequence(c, s)`.
pub fn realize_nonsaturated_cycle(
    g: &Graph,
    c: &Colouring,
    s: &FanSequence,
    rotation: usize,
) -> Result<Trace, FanError> {
    check_consistent(g, c, s)?;
    match s.shape {
        FanShape::Cycle { saturated: false } => {}
        FanShape::Cycle { saturated: true } => return Err(FanError::Saturated),
        other => {
            return Err(FanError::ShapeMismatch {
                expected: "cycle",
                found: other.name(),
            })
        }
    }
    if rotation >= s.len() {
        return Err(FanError::RotationRange {
            rotation,
            len: s.len(),
        });
    }
    if !index_is_witness(g, c, s.centre, &s.spokes, rotation)? {
        return Err(FanError::NotAWitness { rotation });
    }

    // Rotations of a cycle are themselves fan sequences: recompute from the
    // witness spoke rather than splicing by hand.
    let rot = fan_sequence(g, c, s.centre, s.spokes[rotation])?;
    let mut expect: Vec<Vertex> = s.spokes[rotation..].to_vec();
    expect.extend_from_slice(&s.spokes[..rotation]);
    assert_eq!(rot.spokes(), &expect[..], "rotated walk revisits the cycle");
    assert_eq!(rot.shape, FanShape::Cycle { saturated: false });

    let mut rec = Recorder::new(g, c);
    cycle_steps_at_witness(&mut rec, &rot);
    assert_eq!(
        rec.cur,
        invert_sequence(g, c, s)?,
        "inversion is rotation-invariant"
    );
    Ok(Trace::new(g, c, rec.moves))
}

/// Comet handling: swap the chain of `K(m(u), colour(ux_q))`
/// through `ux_q`, after which the walk from `x₀` is a path — either
/// `(x₀, …, x_{q−1})` or the full `(x₀, …, x_p)`, depending on which of the
/// two spokes missing `colour(ux_q)` sat on the swapped chain — and realize
/// that path. The result has `m(u) = old colour(ux₀)` and strictly fewer
/// edges coloured `old colour(ux₀)` (both checked); unlike paths and cycles
/// a comet has no inversion, so the final colouring is returned alongside
/// the trace.
pub fn realize_comet(
    g: &Graph,
    c: &Colouring,
    s: &FanSequence,
) -> Result<(Colouring, Trace), FanError> {
    check_consistent(g, c, s)?;
    let q = match s.shape {
        FanShape::Comet { target } => target,
        other => {
            return Err(FanError::ShapeMismatch {
                expected: "comet",
                found: other.name(),
            })
        }
    };
    let u = s.centre;
    let x = s.spokes();
    let p = x.len() - 1;
    assert!(0 < q && q < p, "comet target strictly interior");
    let m_u = missing_colour(g, c, u)?;
    let a_q = c.edge_colour(g, s.edge(q)).expect("spoke edge");
    let a_0 = c.edge_colour(g, s.edge(0)).expect("spoke edge");

    let mut rec = Recorder::new(g, c);
    let c_chain = rec.chain_e(m_u, a_q, s.edge(q));
    let ends = c_chain.endpoints().expect("u misses m(u), so C is a path");
    assert!(
        ends.0 == u || ends.1 == u,
        "u meets the pair only through ux_q, hence is an endpoint"
    );
    assert!(
        c_chain.len() >= 2,
        "x_q does not miss m(u), so C continues past it"
    );
    rec.swap(&c_chain);

    let after = fan_sequence(g, &rec.cur, u, x[0])?;
    assert_eq!(after.shape, FanShape::Path, "comet collapses to a path");
    assert!(
        after.spokes() == &x[..q] || after.spokes() == x,
        "the path is the prefix before the target or the full spoke list"
    );
    path_steps(&mut rec, &after);

    assert_eq!(
        rec.missing(u),
        a_0,
        "after realizing the path, u misses the old colour of ux₀"
    );
    let count = |col: &Colouring| col.colours().iter().filter(|&&cc| cc == a_0).count();
    assert_eq!(
        count(&rec.cur),
        count(c) - 1,
        "the number of edges coloured old colour(ux₀) strictly decreases"
    );
    let final_colouring = rec.cur.clone();
    Ok((final_colouring, Trace::new(g, c, rec.moves)))
}

/// Inverts a saturated cycle `su` at `u`, using the cycle `sv` at the other
/// end `v` of the shared edge `uv`. Requires a triangle-free graph.
///
/// Let `x₀ = v, …, x_p` and `y₀ = u, …, y_q` be the two spoke lists and `C`
/// the component of `K(colour(uv), m(u))` containing `y_q` (saturation at
/// index 0 pins `u`'s own component to a path from `u` through `v` and `y₁`
/// to `x_p`, so `C` avoids all of them). After swapping `C`, either the
/// u-cycle lost saturation — invert it and swap `C` back — or an
/// eight-stage surgery rebuilds the inversion from the v-side: swap the
/// `K(m(u), m(v))` component `C'` at `y_q`, realize the v-path
/// `(u, y₁, …, y_q)`, realize the u-path `(x₁, …, x_p)`, swap
/// `C' ∪ {uv, vy_q}`, invert the now non-saturated v-cycle
/// `(y₁, y_q, y_{q−1}, …, y₂)` (restoring every v-spoke), and swap `C`
/// back. Every stage asserts the chain shapes, memberships and missing
/// colours it relies on; the final state must equal `invert_sequence(c, su)`.
pub fn realize_saturated_cycle(
    g: &Graph,
    c: &Colouring,
    su: &FanSequence,
    sv: &FanSequence,
) -> Result<Trace, FanError> {
    if let Some((a, b, d)) = g.triangle_witness() {
        return Err(FanError::Triangle(a, b, d));
    }
    check_consistent(g, c, su)?;
    check_consistent(g, c, sv)?;
    match su.shape {
        FanShape::Cycle { saturated: true } => {}
        FanShape::Cycle { saturated: false } => {
            let witness = smallest_witness_inner(g, c, su.centre, &su.spokes)?
                .expect("non-saturated cycle has a witness");
            return Err(FanError::NotSaturated { witness });
        }
        other => {
            return Err(FanError::ShapeMismatch {
                expected: "saturated cycle",
                found: other.name(),
            })
        }
    }
    if !matches!(sv.shape, FanShape::Cycle { .. }) {
        return Err(FanError::ShapeMismatch {
            expected: "cycle",
            found: sv.shape.name(),
        });
    }
    let u = su.centre;
    let v = sv.centre;
    if su.spokes[0] != v || sv.spokes[0] != u {
        return Err(FanError::NotPaired);
    }

    let x = su.spokes();
    let y = sv.spokes();
    let p = x.len() - 1;
    let q = y.len() - 1;
    let uv = Edge::new(u, v);
    let a_uv = c.edge_colour(g, uv).expect("uv is an edge");
    let m_u = missing_colour(g, c, u)?;
    let m_v = missing_colour(g, c, v)?;

    // Structural facts behind the surgery; each follows from the cycle
    // closures plus triangle-freeness.
    assert_ne!(m_u, m_v, "a cycle at u forces m(v) ≠ m(u)");
    assert_eq!(missing_colour(g, c, x[p])?, a_uv, "u-cycle closure");
    assert_eq!(missing_colour(g, c, y[q])?, a_uv, "v-cycle closure");
    assert_ne!(x[p], y[q], "a shared last spoke would close a triangle");
    assert!(p >= 1 && q >= 1);
    assert!(
        x[1..].iter().all(|xi| !y.contains(xi)) && y[1..].iter().all(|yj| !x.contains(yj)),
        "triangle-freeness keeps the two spoke lists disjoint"
    );
    assert_eq!(
        c.edge_colour(g, Edge::new(v, y[1])),
        Some(m_u),
        "the v-walk leaves u along the m(u)-coloured edge at v"
    );

    let mut rec = Recorder::new(g, c);

    let comp_u = rec.chain_v(a_uv, m_u, u);
    assert!(
        comp_u.contains_vertex(x[p]),
        "saturation at index 0: u's component reaches x_p"
    );
    assert!(comp_u.contains_vertex(y[1]), "u - uv - v - vy₁ lies on it");
    assert!(
        !comp_u.contains_vertex(y[q]),
        "y_q is an endpoint elsewhere: u's component ends at u and x_p"
    );
    assert!(q >= 2, "y₁ on u's component but y_q off it forces q ≥ 2");

    let fan_vertex = |w: Vertex| w == u || w == v || x.contains(&w) || y.contains(&w);

    let c_chain = rec.chain_v(a_uv, m_u, y[q]);
    assert!(!c_chain.is_empty(), "y_q misses colour(uv), so it has an m(u)-edge");
    assert_eq!(c_chain.shape(), ChainShape::Path);
    for w in [u, v, x[p]] {
        assert!(!c_chain.contains_vertex(w), "C avoids u's component");
    }
    let ends = c_chain.endpoints().expect("path");
    for w in [ends.0, ends.1] {
        assert!(
            w == y[q] || !fan_vertex(w),
            "C's endpoints touch no fan edge except vy_q"
        );
    }
    rec.swap(&c_chain); // α₁

    let su1 = fan_sequence(g, &rec.cur, u, v)?;
    assert_eq!(
        su1.spokes(),
        x,
        "C avoids every spoke's missing colour, so the u-walk is unchanged"
    );
    match su1.shape {
        FanShape::Cycle { saturated: false } => {
            // The C-swap freed a witness: invert the cycle under α₁, then
            // put C back (its component at y_q is exactly C's edge set).
            let w = smallest_witness_inner(g, &rec.cur, u, su1.spokes())?
                .expect("non-saturated cycle has a witness");
            let rot = fan_sequence(g, &rec.cur, u, su1.spokes()[w])?;
            assert_eq!(rot.shape, FanShape::Cycle { saturated: false });
            cycle_steps_at_witness(&mut rec, &rot);

            let back = rec.chain_v(a_uv, m_u, y[q]);
            assert_eq!(
                back.edges(),
                c_chain.edges(),
                "inverting the u-cycle leaves C's component intact"
            );
            rec.swap(&back);
        }
        FanShape::Cycle { saturated: true } => {
            assert_eq!(
                rec.missing(y[q]),
                m_u,
                "swapping C hands y_q the missing colour m(u)"
            );
            let c_prime = rec.chain_v(m_u, m_v, y[q]);
            assert!(!c_prime.is_empty(), "y_q now has an m(v)-edge");
            assert_eq!(c_prime.shape(), ChainShape::Path);
            for w in [u, v] {
                assert!(!c_prime.contains_vertex(w), "C' avoids u and v");
            }
            let ends = c_prime.endpoints().expect("path");
            assert!(ends.0 == y[q] || ends.1 == y[q]);
            for w in [ends.0, ends.1] {
                assert!(
                    w == y[q] || !fan_vertex(w),
                    "C''s endpoints touch no fan edge except vy_q"
                );
            }
            assert!(
                c_prime.edges().iter().all(|e| !c_chain.contains_edge(*e)),
                "C and C' are edge-disjoint"
            );
            rec.swap(&c_prime); // α₂
            assert_eq!(rec.missing(y[q]), m_v);

            let vpath = fan_sequence(g, &rec.cur, v, u)?;
            assert_eq!(
                vpath.shape,
                FanShape::Path,
                "with y_q missing m(v), the v-walk stops there"
            );
            assert_eq!(vpath.spokes(), y, "the v-walk retraces its spokes");
            path_steps(&mut rec, &vpath); // α₃
            assert_eq!(rec.colour_of(uv), m_u);
            assert_eq!(rec.missing(u), a_uv);

            let upath = fan_sequence(g, &rec.cur, u, x[1])?;
            assert_eq!(
                upath.shape,
                FanShape::Path,
                "x_p misses colour(uv) = m(u)'s replacement at u"
            );
            assert_eq!(upath.spokes(), &x[1..], "the u-walk drops only x₀ = v");
            path_steps(&mut rec, &upath); // α₄
            assert_eq!(rec.missing(u), m_v);
            assert_eq!(rec.missing(v), a_uv);

            let d = rec.chain_e(m_u, m_v, uv);
            let mut want: Vec<Edge> = c_prime.edges().to_vec();
            want.push(uv);
            want.push(Edge::new(v, y[q]));
            want.sort();
            assert_eq!(
                d.edges(),
                &want[..],
                "uv and vy_q hook onto C' and nothing else"
            );
            rec.swap(&d); // α₅
            assert_eq!(rec.colour_of(uv), m_v);
            assert_eq!(rec.colour_of(Edge::new(v, y[q])), m_u);

            let vcyc = fan_sequence(g, &rec.cur, v, y[1])?;
            let mut expect: Vec<Vertex> = vec![y[1], y[q]];
            expect.extend(y[2..q].iter().rev().copied());
            assert_eq!(
                vcyc.spokes(),
                &expect[..],
                "the v-walk now runs y₁, y_q, then backwards to y₂"
            );
            assert!(
                index_is_witness(g, &rec.cur, v, vcyc.spokes(), 1)?,
                "v's K(m(u), colour(uv)) component is C ∪ {{vy_q}}, which misses y₁"
            );
            assert_eq!(vcyc.shape, FanShape::Cycle { saturated: false });
            let w = smallest_witness_inner(g, &rec.cur, v, vcyc.spokes())?
                .expect("a witness exists at index 1");
            let rot = fan_sequence(g, &rec.cur, v, vcyc.spokes()[w])?;
            assert_eq!(rot.shape, FanShape::Cycle { saturated: false });
            cycle_steps_at_witness(&mut rec, &rot); // α₆
            for j in 1..=q {
                let e = Edge::new(v, y[j]);
                assert_eq!(
                    rec.colour_of(e),
                    c.edge_colour(g, e).expect("spoke edge"),
                    "inverting the rebuilt v-cycle restores every v-spoke"
                );
            }

            let last = rec.chain_v(a_uv, m_u, y[q]);
            assert_eq!(
                last.edges(),
                c_chain.edges(),
                "C's component survived the surgery unchanged"
            );
            rec.swap(&last);
        }
        other => panic!("the C-swap cannot change the u-sequence's shape: {other:?}"),
    }

    let want = invert_sequence(g, c, su)?;
    assert_eq!(
        rec.cur, want,
        "saturated-cycle realization must equal the declarative inversion"
    );
    Ok(Trace::new(g, c, rec.moves))
}
