//! Kempe chains and single Kempe changes.
//!
//! A *Kempe chain* for colours `(c1, c2)` is a maximal connected component of
//! the subgraph spanned by the edges coloured `c1` or `c2`. Properness forces
//! every vertex to meet at most two chain edges, so a chain is always a path
//! or an even cycle. Swapping the two colours on one chain — a *Kempe move* —
//! preserves properness; it is the only mutation the whole crate ever applies
//! to a colouring, which is what makes traces replayable and verifiable.

use thiserror::Error;

use crate::colouring::{Colour, Colouring, ColouringError};
use crate::graph::{Edge, Graph, Vertex};

/// Errors from chain extraction and move application.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("chain colours must differ, got {0} twice")]
    EqualColours(Colour),
    #[error("anchor edge {0} not in the graph")]
    AnchorNotInGraph(Edge),
    #[error("anchor vertex {0} out of range 1..={1}")]
    AnchorVertexRange(Vertex, usize),
    #[error("anchor edge {edge} coloured {found}, expected {c1} or {c2}")]
    AnchorColour {
        edge: Edge,
        found: Colour,
        c1: Colour,
        c2: Colour,
    },
    #[error("colouring not proper: vertex {0} meets three ({1},{2})-edges")]
    ImproperAt(Vertex, Colour, Colour),
    #[error(transparent)]
    Colouring(#[from] ColouringError),
}

/// Path or cycle: the only two shapes properness permits.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ChainShape {
    Path,
    Cycle,
}

/// A maximal connected bicoloured component.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Chain {
    colours: (Colour, Colour),
    edges: Vec<Edge>,
    vertices: Vec<Vertex>,
    shape: ChainShape,
    endpoints: Option<(Vertex, Vertex)>,
}

impl Chain {
    /// The colour pair, in increasing order.
    pub fn colours(&self) -> (Colour, Colour) {
        self.colours
    }

    /// Chain edges in sorted order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Chain vertices in sorted order. The empty chain anchored at a vertex
    /// contains exactly that vertex.
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Path or cycle.
    pub fn shape(&self) -> ChainShape {
        self.shape
    }

    /// The two path ends in increasing order (`None` for cycles; `(v, v)`
    /// for the empty chain at `v`).
    pub fn endpoints(&self) -> Option<(Vertex, Vertex)> {
        self.endpoints
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    /// Whether the chain has no edges.
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Whether `e` is a chain edge.
    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Whether `v` is a chain vertex.
    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

/// Where to start the chain walk: an edge (must carry one of the two
/// colours) or a vertex (which may yield the empty chain).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ChainAnchor {
    Edge(Edge),
    Vertex(Vertex),
}

impl From<Edge> for ChainAnchor {
    fn from(e: Edge) -> ChainAnchor {
        ChainAnchor::Edge(e)
    }
}

impl From<Vertex> for ChainAnchor {
    fn from(v: Vertex) -> ChainAnchor {
        ChainAnchor::Vertex(v)
    }
}

/// One Kempe change: swap `c1` and `c2` on the chain containing `anchor`.
/// Colours are normalized in increasing order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct KempeMove {
    c1: Colour,
    c2: Colour,
    anchor: Edge,
}

impl KempeMove {
    /// Normalizing constructor; panics if the colours are equal (moves are
    /// built from validated chains, never raw input).
    pub fn new(a: Colour, b: Colour, anchor: Edge) -> KempeMove {
        assert!(a != b, "Kempe move needs two distinct colours, got {a}");
        KempeMove {
            c1: a.min(b),
            c2: a.max(b),
            anchor,
        }
    }

    /// Smaller colour.
    pub fn c1(&self) -> Colour {
        self.c1
    }

    /// Larger colour.
    pub fn c2(&self) -> Colour {
        self.c2
    }

    /// The edge identifying the chain.
    pub fn anchor(&self) -> Edge {
        self.anchor
    }
}

fn check_pair(c: &Colouring, g: &Graph, c1: Colour, c2: Colour) -> Result<(), ChainError> {
    if c1 == c2 {
        return Err(ChainError::EqualColours(c1));
    }
    for col in [c1, c2] {
        if col == 0 || col > c.palette() {
            return Err(ColouringError::ColourOutOfPalette {
                colour: col,
                palette: c.palette(),
            }
            .into());
        }
    }
    if c.colours().len() != g.edge_count() {
        return Err(ColouringError::DomainMismatch {
            expected: g.edge_count(),
            found: c.colours().len(),
        }
        .into());
    }
    Ok(())
}

/// The maximal `(c1, c2)`-bicoloured component containing the anchor. A
/// vertex anchor meeting neither colour yields the empty chain at that
/// vertex.
pub fn chain_at(
    g: &Graph,
    c: &Colouring,
    c1: Colour,
    c2: Colour,
    anchor: impl Into<ChainAnchor>,
) -> Result<Chain, ChainError> {
    check_pair(c, g, c1, c2)?;
    let colours = (c1.min(c2), c1.max(c2));
    let in_pair = |idx: usize| c.colour(idx) == colours.0 || c.colour(idx) == colours.1;

    let mut queue: Vec<Vertex> = Vec::new();
    match anchor.into() {
        ChainAnchor::Edge(e) => {
            let idx = g.edge_index(e).ok_or(ChainError::AnchorNotInGraph(e))?;
            if !in_pair(idx) {
                return Err(ChainError::AnchorColour {
                    edge: e,
                    found: c.colour(idx),
                    c1: colours.0,
                    c2: colours.1,
                });
            }
            queue.push(e.u());
        }
        ChainAnchor::Vertex(v) => {
            if v == 0 || v > g.vertex_count() {
                return Err(ChainError::AnchorVertexRange(v, g.vertex_count()));
            }
            queue.push(v);
        }
    }

    let mut seen_v = vec![false; g.vertex_count() + 1];
    let mut seen_e = vec![false; g.edge_count()];
    seen_v[queue[0]] = true;
    let mut vertices = vec![queue[0]];
    let mut edges = Vec::new();
    while let Some(v) = queue.pop() {
        let mut local = 0usize;
        for &(w, idx) in g.neighbours(v) {
            if !in_pair(idx) {
                continue;
            }
            local += 1;
            if local > 2 {
                return Err(ChainError::ImproperAt(v, colours.0, colours.1));
            }
            if !seen_e[idx] {
                seen_e[idx] = true;
                edges.push(g.edges()[idx]);
            }
            if !seen_v[w] {
                seen_v[w] = true;
                vertices.push(w);
                queue.push(w);
            }
        }
    }
    edges.sort();
    vertices.sort();

    // Chain-degree 2 everywhere means cycle; otherwise the two degree-1
    // vertices are the path's ends.
    let degree_of = |v: Vertex| edges.iter().filter(|e| e.touches(v)).count();
    let ends: Vec<Vertex> = vertices
        .iter()
        .copied()
        .filter(|&v| degree_of(v) <= 1)
        .collect();
    let (shape, endpoints) = if edges.is_empty() {
        (ChainShape::Path, Some((vertices[0], vertices[0])))
    } else if ends.is_empty() {
        (ChainShape::Cycle, None)
    } else {
        debug_assert_eq!(ends.len(), 2, "a proper chain has exactly two ends");
        (ChainShape::Path, Some((ends[0], ends[1])))
    };
    Ok(Chain {
        colours,
        edges,
        vertices,
        shape,
        endpoints,
    })
}

fn toggled(g: &Graph, c: &Colouring, chain: &Chain) -> Colouring {
    let (c1, c2) = chain.colours;
    let mut out = c.clone();
    for &e in &chain.edges {
        let idx = g.edge_index(e).expect("chain edges come from g");
        let old = c.colour(idx);
        out.set(idx, if old == c1 { c2 } else { c1 });
    }
    out
}

/// Applies one Kempe change: swaps the move's colours on the chain
/// containing its anchor.
pub fn apply_move(g: &Graph, c: &Colouring, m: KempeMove) -> Result<Colouring, ChainError> {
    let chain = chain_at(g, c, m.c1, m.c2, m.anchor)?;
    Ok(toggled(g, c, &chain))
}

/// Exchanges the two colour classes wholesale: every `c1`-edge becomes `c2`
/// and vice versa, realized as one Kempe move per `(c1, c2)`-component,
/// anchored at each component's smallest edge, in anchor order.
pub fn swap_classes(
    g: &Graph,
    c: &Colouring,
    c1: Colour,
    c2: Colour,
) -> Result<(Colouring, Vec<KempeMove>), ChainError> {
    check_pair(c, g, c1, c2)?;
    let mut cur = c.clone();
    let mut moves = Vec::new();
    let mut done = vec![false; g.edge_count()];
    for idx in 0..g.edge_count() {
        if done[idx] || (c.colour(idx) != c1 && c.colour(idx) != c2) {
            continue;
        }
        let chain = chain_at(g, c, c1, c2, g.edges()[idx])?;
        for &e in chain.edges() {
            done[g.edge_index(e).expect("chain edge in g")] = true;
        }
        // Ascending scan means the discovering edge is the component minimum.
        debug_assert_eq!(chain.edges()[0], g.edges()[idx]);
        moves.push(KempeMove::new(c1, c2, chain.edges()[0]));
        cur = toggled(g, &cur, &chain);
    }
    Ok((cur, moves))
}
