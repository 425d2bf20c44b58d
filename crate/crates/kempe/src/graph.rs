//! Graphs, matchings, and the plain-text edge-list exchange format.
//!
//! Vertices of an in-memory [`Graph`] are contiguous 1-based integers and
//! edges are normalized with the smaller endpoint first; every iteration
//! order in the crate derives from the sorted edge list, which keeps traces
//! reproducible. Files may label vertices with arbitrary positive integers;
//! [`parse_graph`] compacts the labels in increasing order and returns a
//! [`LabelMap`] so that [`Graph::serialize`] re-emits them bit-exactly.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// 1-based vertex id of an in-memory graph.
pub type Vertex = usize;

/// Errors from graph construction, parsing, and matching surgery.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("graph has no edges")]
    NoEdges,
    #[error("vertex {0} out of range 1..={1}")]
    VertexRange(Vertex, usize),
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("edge {0} not in graph")]
    MissingEdge(Edge),
    #[error("edges {0} and {1} share vertex {2}: not a matching")]
    NotAMatching(Edge, Edge, Vertex),
    #[error("vertex label {0} not in label map")]
    UnknownLabel(u64),
}

/// Undirected edge, normalized with the smaller endpoint first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge {
    u: Vertex,
    v: Vertex,
}

impl Edge {
    /// Normalizing constructor.
    ///
    /// Panics on a loop (`a == b`); loops are rejected at every parse and
    /// construction boundary, so an in-memory loop is a caller bug.
    pub fn new(a: Vertex, b: Vertex) -> Edge {
        assert!(a != b, "loop edge at vertex {a}");
        Edge {
            u: a.min(b),
            v: a.max(b),
        }
    }

    /// Smaller endpoint.
    pub fn u(&self) -> Vertex {
        self.u
    }

    /// Larger endpoint.
    pub fn v(&self) -> Vertex {
        self.v
    }

    /// Both endpoints, smaller first.
    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.u, self.v)
    }

    /// Whether `w` is an endpoint.
    pub fn touches(&self, w: Vertex) -> bool {
        self.u == w || self.v == w
    }

    /// The endpoint other than `w`. Panics if `w` is not an endpoint.
    pub fn other(&self, w: Vertex) -> Vertex {
        if w == self.u {
            self.v
        } else if w == self.v {
            self.u
        } else {
            panic!("vertex {w} is not an endpoint of edge {self}")
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

/// Simple undirected graph on vertices `1..=n` with a sorted edge list and a
/// derived adjacency structure.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    /// `adj[v]` lists `(neighbour, edge index)` sorted by neighbour; index 0
    /// is unused padding so vertices index directly.
    adj: Vec<Vec<(Vertex, usize)>>,
}

impl Graph {
    /// Builds a graph on vertices `1..=n` from endpoint pairs (any order,
    /// normalization applied). Rejects loops, out-of-range endpoints, and
    /// duplicate edges.
    pub fn new(
        n: usize,
        pairs: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Graph, GraphError> {
        let mut edges = Vec::new();
        for (a, b) in pairs {
            if a == b {
                return Err(GraphError::Parse {
                    line: 0,
                    msg: format!("loop edge at vertex {a}"),
                });
            }
            for w in [a, b] {
                if w == 0 || w > n {
                    return Err(GraphError::VertexRange(w, n));
                }
            }
            edges.push(Edge::new(a, b));
        }
        edges.sort();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0]));
        }
        let mut adj = vec![Vec::new(); n + 1];
        for (idx, e) in edges.iter().enumerate() {
            adj[e.u].push((e.v, idx));
            adj[e.v].push((e.u, idx));
        }
        for list in &mut adj {
            list.sort();
        }
        Ok(Graph { n, edges, adj })
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in sorted order; positions are the edge indices used by
    /// colourings.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Vertices `1..=n` in order.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n
    }

    /// Index of `e` in the sorted edge list, if present.
    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    /// Whether vertices `a` and `b` are adjacent.
    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        a != b && a >= 1 && a <= self.n && b >= 1 && b <= self.n && {
            let e = Edge::new(a, b);
            self.edge_index(e).is_some()
        }
    }

    /// `(neighbour, edge index)` pairs at `u`, sorted by neighbour.
    pub fn neighbours(&self, u: Vertex) -> &[(Vertex, usize)] {
        &self.adj[u]
    }

    /// Degree of `u`.
    pub fn degree(&self, u: Vertex) -> usize {
        self.adj[u].len()
    }

    /// Maximum degree Δ (0 for an edgeless graph).
    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Minimum degree δ.
    pub fn min_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// `Some(d)` if every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let mut degrees = self.vertices().map(|v| self.degree(v));
        let d = degrees.next()?;
        degrees.all(|dv| dv == d).then_some(d)
    }

    /// Lexicographically smallest triangle `(u, v, w)` with `u < v < w`, or
    /// `None` if the graph has no 3-cycle.
    pub fn triangle_witness(&self) -> Option<(Vertex, Vertex, Vertex)> {
        for u in self.vertices() {
            let nbrs: Vec<Vertex> = self.adj[u]
                .iter()
                .map(|&(w, _)| w)
                .filter(|&w| w > u)
                .collect();
            for (i, &v) in nbrs.iter().enumerate() {
                for &w in &nbrs[i + 1..] {
                    if self.has_edge(v, w) {
                        return Some((u, v, w));
                    }
                }
            }
        }
        None
    }

    /// The graph with the matching's edges deleted and all vertices retained.
    pub fn remove_matching(&self, m: &Matching) -> Result<Graph, GraphError> {
        for &e in m.edges() {
            if self.edge_index(e).is_none() {
                return Err(GraphError::MissingEdge(e));
            }
        }
        let keep: Vec<(Vertex, Vertex)> = self
            .edges
            .iter()
            .filter(|e| !m.contains(**e))
            .map(|e| e.endpoints())
            .collect();
        Graph::new(self.n, keep)
    }

    /// Edge-list serialization (one `u v` line per edge, sorted order,
    /// original labels applied). `parse_graph` inverts it bit-exactly.
    pub fn serialize(&self, labels: &LabelMap) -> String {
        let mut out = String::new();
        for e in &self.edges {
            out.push_str(&format!("{} {}\n", labels.label(e.u), labels.label(e.v)));
        }
        out
    }
}

/// Bijection between in-memory vertices `1..=n` and the strictly increasing
/// external labels they were compacted from.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LabelMap {
    labels: Vec<u64>,
}

impl LabelMap {
    /// Map where every vertex is its own label (internal graphs).
    pub fn identity(n: usize) -> LabelMap {
        LabelMap {
            labels: (1..=n as u64).collect(),
        }
    }

    fn from_sorted(labels: Vec<u64>) -> LabelMap {
        debug_assert!(labels.windows(2).all(|w| w[0] < w[1]));
        LabelMap { labels }
    }

    /// Number of vertices mapped.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Whether the map is empty.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// External label of vertex `v`.
    pub fn label(&self, v: Vertex) -> u64 {
        self.labels[v - 1]
    }

    /// Vertex carrying external label `l`, if any.
    pub fn vertex_of(&self, l: u64) -> Option<Vertex> {
        self.labels.binary_search(&l).ok().map(|i| i + 1)
    }
}

/// A set of pairwise vertex-disjoint edges.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matching {
    edges: Vec<Edge>,
}

impl Matching {
    /// Validates pairwise disjointness (which also excludes duplicates).
    pub fn new(edges: impl IntoIterator<Item = Edge>) -> Result<Matching, GraphError> {
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        edges.sort();
        let mut seen: Vec<(Vertex, Edge)> = Vec::new();
        for &e in &edges {
            for w in [e.u(), e.v()] {
                if let Some(&(_, f)) = seen.iter().find(|&&(x, _)| x == w) {
                    return Err(GraphError::NotAMatching(f, e, w));
                }
                seen.push((w, e));
            }
        }
        Ok(Matching { edges })
    }

    /// Edges in sorted order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    /// Whether the matching has no edges.
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Whether `e` is one of the matching's edges.
    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Whether some matching edge touches `v`.
    pub fn covers(&self, v: Vertex) -> bool {
        self.partner(v).is_some()
    }

    /// The vertex matched with `v`, if any.
    pub fn partner(&self, v: Vertex) -> Option<Vertex> {
        self.edges
            .iter()
            .find(|e| e.touches(v))
            .map(|e| e.other(v))
    }

    /// Whether the matching covers every vertex of `g` (assumes its edges
    /// are edges of `g`).
    pub fn is_perfect(&self, g: &Graph) -> bool {
        2 * self.edges.len() == g.vertex_count()
    }
}

/// Parses the edge-list format: one `u v` line per edge (positive integer
/// labels), `#` starting a comment line, blank lines ignored. Labels are
/// compacted in increasing order to `1..=n`; the returned [`LabelMap`]
/// restores them on output.
pub fn parse_graph(text: &str) -> Result<(Graph, LabelMap), GraphError> {
    let mut raw: Vec<(u64, u64, usize)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(GraphError::Parse {
                line: line_no,
                msg: format!("expected two vertex labels, found {}", tokens.len()),
            });
        }
        let mut pair = [0u64; 2];
        for (slot, tok) in pair.iter_mut().zip(&tokens) {
            *slot = tok.parse::<u64>().map_err(|_| GraphError::Parse {
                line: line_no,
                msg: format!("invalid vertex label `{tok}`"),
            })?;
            if *slot == 0 {
                return Err(GraphError::Parse {
                    line: line_no,
                    msg: "vertex labels must be positive".into(),
                });
            }
        }
        if pair[0] == pair[1] {
            return Err(GraphError::Parse {
                line: line_no,
                msg: format!("loop edge at vertex {}", pair[0]),
            });
        }
        raw.push((pair[0].min(pair[1]), pair[0].max(pair[1]), line_no));
    }
    if raw.is_empty() {
        return Err(GraphError::NoEdges);
    }
    let mut seen: BTreeSet<(u64, u64)> = BTreeSet::new();
    for &(a, b, line_no) in &raw {
        if !seen.insert((a, b)) {
            return Err(GraphError::Parse {
                line: line_no,
                msg: format!("duplicate edge {a}-{b}"),
            });
        }
    }
    let labels: Vec<u64> = raw
        .iter()
        .flat_map(|&(a, b, _)| [a, b])
        .collect::<BTreeSet<u64>>()
        .into_iter()
        .collect();
    let map = LabelMap::from_sorted(labels);
    let pairs: Vec<(Vertex, Vertex)> = raw
        .iter()
        .map(|&(a, b, _)| {
            let u = map.vertex_of(a).expect("label collected above");
            let v = map.vertex_of(b).expect("label collected above");
            (u, v)
        })
        .collect();
    let g = Graph::new(map.len(), pairs)?;
    Ok((g, map))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (1..=n).map(|i| (i, i % n + 1))).unwrap()
    }

    #[test]
    fn parse_two_edge_path() {
        let (g, map) = parse_graph("1 2\n2 3").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges(), &[Edge::new(1, 2), Edge::new(2, 3)]);
        assert_eq!(map, LabelMap::identity(3));
    }

    #[test]
    fn parse_skips_comments_and_blanks() {
        let (g, _) = parse_graph("# comment\n\n1 2").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn parse_rejects_loop() {
        let err = parse_graph("1 1").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn parse_rejects_duplicate_with_line_number() {
        let err = parse_graph("1 2\n2 1").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn parse_rejects_bad_token_and_empty() {
        assert!(matches!(
            parse_graph("1 x"),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(parse_graph("# nothing\n"), Err(GraphError::NoEdges)));
    }

    #[test]
    fn parse_compacts_arbitrary_labels() {
        let (g, map) = parse_graph("9 5\n9 12").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges(), &[Edge::new(1, 2), Edge::new(2, 3)]);
        assert_eq!(map.label(1), 5);
        assert_eq!(map.label(2), 9);
        assert_eq!(map.label(3), 12);
        assert_eq!(map.vertex_of(12), Some(3));
        assert_eq!(map.vertex_of(7), None);
    }

    #[test]
    fn serialize_round_trips() {
        let text = "5 9\n9 12\n";
        let (g, map) = parse_graph(text).unwrap();
        assert_eq!(g.serialize(&map), text);
        let (g2, map2) = parse_graph(&g.serialize(&map)).unwrap();
        assert_eq!(g, g2);
        assert_eq!(map, map2);
    }

    #[test]
    fn triangle_witness_cases() {
        assert_eq!(cycle(5).triangle_witness(), None);
        assert_eq!(cycle(3).triangle_witness(), Some((1, 2, 3)));
        // Smallest triangle not at vertex 1: path 1-2 plus triangle 3-4-5.
        let g = Graph::new(5, [(1, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(g.triangle_witness(), Some((3, 4, 5)));
    }

    #[test]
    fn regular_degree_cases() {
        assert_eq!(cycle(5).regular_degree(), Some(2));
        let star = Graph::new(4, [(1, 2), (1, 3), (1, 4)]).unwrap();
        assert_eq!(star.regular_degree(), None);
        assert_eq!(star.max_degree(), 3);
        assert_eq!(star.min_degree(), 1);
    }

    #[test]
    fn remove_matching_cases() {
        let c4 = cycle(4);
        let m = Matching::new([Edge::new(1, 2), Edge::new(3, 4)]).unwrap();
        let rest = c4.remove_matching(&m).unwrap();
        assert_eq!(rest.edges(), &[Edge::new(1, 4), Edge::new(2, 3)]);
        assert_eq!(rest.vertex_count(), 4);

        assert_eq!(c4.remove_matching(&Matching::new([]).unwrap()).unwrap(), c4);

        // Cube minus a perfect matching leaves a 2-regular graph.
        let cube = Graph::new(
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
        .unwrap();
        let pm = Matching::new([
            Edge::new(1, 5),
            Edge::new(2, 6),
            Edge::new(3, 7),
            Edge::new(4, 8),
        ])
        .unwrap();
        assert!(pm.is_perfect(&cube));
        assert_eq!(cube.remove_matching(&pm).unwrap().regular_degree(), Some(2));

        let absent = Matching::new([Edge::new(1, 3)]).unwrap();
        assert_eq!(
            c4.remove_matching(&absent),
            Err(GraphError::MissingEdge(Edge::new(1, 3)))
        );
    }

    #[test]
    fn matching_rejects_shared_vertex() {
        let err = Matching::new([Edge::new(1, 2), Edge::new(2, 3)]).unwrap_err();
        assert!(matches!(err, GraphError::NotAMatching(_, _, 2)), "{err}");
    }

    #[test]
    fn adjacency_is_sorted_and_indexed() {
        let g = Graph::new(4, [(2, 4), (1, 2), (2, 3)]).unwrap();
        assert_eq!(g.neighbours(2), &[(1, 0), (3, 1), (4, 2)]);
        assert_eq!(g.edge_index(Edge::new(2, 4)), Some(2));
        assert_eq!(g.edge_index(Edge::new(1, 4)), None);
        assert!(g.has_edge(4, 2));
        assert!(!g.has_edge(1, 3));
        assert!(!g.has_edge(1, 1));
    }
}
