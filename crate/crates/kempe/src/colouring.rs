//! Edge colourings: validation, missing colours, colour classes, and the
//! `u v c` exchange format.
//!
//! A [`Colouring`] is a total assignment from the edges of an associated
//! [`Graph`] to colours `1..=palette` (colour 0 is reserved as "absent").
//! Properness is checked, never assumed: [`validate_colouring`] reports every
//! violation. The *missing colour* `m(u)` — central to all fan machinery —
//! is only well-defined when `degree(u) = palette − 1` and the colouring is
//! proper at `u`; [`missing_colour`] enforces exactly that, while
//! [`missing_colours`] is the set-valued fallback for irregular graphs.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError, LabelMap, Matching, Vertex};

/// Colour id; 1-based, 0 reserved.
pub type Colour = u16;

/// Errors from colouring construction, parsing, and queries.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ColouringError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("colouring covers {found} edges but the graph has {expected}")]
    DomainMismatch { expected: usize, found: usize },
    #[error("edge {0} assigned twice")]
    DuplicateAssignment(Edge),
    #[error("edge {0} has no colour assigned")]
    UnassignedEdge(Edge),
    #[error("colour {colour} outside palette 1..={palette}")]
    ColourOutOfPalette { colour: Colour, palette: Colour },
    #[error(
        "missing colour undefined at vertex {vertex}: degree {degree} with palette {palette} \
         (requires degree = palette − 1; regularize first)"
    )]
    MissingUndefined {
        vertex: Vertex,
        degree: usize,
        palette: Colour,
    },
    #[error("colouring not proper at vertex {vertex}: colour {colour} repeats")]
    NotProperAt { vertex: Vertex, colour: Colour },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Total assignment of colours `1..=palette` to the edges of a graph,
/// indexed by the graph's sorted edge order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Colouring {
    palette: Colour,
    colours: Vec<Colour>,
}

impl Colouring {
    /// Builds a colouring from per-edge-index colours. Validates length and
    /// colour range, not properness.
    pub fn new(g: &Graph, palette: Colour, colours: Vec<Colour>) -> Result<Colouring, ColouringError> {
        if colours.len() != g.edge_count() {
            return Err(ColouringError::DomainMismatch {
                expected: g.edge_count(),
                found: colours.len(),
            });
        }
        for &c in &colours {
            if c == 0 || c > palette {
                return Err(ColouringError::ColourOutOfPalette { colour: c, palette });
            }
        }
        Ok(Colouring { palette, colours })
    }

    /// Builds a colouring from `(edge, colour)` pairs covering every edge of
    /// `g` exactly once.
    pub fn from_edge_colours(
        g: &Graph,
        palette: Colour,
        pairs: impl IntoIterator<Item = (Edge, Colour)>,
    ) -> Result<Colouring, ColouringError> {
        let mut colours = vec![0 as Colour; g.edge_count()];
        for (e, c) in pairs {
            let idx = g
                .edge_index(e)
                .ok_or(GraphError::MissingEdge(e))?;
            if colours[idx] != 0 {
                return Err(ColouringError::DuplicateAssignment(e));
            }
            if c == 0 || c > palette {
                return Err(ColouringError::ColourOutOfPalette { colour: c, palette });
            }
            colours[idx] = c;
        }
        if let Some(idx) = colours.iter().position(|&c| c == 0) {
            return Err(ColouringError::UnassignedEdge(g.edges()[idx]));
        }
        Ok(Colouring { palette, colours })
    }

    /// Palette size `k`; valid colours are `1..=k`.
    pub fn palette(&self) -> Colour {
        self.palette
    }

    /// Colour of the edge at `idx` in the graph's sorted edge order.
    pub fn colour(&self, idx: usize) -> Colour {
        self.colours[idx]
    }

    /// All colours in edge-index order.
    pub fn colours(&self) -> &[Colour] {
        &self.colours
    }

    /// Colour of edge `e` under graph `g`, if `e` is an edge of `g`.
    pub fn edge_colour(&self, g: &Graph, e: Edge) -> Option<Colour> {
        g.edge_index(e).map(|idx| self.colours[idx])
    }

    /// Same assignment under a different palette size. Fails if an assigned
    /// colour exceeds the new palette.
    pub fn with_palette(&self, palette: Colour) -> Result<Colouring, ColouringError> {
        for &c in &self.colours {
            if c > palette {
                return Err(ColouringError::ColourOutOfPalette { colour: c, palette });
            }
        }
        Ok(Colouring {
            palette,
            colours: self.colours.clone(),
        })
    }

    pub(crate) fn set(&mut self, idx: usize, c: Colour) {
        debug_assert!(c >= 1 && c <= self.palette);
        self.colours[idx] = c;
    }

    /// Colouring-file serialization: one `u v c` line per edge in sorted
    /// order, original labels applied. [`parse_colouring`] inverts it
    /// bit-exactly.
    pub fn serialize(&self, g: &Graph, labels: &LabelMap) -> String {
        let mut out = String::new();
        for (idx, e) in g.edges().iter().enumerate() {
            out.push_str(&format!(
                "{} {} {}\n",
                labels.label(e.u()),
                labels.label(e.v()),
                self.colours[idx]
            ));
        }
        out
    }
}

/// One properness violation: two distinct edges of equal colour meeting at a
/// vertex.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Violation {
    pub vertex: Vertex,
    pub colour: Colour,
    pub first: Edge,
    pub second: Edge,
}

/// Output of [`validate_colouring`]: every violation plus the set of colours
/// actually used.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub colours_used: BTreeSet<Colour>,
}

impl ValidationReport {
    /// Whether the colouring is proper.
    pub fn is_proper(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks properness at every vertex, reporting each offending edge pair per
/// vertex and colour, and the set of used colours.
pub fn validate_colouring(g: &Graph, c: &Colouring) -> Result<ValidationReport, ColouringError> {
    if c.colours.len() != g.edge_count() {
        return Err(ColouringError::DomainMismatch {
            expected: g.edge_count(),
            found: c.colours.len(),
        });
    }
    let mut violations = Vec::new();
    for v in g.vertices() {
        let incident = g.neighbours(v);
        for (i, &(_, ei)) in incident.iter().enumerate() {
            for &(_, ej) in &incident[i + 1..] {
                if c.colour(ei) == c.colour(ej) {
                    let (first, second) = if g.edges()[ei] < g.edges()[ej] {
                        (g.edges()[ei], g.edges()[ej])
                    } else {
                        (g.edges()[ej], g.edges()[ei])
                    };
                    violations.push(Violation {
                        vertex: v,
                        colour: c.colour(ei),
                        first,
                        second,
                    });
                }
            }
        }
    }
    Ok(ValidationReport {
        violations,
        colours_used: c.colours.iter().copied().collect(),
    })
}

/// Shorthand: `true` iff `c` is a proper colouring of `g`.
pub fn is_proper(g: &Graph, c: &Colouring) -> bool {
    validate_colouring(g, c).map(|r| r.is_proper()).unwrap_or(false)
}

/// The unique colour absent at `u`. Defined exactly when
/// `degree(u) = palette − 1` and no colour repeats at `u` (both checked);
/// on a Δ-regular graph with a proper (Δ+1)-colouring this holds everywhere.
pub fn missing_colour(g: &Graph, c: &Colouring, u: Vertex) -> Result<Colour, ColouringError> {
    let degree = g.degree(u);
    let palette = c.palette();
    if degree + 1 != palette as usize {
        return Err(ColouringError::MissingUndefined {
            vertex: u,
            degree,
            palette,
        });
    }
    let mut seen = vec![false; palette as usize + 1];
    for &(_, idx) in g.neighbours(u) {
        let col = c.colour(idx);
        if seen[col as usize] {
            return Err(ColouringError::NotProperAt { vertex: u, colour: col });
        }
        seen[col as usize] = true;
    }
    // degree distinct colours out of degree+1 leave exactly one absent.
    let missing = (1..=palette).find(|&col| !seen[col as usize]);
    Ok(missing.expect("degree = palette − 1 distinct colours leave one absent"))
}

/// All colours of `1..=palette` absent at `u`, in increasing order. Total on
/// any graph.
pub fn missing_colours(g: &Graph, c: &Colouring, u: Vertex) -> Vec<Colour> {
    let mut seen = vec![false; c.palette() as usize + 1];
    for &(_, idx) in g.neighbours(u) {
        seen[c.colour(idx) as usize] = true;
    }
    (1..=c.palette()).filter(|&col| !seen[col as usize]).collect()
}

/// The edges coloured `colour`, as a matching (properness of `c` guarantees
/// the matching property; an improper class is reported as an error).
pub fn colour_class(g: &Graph, c: &Colouring, colour: Colour) -> Result<Matching, ColouringError> {
    if colour == 0 || colour > c.palette() {
        return Err(ColouringError::ColourOutOfPalette {
            colour,
            palette: c.palette(),
        });
    }
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(idx, _)| c.colour(idx) == colour)
        .map(|(_, &e)| e);
    Ok(Matching::new(edges)?)
}

/// Parses the colouring format: one `u v c` line per graph edge (original
/// labels), each edge exactly once; `#` comment lines and blank lines
/// ignored. With `palette = None` the palette is the maximum colour seen.
pub fn parse_colouring(
    g: &Graph,
    labels: &LabelMap,
    text: &str,
    palette: Option<Colour>,
) -> Result<Colouring, ColouringError> {
    let mut assigned: Vec<Option<Colour>> = vec![None; g.edge_count()];
    let mut max_colour: Colour = 0;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(ColouringError::Parse {
                line: line_no,
                msg: format!("expected `u v c`, found {} tokens", tokens.len()),
            });
        }
        let parse_label = |tok: &str| -> Result<u64, ColouringError> {
            tok.parse::<u64>().map_err(|_| ColouringError::Parse {
                line: line_no,
                msg: format!("invalid vertex label `{tok}`"),
            })
        };
        let lu = parse_label(tokens[0])?;
        let lv = parse_label(tokens[1])?;
        let col: Colour = tokens[2].parse().map_err(|_| ColouringError::Parse {
            line: line_no,
            msg: format!("invalid colour `{}`", tokens[2]),
        })?;
        if col == 0 {
            return Err(ColouringError::Parse {
                line: line_no,
                msg: "colour 0 is reserved".into(),
            });
        }
        let resolve = |l: u64| -> Result<Vertex, ColouringError> {
            labels.vertex_of(l).ok_or(ColouringError::Parse {
                line: line_no,
                msg: format!("vertex label {l} not in the graph"),
            })
        };
        let u = resolve(lu)?;
        let v = resolve(lv)?;
        if u == v {
            return Err(ColouringError::Parse {
                line: line_no,
                msg: format!("loop edge at vertex {lu}"),
            });
        }
        let e = Edge::new(u, v);
        let idx = g.edge_index(e).ok_or(ColouringError::Parse {
            line: line_no,
            msg: format!("edge {lu}-{lv} not in the graph"),
        })?;
        if assigned[idx].is_some() {
            return Err(ColouringError::Parse {
                line: line_no,
                msg: format!("edge {lu}-{lv} assigned twice"),
            });
        }
        assigned[idx] = Some(col);
        max_colour = max_colour.max(col);
    }
    if let Some(idx) = assigned.iter().position(Option::is_none) {
        return Err(ColouringError::UnassignedEdge(g.edges()[idx]));
    }
    let palette = palette.unwrap_or(max_colour);
    let colours: Vec<Colour> = assigned.into_iter().map(Option::unwrap).collect();
    Colouring::new(g, palette, colours)
}

/// First proper `k`-edge-colouring found by backtracking over sorted edges
/// with a seeded randomized candidate order (deterministic per seed, not
/// uniform); `None` if no proper `k`-colouring exists.
pub fn random_proper_colouring(g: &Graph, k: Colour, seed: u64) -> Option<Colouring> {
    fn go(
        g: &Graph,
        k: Colour,
        idx: usize,
        used: &mut [Vec<bool>],
        colours: &mut [Colour],
        rng: &mut ChaCha8Rng,
    ) -> bool {
        if idx == g.edge_count() {
            return true;
        }
        let e = g.edges()[idx];
        let mut cands: Vec<Colour> = (1..=k)
            .filter(|&c| !used[e.u()][c as usize] && !used[e.v()][c as usize])
            .collect();
        cands.shuffle(rng);
        for c in cands {
            colours[idx] = c;
            used[e.u()][c as usize] = true;
            used[e.v()][c as usize] = true;
            if go(g, k, idx + 1, used, colours, rng) {
                return true;
            }
            used[e.u()][c as usize] = false;
            used[e.v()][c as usize] = false;
        }
        colours[idx] = 0;
        false
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used = vec![vec![false; k as usize + 1]; g.vertex_count() + 1];
    let mut colours = vec![0 as Colour; g.edge_count()];
    go(g, k, 0, &mut used, &mut colours, &mut rng)
        .then(|| Colouring::new(g, k, colours).expect("backtracking yields in-palette colours"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{c4, c5, r1};
    use crate::graph::parse_graph;

    #[test]
    fn r1_missing_colours() {
        let (g, c) = r1();
        let expect = [(1, 2), (2, 3), (3, 3), (4, 3), (5, 1)];
        for (v, m) in expect {
            assert_eq!(missing_colour(&g, &c, v).unwrap(), m, "vertex {v}");
        }
        for (e, col) in [((1, 2), 1), ((2, 3), 2), ((3, 4), 1), ((4, 5), 2), ((1, 5), 3)] {
            let e = Edge::new(e.0, e.1);
            // m(u) never equals the colour of an edge at u.
            assert_ne!(missing_colour(&g, &c, e.u()).unwrap(), col);
            assert_ne!(missing_colour(&g, &c, e.v()).unwrap(), col);
        }
    }

    #[test]
    fn r1_colour_classes() {
        let (g, c) = r1();
        let class1 = colour_class(&g, &c, 1).unwrap();
        assert_eq!(class1.edges(), &[Edge::new(1, 2), Edge::new(3, 4)]);
        let class3 = colour_class(&g, &c, 3).unwrap();
        assert_eq!(class3.edges(), &[Edge::new(1, 5)]);
        assert!(matches!(
            colour_class(&g, &c, 4),
            Err(ColouringError::ColourOutOfPalette { colour: 4, palette: 3 })
        ));
        // Classes partition the edge set.
        let total: usize = (1..=3)
            .map(|col| colour_class(&g, &c, col).unwrap().len())
            .sum();
        assert_eq!(total, g.edge_count());
    }

    #[test]
    fn unused_colour_gives_empty_class() {
        let g = c4();
        let c = Colouring::from_edge_colours(
            &g,
            3,
            [
                (Edge::new(1, 2), 2),
                (Edge::new(2, 3), 3),
                (Edge::new(3, 4), 2),
                (Edge::new(1, 4), 3),
            ],
        )
        .unwrap();
        assert!(colour_class(&g, &c, 1).unwrap().is_empty());
        let report = validate_colouring(&g, &c).unwrap();
        assert!(report.is_proper());
        assert_eq!(
            report.colours_used.iter().copied().collect::<Vec<_>>(),
            vec![2, 3]
        );
    }

    #[test]
    fn k2_single_colour_is_proper_and_missing() {
        let g = Graph::new(2, [(1, 2)]).unwrap();
        let c = Colouring::new(&g, 1, vec![1]).unwrap();
        assert!(validate_colouring(&g, &c).unwrap().is_proper());

        let c2 = Colouring::new(&g, 2, vec![2]).unwrap();
        assert_eq!(missing_colour(&g, &c2, 1).unwrap(), 1);
        assert_eq!(missing_colour(&g, &c2, 2).unwrap(), 1);
    }

    #[test]
    fn improper_path_reports_violation_at_middle_vertex() {
        let g = Graph::new(3, [(1, 2), (2, 3)]).unwrap();
        let c = Colouring::new(&g, 1, vec![1, 1]).unwrap();
        let report = validate_colouring(&g, &c).unwrap();
        assert_eq!(
            report.violations,
            vec![Violation {
                vertex: 2,
                colour: 1,
                first: Edge::new(1, 2),
                second: Edge::new(2, 3),
            }]
        );
        assert!(!is_proper(&g, &c));
    }

    #[test]
    fn missing_colour_requires_degree_palette_fit() {
        let star = Graph::new(4, [(1, 2), (1, 3), (1, 4)]).unwrap();
        let c = Colouring::new(&star, 4, vec![1, 2, 3]).unwrap();
        // Leaf vertex has degree 1 ≠ palette − 1 = 3.
        assert!(matches!(
            missing_colour(&star, &c, 2),
            Err(ColouringError::MissingUndefined { vertex: 2, .. })
        ));
        assert_eq!(missing_colour(&star, &c, 1).unwrap(), 4);
        assert_eq!(missing_colours(&star, &c, 2), vec![2, 3, 4]);

        let (g, r1c) = r1();
        let wide = r1c.with_palette(4).unwrap();
        assert!(matches!(
            missing_colour(&g, &wide, 1),
            Err(ColouringError::MissingUndefined { .. })
        ));
        assert_eq!(missing_colours(&g, &wide, 1), vec![2, 4]);
    }

    #[test]
    fn parse_and_serialize_round_trip_with_labels() {
        let (g, map) = parse_graph("5 9\n9 12\n").unwrap();
        let text = "5 9 2\n9 12 1\n";
        let c = parse_colouring(&g, &map, text, None).unwrap();
        assert_eq!(c.palette(), 2);
        assert_eq!(c.colours(), &[2, 1]);
        assert_eq!(c.serialize(&g, &map), text);

        let c3 = parse_colouring(&g, &map, text, Some(3)).unwrap();
        assert_eq!(c3.palette(), 3);
    }

    #[test]
    fn parse_colouring_errors() {
        let (g, map) = parse_graph("1 2\n2 3\n").unwrap();
        let dup = parse_colouring(&g, &map, "1 2 1\n2 1 2\n2 3 1\n", None);
        assert!(matches!(dup, Err(ColouringError::Parse { line: 2, .. })));
        let unknown = parse_colouring(&g, &map, "1 3 1\n", None);
        assert!(matches!(unknown, Err(ColouringError::Parse { line: 1, .. })));
        let missing = parse_colouring(&g, &map, "1 2 1\n", None);
        assert!(matches!(
            missing,
            Err(ColouringError::UnassignedEdge(e)) if e == Edge::new(2, 3)
        ));
        let zero = parse_colouring(&g, &map, "1 2 0\n2 3 1\n", None);
        assert!(matches!(zero, Err(ColouringError::Parse { line: 1, .. })));
    }

    #[test]
    fn random_colouring_is_seeded_and_proper() {
        let g = c5();
        let a = random_proper_colouring(&g, 3, 7).unwrap();
        let b = random_proper_colouring(&g, 3, 7).unwrap();
        assert_eq!(a, b);
        assert!(is_proper(&g, &a));
        assert_eq!(a.palette(), 3);

        // χ'(C₃) = 3, so no proper 2-colouring exists.
        let triangle = Graph::new(3, [(1, 2), (2, 3), (1, 3)]).unwrap();
        assert!(random_proper_colouring(&triangle, 2, 0).is_none());
        assert!(random_proper_colouring(&triangle, 3, 0).is_some());

        let c4g = c4();
        assert!(is_proper(&c4g, &random_proper_colouring(&c4g, 2, 1).unwrap()));
    }

    #[test]
    fn constructor_validation() {
        let g = c4();
        assert!(matches!(
            Colouring::new(&g, 2, vec![1, 2, 1]),
            Err(ColouringError::DomainMismatch { expected: 4, found: 3 })
        ));
        assert!(matches!(
            Colouring::new(&g, 2, vec![1, 2, 1, 3]),
            Err(ColouringError::ColourOutOfPalette { colour: 3, palette: 2 })
        ));
        assert!(matches!(
            Colouring::from_edge_colours(&g, 2, [(Edge::new(1, 2), 1), (Edge::new(1, 2), 2)]),
            Err(ColouringError::DuplicateAssignment(_))
        ));
    }
}
