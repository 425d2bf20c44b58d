//! Move traces: the crate's certificate format.
//!
//! A [`Trace`] records an ordered list of Kempe moves together with 64-bit
//! FNV-1a digests of the graph and the initial colouring (canonical
//! serializations, identity labels), so a trace file is bound to the exact
//! instance it was produced for. [`verify_trace`] replays the moves from
//! scratch — properness is re-validated after every move, anchors are
//! re-checked — making acceptance independent of whatever produced the
//! trace.
//!
//! File format (JSON Lines): a header object
//! `{"graph": digest, "start": digest, "palette": k}` followed by one
//! `{"c1": int, "c2": int, "anchor": [u, v]}` object per move, with anchors
//! in original vertex labels.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{apply_move, KempeMove};
use crate::colouring::{validate_colouring, Colour, Colouring};
use crate::graph::{Edge, Graph, LabelMap, Vertex};

/// Errors that make a trace unusable (as opposed to merely rejected).
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("trace has no header line")]
    MissingHeader,
    #[error("graph digest mismatch: trace has {found:#018x}, graph is {expected:#018x}")]
    GraphDigestMismatch { expected: u64, found: u64 },
    #[error("start digest mismatch: trace has {found:#018x}, colouring is {expected:#018x}")]
    StartDigestMismatch { expected: u64, found: u64 },
    #[error("palette mismatch: trace declares {found}, start colouring has {expected}")]
    PaletteMismatch { expected: Colour, found: Colour },
}

/// 64-bit FNV-1a.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Digest of a graph's canonical (identity-label) serialization.
pub fn digest_graph(g: &Graph) -> u64 {
    fnv1a(g.serialize(&LabelMap::identity(g.vertex_count())).as_bytes())
}

/// Digest of a colouring's canonical (identity-label) serialization.
pub fn digest_colouring(g: &Graph, c: &Colouring) -> u64 {
    fnv1a(c.serialize(g, &LabelMap::identity(g.vertex_count())).as_bytes())
}

/// An ordered Kempe-move sequence bound to one graph and start colouring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Trace {
    pub graph_digest: u64,
    pub start_digest: u64,
    pub palette: Colour,
    pub moves: Vec<KempeMove>,
}

impl Trace {
    /// Trace with the header derived from `g` and `start`.
    pub fn new(g: &Graph, start: &Colouring, moves: Vec<KempeMove>) -> Trace {
        Trace {
            graph_digest: digest_graph(g),
            start_digest: digest_colouring(g, start),
            palette: start.palette(),
            moves,
        }
    }

    /// The empty trace for `(g, start)`.
    pub fn empty(g: &Graph, start: &Colouring) -> Trace {
        Trace::new(g, start, Vec::new())
    }

    /// Number of moves.
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    /// Whether the trace has no moves.
    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }
}

#[derive(Serialize, Deserialize)]
struct HeaderLine {
    graph: u64,
    start: u64,
    palette: Colour,
}

#[derive(Serialize, Deserialize)]
struct MoveLine {
    c1: Colour,
    c2: Colour,
    anchor: (u64, u64),
}

/// Serializes a trace as JSON Lines, anchors mapped to original labels.
pub fn write_trace(t: &Trace, labels: &LabelMap) -> String {
    let header = HeaderLine {
        graph: t.graph_digest,
        start: t.start_digest,
        palette: t.palette,
    };
    let mut out = serde_json::to_string(&header).expect("header serializes");
    out.push('\n');
    for m in &t.moves {
        let line = MoveLine {
            c1: m.c1(),
            c2: m.c2(),
            anchor: (labels.label(m.anchor().u()), labels.label(m.anchor().v())),
        };
        out.push_str(&serde_json::to_string(&line).expect("move serializes"));
        out.push('\n');
    }
    out
}

/// Parses a JSON Lines trace, mapping anchor labels back to vertices.
pub fn read_trace(text: &str, labels: &LabelMap) -> Result<Trace, TraceError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (hi, header_line) = lines.next().ok_or(TraceError::MissingHeader)?;
    let header: HeaderLine =
        serde_json::from_str(header_line).map_err(|e| TraceError::Parse {
            line: hi + 1,
            msg: format!("bad header: {e}"),
        })?;
    let mut moves = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        let parse = |msg: String| TraceError::Parse { line: line_no, msg };
        let ml: MoveLine = serde_json::from_str(line)
            .map_err(|e| parse(format!("bad move: {e}")))?;
        if ml.c1 == 0 || ml.c2 == 0 {
            return Err(parse("colour 0 is reserved".into()));
        }
        if ml.c1 == ml.c2 {
            return Err(parse(format!("move colours equal ({})", ml.c1)));
        }
        let resolve = |l: u64| -> Result<Vertex, TraceError> {
            labels
                .vertex_of(l)
                .ok_or_else(|| parse(format!("vertex label {l} not in the graph")))
        };
        let u = resolve(ml.anchor.0)?;
        let v = resolve(ml.anchor.1)?;
        if u == v {
            return Err(parse(format!("anchor is a loop at {}", ml.anchor.0)));
        }
        moves.push(KempeMove::new(ml.c1, ml.c2, Edge::new(u, v)));
    }
    Ok(Trace {
        graph_digest: header.graph,
        start_digest: header.start,
        palette: header.palette,
        moves,
    })
}

/// Outcome of replaying a trace.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    /// Every move applied cleanly, every intermediate colouring proper, and
    /// the final colouring matched `expected` (when given).
    Accepted { final_colouring: Colouring },
    /// Move `index` (0-based) could not be applied, or broke properness.
    RejectedMove { index: usize, reason: String },
    /// Replay succeeded but the final colouring differs from `expected`.
    FinalMismatch { edge: Edge, got: Colour, want: Colour },
}

impl Verdict {
    /// Whether the trace was accepted.
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted { .. })
    }
}

/// Replays `t` on `(g, start)` from scratch. Digest or palette mismatches
/// are errors (the trace belongs to a different instance); anchor or
/// properness failures during replay are rejections; an `expected` final
/// colouring is compared assignment-by-assignment (palette sizes may
/// differ).
pub fn verify_trace(
    g: &Graph,
    start: &Colouring,
    t: &Trace,
    expected: Option<&Colouring>,
) -> Result<Verdict, TraceError> {
    let g_digest = digest_graph(g);
    if t.graph_digest != g_digest {
        return Err(TraceError::GraphDigestMismatch {
            expected: g_digest,
            found: t.graph_digest,
        });
    }
    let s_digest = digest_colouring(g, start);
    if t.start_digest != s_digest {
        return Err(TraceError::StartDigestMismatch {
            expected: s_digest,
            found: t.start_digest,
        });
    }
    if t.palette != start.palette() {
        return Err(TraceError::PaletteMismatch {
            expected: start.palette(),
            found: t.palette,
        });
    }

    let reject = |index: usize, reason: String| Verdict::RejectedMove { index, reason };
    match validate_colouring(g, start) {
        Ok(report) if report.is_proper() => {}
        Ok(report) => {
            let v = report.violations[0];
            return Ok(reject(
                0,
                format!(
                    "start colouring not proper: colour {} repeats at vertex {} ({}, {})",
                    v.colour, v.vertex, v.first, v.second
                ),
            ));
        }
        Err(e) => return Ok(reject(0, format!("start colouring invalid: {e}"))),
    }

    let mut cur = start.clone();
    for (index, &m) in t.moves.iter().enumerate() {
        if m.c2() > t.palette {
            return Ok(reject(
                index,
                format!("colour {} outside palette 1..={}", m.c2(), t.palette),
            ));
        }
        cur = match apply_move(g, &cur, m) {
            Ok(next) => next,
            Err(e) => return Ok(reject(index, e.to_string())),
        };
        // apply_move preserves properness mathematically; re-check anyway —
        // this is the certificate layer.
        let report = validate_colouring(g, &cur).map_err(|e| TraceError::Parse {
            line: index + 2,
            msg: e.to_string(),
        })?;
        if let Some(v) = report.violations.first() {
            return Ok(reject(
                index,
                format!(
                    "properness violated: colour {} repeats at vertex {} ({}, {})",
                    v.colour, v.vertex, v.first, v.second
                ),
            ));
        }
    }

    if let Some(want) = expected {
        for (idx, e) in g.edges().iter().enumerate() {
            if cur.colour(idx) != want.colour(idx) {
                return Ok(Verdict::FinalMismatch {
                    edge: *e,
                    got: cur.colour(idx),
                    want: want.colour(idx),
                });
            }
        }
    }
    Ok(Verdict::Accepted { final_colouring: cur })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::r1;
    use crate::graph::parse_graph;

    #[test]
    fn digests_use_canonical_labels() {
        let (a, _) = parse_graph("5 9\n9 12").unwrap();
        let (b, _) = parse_graph("1 2\n2 3").unwrap();
        assert_eq!(digest_graph(&a), digest_graph(&b));
        let (c, _) = parse_graph("1 2\n1 3").unwrap();
        assert_ne!(digest_graph(&a), digest_graph(&c));
    }

    #[test]
    fn exact_file_format() {
        let (g, c) = r1();
        let m = KempeMove::new(3, 2, Edge::new(5, 1));
        let t = Trace::new(&g, &c, vec![m]);
        let text = write_trace(&t, &LabelMap::identity(5));
        let expect = format!(
            "{{\"graph\":{},\"start\":{},\"palette\":3}}\n{{\"c1\":2,\"c2\":3,\"anchor\":[1,5]}}\n",
            digest_graph(&g),
            digest_colouring(&g, &c)
        );
        assert_eq!(text, expect);
    }

    #[test]
    fn read_write_round_trip_with_labels() {
        let (g, map) = parse_graph("5 9\n9 12\n5 12").unwrap();
        let c = Colouring::new(&g, 3, vec![1, 2, 3]).unwrap();
        let t = Trace::new(
            &g,
            &c,
            vec![
                KempeMove::new(1, 2, Edge::new(1, 2)),
                KempeMove::new(3, 1, Edge::new(2, 3)),
            ],
        );
        let text = write_trace(&t, &map);
        assert!(text.contains("\"anchor\":[5,9]"));
        assert_eq!(read_trace(&text, &map).unwrap(), t);
    }

    #[test]
    fn read_trace_errors() {
        let map = LabelMap::identity(5);
        assert_eq!(read_trace("", &map), Err(TraceError::MissingHeader));
        assert!(matches!(
            read_trace("not json", &map),
            Err(TraceError::Parse { line: 1, .. })
        ));
        let header = "{\"graph\":1,\"start\":2,\"palette\":3}\n";
        for (bad, why) in [
            ("{\"c1\":2,\"c2\":2,\"anchor\":[1,5]}", "equal colours"),
            ("{\"c1\":0,\"c2\":2,\"anchor\":[1,5]}", "colour zero"),
            ("{\"c1\":1,\"c2\":2,\"anchor\":[1,9]}", "unknown label"),
            ("{\"c1\":1,\"c2\":2,\"anchor\":[1,1]}", "loop anchor"),
        ] {
            let text = format!("{header}{bad}\n");
            assert!(
                matches!(read_trace(&text, &map), Err(TraceError::Parse { line: 2, .. })),
                "{why}"
            );
        }
    }

    #[test]
    fn verify_empty_trace_against_start() {
        let (g, c) = r1();
        let t = Trace::empty(&g, &c);
        let verdict = verify_trace(&g, &c, &t, Some(&c)).unwrap();
        assert_eq!(
            verdict,
            Verdict::Accepted {
                final_colouring: c.clone()
            }
        );
    }

    #[test]
    fn verify_replays_and_compares() {
        let (g, c) = r1();
        let m = KempeMove::new(2, 3, Edge::new(1, 5));
        let expected = apply_move(&g, &c, m).unwrap();
        let t = Trace::new(&g, &c, vec![m]);
        assert!(verify_trace(&g, &c, &t, Some(&expected))
            .unwrap()
            .is_accepted());

        // Wrong expectation is a final mismatch, not a rejection.
        let verdict = verify_trace(&g, &c, &t, Some(&c)).unwrap();
        assert!(matches!(verdict, Verdict::FinalMismatch { .. }));
    }

    #[test]
    fn verify_rejects_bad_anchor_with_index() {
        let (g, c) = r1();
        let good = KempeMove::new(2, 3, Edge::new(1, 5));
        let bad = KempeMove::new(1, 2, Edge::new(1, 5)); // 1-5 is coloured 3, then 2
        let t = Trace::new(&g, &c, vec![good, good, bad]);
        // After two applications of `good` the colouring is back to start,
        // so 1-5 is coloured 3 again and the third move's anchor is invalid.
        let verdict = verify_trace(&g, &c, &t, None).unwrap();
        assert!(
            matches!(verdict, Verdict::RejectedMove { index: 2, .. }),
            "{verdict:?}"
        );
    }

    #[test]
    fn verify_rejects_out_of_palette_colours() {
        let (g, c) = r1();
        let t = Trace::new(&g, &c, vec![KempeMove::new(3, 9, Edge::new(1, 5))]);
        let verdict = verify_trace(&g, &c, &t, None).unwrap();
        assert!(matches!(verdict, Verdict::RejectedMove { index: 0, .. }));
    }

    #[test]
    fn verify_demands_matching_digests() {
        let (g, c) = r1();
        let t = Trace::empty(&g, &c);
        let (other, _) = parse_graph("1 2\n2 3\n3 4\n4 5\n1 5\n1 3").unwrap();
        let oc = Colouring::new(&other, 3, vec![1, 3, 2, 2, 1, 3]).unwrap();
        assert!(matches!(
            verify_trace(&other, &oc, &t, None),
            Err(TraceError::GraphDigestMismatch { .. })
        ));

        let restart = Colouring::new(&g, 3, vec![2, 3, 1, 2, 1]).unwrap();
        assert!(matches!(
            verify_trace(&g, &restart, &t, None),
            Err(TraceError::StartDigestMismatch { .. })
        ));

        let mut t2 = Trace::empty(&g, &c);
        t2.palette = 4;
        assert!(matches!(
            verify_trace(&g, &c, &t2, None),
            Err(TraceError::PaletteMismatch { .. })
        ));
    }
}
