//! Kempe-change reconfiguration of proper edge colourings.
//!
//! A *Kempe chain* of a properly edge-coloured graph is a connected component
//! of the subgraph spanned by two colour classes; swapping the two colours on
//! one chain yields another proper colouring (a *Kempe move*). This crate
//! provides:
//!
//! * core graph / colouring types with a plain-text exchange format
//!   ([`graph`], [`colouring`]),
//! * chain extraction and move application, plus digest-bound trace files
//!   that make recolouring runs independently verifiable ([`chain`],
//!   [`trace`]),
//! * fan-sequence machinery around a vertex: classification of the
//!   out-degree-≤1 "next colour" digraph into paths, cycles and comets, and
//!   realization procedures that invert a fan by explicit Kempe moves
//!   ([`fan`]),
//! * a constructive engine that transforms any proper (χ′+1)-edge-colouring
//!   of a triangle-free graph into any given optimal χ′-edge-colouring
//!   ([`engine`]),
//! * a brute-force reconfiguration oracle that enumerates all proper
//!   k-edge-colourings of a small graph and partitions them into Kempe
//!   equivalence classes ([`oracle`]), with a data-parallel implementation
//!   behind the `parallel` feature (on by default).

pub mod chain;
pub mod colouring;
pub mod engine;
pub mod fan;
pub mod graph;
pub mod oracle;
pub mod trace;

#[cfg(test)]
pub(crate) mod fixtures;

pub use chain::{
    apply_move, chain_at, swap_classes, Chain, ChainAnchor, ChainError, ChainShape, KempeMove,
};
pub use colouring::{
    colour_class, is_proper, missing_colour, missing_colours, parse_colouring,
    random_proper_colouring, validate_colouring, Colour, Colouring, ColouringError,
    ValidationReport, Violation,
};
pub use engine::{
    classify_edges, extend_start, find_free_vertex_via_ugly, make_class_monochromatic,
    project_trace, reduce_step, regularize, transform, CaseCounts, Checkpoint, EdgeStatus,
    Embedding, EngineError, ReduceCase, TransformOptions, TransformOutcome, TransformReport,
};
pub use fan::{
    fan_sequence, invert_sequence, realize_comet, realize_nonsaturated_cycle, realize_path,
    realize_saturated_cycle, smallest_nonsaturation_witness, FanError, FanSequence, FanShape,
};
pub use graph::{parse_graph, Edge, Graph, GraphError, LabelMap, Matching, Vertex};
pub use oracle::{
    are_equivalent, available_moves, class_diameters, enumerate_colourings,
    estimate_state_count, kempe_distances, reconfiguration_components, ColouringIndex,
    ComponentReport, ExecMode, KempeDistances, OracleError, OracleOptions, DEFAULT_STATE_CAP,
};
pub use trace::{
    digest_colouring, digest_graph, read_trace, verify_trace, write_trace, Trace, TraceError,
    Verdict,
};
