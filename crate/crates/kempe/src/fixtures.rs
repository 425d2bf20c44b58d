//! Shared fixtures for the crate's unit tests.

use crate::colouring::Colouring;
use crate::graph::{Edge, Graph};

/// Cycle 1-2-…-n-1.
pub fn cycle(n: usize) -> Graph {
    Graph::new(n, (1..=n).map(|i| (i, i % n + 1))).unwrap()
}

pub fn c4() -> Graph {
    cycle(4)
}

pub fn c5() -> Graph {
    cycle(5)
}

/// Running fixture: C₅ with edges 12,23,34,45,51 coloured 1,2,1,2,3
/// (palette 3).
pub fn r1() -> (Graph, Colouring) {
    let g = c5();
    let c = Colouring::from_edge_colours(
        &g,
        3,
        [
            (Edge::new(1, 2), 1),
            (Edge::new(2, 3), 2),
            (Edge::new(3, 4), 1),
            (Edge::new(4, 5), 2),
            (Edge::new(5, 1), 3),
        ],
    )
    .unwrap();
    (g, c)
}

/// The 3-cube: two 4-rings 1-2-3-4 and 5-6-7-8 joined by rungs i-(i+4).
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

/// A proper 4-colouring of the cube whose fan walk at centre 1 from
/// neighbour 2 is a comet: spokes 2, 4, 5 with the walk looping back to
/// spoke 1 (vertex 4).
pub fn cube_comet() -> (Graph, Colouring) {
    let g = cube();
    let c = Colouring::from_edge_colours(
        &g,
        4,
        [
            (Edge::new(1, 2), 1),
            (Edge::new(1, 4), 2),
            (Edge::new(1, 5), 3),
            (Edge::new(2, 3), 3),
            (Edge::new(2, 6), 4),
            (Edge::new(3, 4), 4),
            (Edge::new(3, 7), 1),
            (Edge::new(4, 8), 1),
            (Edge::new(5, 6), 1),
            (Edge::new(5, 8), 4),
            (Edge::new(6, 7), 2),
            (Edge::new(7, 8), 3),
        ],
    )
    .unwrap();
    (g, c)
}

/// C₄ coloured 2,3,2,3 around the cycle (palette 3) — the start colouring of
/// the recolouring walkthroughs.
pub fn c4_start() -> (Graph, Colouring) {
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
    (g, c)
}
