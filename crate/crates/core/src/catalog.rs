//! Small graphs used throughout the examples and tests.

use crate::graph::Graph;

fn build(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Graph {
    Graph::new(
        vertices.iter().copied(),
        edges
            .iter()
            .map(|&(e, s, t)| (e.to_string(), s.to_string(), t.to_string())),
    )
    .expect("catalog graphs are valid")
}

/// Vertices `1`, `2`; edges `a: 1->1`, `b: 1->2`, `c: 2->1`.
pub fn golden_mean() -> Graph {
    build(
        &["1", "2"],
        &[("a", "1", "1"), ("b", "1", "2"), ("c", "2", "1")],
    )
}

/// Vertices `1`, `2`; edges `p, q: 1->2` and `r, s: 2->1`. Period 2.
pub fn period_two() -> Graph {
    build(
        &["1", "2"],
        &[
            ("p", "1", "2"),
            ("q", "1", "2"),
            ("r", "2", "1"),
            ("s", "2", "1"),
        ],
    )
}

/// A period-3 cycle of three vertices with doubled edges out of `1`.
pub fn period_three() -> Graph {
    build(
        &["1", "2", "3"],
        &[
            ("e", "1", "2"),
            ("f", "1", "2"),
            ("g", "2", "3"),
            ("h", "3", "1"),
            ("k", "2", "3"),
        ],
    )
}
