//! The bundled example graphs.

use crate::graph::{parse_graph, Graph};

pub const THETA: &str = include_str!("../fixtures/theta.graph");
pub const DUMBBELL: &str = include_str!("../fixtures/dumbbell.graph");
pub const BOUQUET: &str = include_str!("../fixtures/bouquet.graph");
pub const DOUBLE_THETA: &str = include_str!("../fixtures/double_theta.graph");
pub const K4: &str = include_str!("../fixtures/k4.graph");

/// `(name, source)` for every bundled fixture.
pub const SOURCES: [(&str, &str); 5] = [
    ("theta", THETA),
    ("dumbbell", DUMBBELL),
    ("bouquet", BOUQUET),
    ("double_theta", DOUBLE_THETA),
    ("k4", K4),
];

pub fn source(name: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

fn load(text: &str) -> Graph {
    parse_graph(text).expect("bundled fixture parses")
}

pub fn theta() -> Graph {
    load(THETA)
}

pub fn dumbbell() -> Graph {
    load(DUMBBELL)
}

pub fn bouquet() -> Graph {
    load(BOUQUET)
}

pub fn double_theta() -> Graph {
    load(DOUBLE_THETA)
}

pub fn k4() -> Graph {
    load(K4)
}

pub fn all() -> Vec<(&'static str, Graph)> {
    SOURCES.iter().map(|(n, s)| (*n, load(s))).collect()
}
