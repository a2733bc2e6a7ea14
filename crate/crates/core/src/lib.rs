//! Lattices in the automorphism group of a regular tree: covering-tree
//! coordinates, Cuntz-Krieger data and boundary dynamics for a finite graph.

pub mod boundary;
pub mod ck;
pub mod completion;
pub mod covering;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod report;

pub use error::{Error, Result};
