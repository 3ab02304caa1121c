//! Clique-saturation toolkit: Turán-type constructions, counting of
//! `K_p`-saturating edges, clique packings, exact closed-form bounds and an
//! exhaustive small-graph search.

pub mod constructions;
pub mod formulas;
pub mod graph;
pub mod packing;
pub mod saturation;
pub mod search;
pub mod verify;

pub use formulas::Rational;
pub use graph::{Graph, GraphError, VertexSet};
