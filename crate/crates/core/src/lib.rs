//! Spanning trees of random graphs with a given degree sequence.

pub mod asymptotics;
pub mod concentration;
pub mod degseq;
mod dsu;
pub mod error;
pub mod experiments;
pub mod graphs;
pub mod io;
pub mod numeric;
mod parallel;
pub mod trees;

pub use degseq::{DegreeSequence, DegreeStats, Eta, TreeDegreeSequence};
pub use error::{Error, Result};
pub use graphs::{Multigraph, SimpleGraph, SpanningTreeCount};
pub use trees::{Forest, LabeledTree, PruferCode};
