//! Latin squares, their substructures, random greedy triangle removal,
//! fractional triangle decompositions and absorber gadgets.

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod absorb;
pub mod count;
pub mod error;
pub mod extremal;
pub mod format;
pub mod fracdec;
pub mod graph;
pub mod process;
pub mod rng;
pub mod sample;
pub mod square;
pub mod triples;

pub use error::{Error, Result, Violation};
pub use graph::{TripartiteGraph, Vertex};
pub use square::{GroupSpec, LatinRectangle, LatinSquare, PartialArray};
pub use triples::{Triple, TripleSystem};
