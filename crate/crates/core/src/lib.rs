//! Universal-cycle machinery for graph families: ordered partial graphs,
//! overlap digraphs and their Euler tours, compression of twin edges, the
//! constructions turning word-side objects (De Bruijn cycles, universal
//! partial words, s-overlap cycles) into graph-side cycles, and an
//! exhaustive coverage verifier.

pub mod assembly;
pub mod constructions;
pub mod digraph;
pub mod error;
pub mod euler;
pub mod families;
pub mod graph;
mod guard;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use families::{FamilyDescriptor, FamilyKind, IsoClassCode, Permutation, ThresholdWord};
pub use graph::{OrderedPartialGraph, Pair, Vertex, WindowRef};
pub use verify::{CoverageReport, Verdict};
pub use words::PartialWord;
