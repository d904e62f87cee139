//! Exact Steiner tree algorithms parameterized by multiway cuts and by
//! K-free treewidth, with the supporting decomposition and
//! representative-set machinery.

pub mod connecting;
pub mod cost;
pub mod decomposition;
pub mod dp;
pub mod error;
pub mod exact;
pub mod graph;
pub mod instance;
pub mod multiway;
pub mod partition;
pub mod rank;
pub mod verify;

pub use cost::{Cost, EdgeWeight, Weight};
pub use error::{Error, Result};
pub use graph::{Edge, Graph, Subgraph, TerminalSet, Vertex, VertexSet};
