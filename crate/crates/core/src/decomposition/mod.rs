//! Tree K-free decompositions: the data model, nice form, the hat-graph
//! reduction and the file format.

pub mod hat;
pub mod io;
pub mod nice;
pub mod tree;

pub use hat::{convert_hat_decomposition, hat_decomposition, hat_graph, triangles, HatGraph};
pub use io::{
    parse_decomposition, parse_tfd, parse_tkd, write_decomposition, write_tfd, write_tkd,
    DecompositionKind,
};
pub use nice::{to_nice, NiceNode, NiceTreeKFreeDecomposition, NodeKind};
pub use tree::{
    decompose_from_multiway_cut, validate, validate_triangle_free, NodeId, TreeKFreeDecomposition,
    TriangleFreeDecomposition, Violation,
};
