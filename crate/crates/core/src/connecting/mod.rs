//! S-connecting systems and the Steiner tree algorithm built on them.

pub mod matching;
pub mod solver;
pub mod systems;

pub use matching::{min_weight_assignment, Matching, SignedWeight};
pub use solver::{
    solve_via_multiway_cut, solve_via_multiway_cut_threads, BipartiteWeights, CutInstance,
    Reconstruction,
};
pub use systems::{enumerate_systems, is_self_reachable, SConnectingSystem, SystemNode};
