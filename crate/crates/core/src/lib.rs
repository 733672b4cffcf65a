//! Exact counting of maximum matchings in trees, constructions of the trees
//! with the most maximum matchings, and an exhaustive verification harness.

pub mod continuants;
pub mod decimal;
pub mod enumerate;
pub mod error;
pub mod expr;
pub mod extremal;
pub mod matching;
pub mod outline;
pub mod quad;
pub mod tree;
pub mod verify;

pub use error::{Error, Result};
pub use matching::{match_stats, vertex_types, MatchStats, VertexType};
pub use tree::{canonical_code, rooted_canonical_code, tree_from_edges, CanonicalCode, RootedTree, Tree};
