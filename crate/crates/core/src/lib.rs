//! Oriented m-partite Cayley digraphs of valency 3 and their automorphism groups.

pub mod autgroup;
pub mod catalog;
pub mod cayley;
pub mod digraph;
pub mod group;
pub mod io;
pub mod perm;
pub mod schreier;
pub mod search;

pub use group::{named_group, GroupError, GroupSpec, GroupTable, Word};
pub use perm::Perm;
pub use cayley::{build_cayley, right_translations, validate_sets, ConnectionSets, PartitionedDigraph, ValidationReport};
pub use digraph::Digraph;
pub use autgroup::{automorphism_group, is_semiregular_rep, AutGroupResult, RepVerdict};
