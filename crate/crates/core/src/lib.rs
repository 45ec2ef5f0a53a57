//! Finite-group classification over subgroup lattices.
//!
//! Groups are multiplication tables ([`GroupTable`]); their subgroup lattices
//! are enumerated exhaustively ([`SubgroupLattice`]) and every predicate is
//! decided from that data: permutability, modular elements, lattice
//! modularity, Iwasawa and Schmidt groups, minimal non-𝒳 groups, and exact
//! subgroup commutativity degrees.

pub mod analysis;
pub mod arith;
pub mod bitset;
pub mod caps;
pub mod classify;
pub mod corpus;
pub mod degrees;
pub mod group;
pub mod lattice;
pub mod named;
pub mod spec;

pub use analysis::Analysis;
pub use bitset::Bitset;
pub use caps::Caps;
pub use group::{GroupError, GroupTable, MetacyclicParams, Permutation};
pub use lattice::{enumerate_subgroups, Subgroup, SubgroupLattice};
pub use spec::GroupSpec;
