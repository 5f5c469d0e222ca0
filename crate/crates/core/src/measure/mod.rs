//! Exact probability measures on partition atoms, permutation groups acting
//! on them, and invariant measures.

mod group;
mod invariant;
mod prob;

pub use group::{
    automorphism_group, automorphism_group_bounded, for_each_permutation, PermGroup, Permutation,
};
pub use invariant::{
    group_average, invariant_measures, is_invariant, pushforward, unique_invariant_if_transitive,
    InvariantPolytope,
};
pub use prob::{check_distribution, ProbMeasure};
