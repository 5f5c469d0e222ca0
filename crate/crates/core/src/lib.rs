//! Exact finite σ-algebra refinement systems.
//!
//! Finite σ-algebras are handled through their atom partitions
//! ([`partition`]). On top of the refinement lattice the crate provides
//! commutativity of equivalence relations ([`relation`]), exact rational
//! measures and symmetry groups ([`measure`]), compatibility domains and
//! endogenous (self-consistent, non-extendable) measure/algebra pairs
//! ([`endogenous`]), and atomic refinement dynamics with event graphs
//! ([`dynamics`]).
//!
//! Elements are 0-based throughout the API. `Display` implementations and
//! the fixture layer use 1-based labels.

pub mod dynamics;
pub mod endogenous;
pub mod error;
pub mod feasibility;
pub mod measure;
pub mod partition;
pub mod rational;
pub mod relation;

pub use error::{Error, Result};
pub use partition::{GroundSet, Partition};
pub use rational::Rational;
