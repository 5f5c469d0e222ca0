//! Compatibility domains, self-consistency, and endogenous measure/algebra
//! pairs.

mod consistency;
mod domain;
mod solve;

pub use consistency::{
    check_refinement_stability, check_refinement_stability_with, check_self_consistent,
    check_self_consistent_with, invariant_extension, symmetric_extension, ConsistencyOptions,
    Finding, InvarianceReading, RefinementScope, SelfConsistencyReport, StabilityVerdict,
};
pub use domain::{build_domain, maximal_elements, CompatibilityDomain};
pub use solve::{
    algebras_for, check_uniqueness_up_to_symmetry, common_algebra, extends_within_domain,
    solve_endogenous, AlgebrasFor, Certificate, CoarseningVerdict, EndogenousPair,
    RejectedRefinement, Rejection, SymmetryWitness, UniquenessFailure, UniquenessVerdict,
};
