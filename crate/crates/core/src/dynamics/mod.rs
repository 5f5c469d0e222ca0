//! Atomic refinement steps, event graphs over them, and refinement runs.

mod branching;
mod events;
mod refinement;
mod simulate;

pub use branching::{branching_weights, BranchingRule};
pub use events::{
    build_event_graph, build_event_graph_from_chains, histories_coherent, EventGraph,
};
pub use refinement::{
    classify, decompose, enumerate_atomic_refinements, extend_along, operators_commute,
    AtomicRefinement, RefinementChain, Separation,
};
pub use simulate::{admissible_refinements, simulate, Outcome, Policy, Simulation, SplitRule};
