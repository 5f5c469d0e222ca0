use thiserror::Error;

/// Errors raised by the refinement library.
///
/// Element indices carried by variants are 0-based; `Display` renders them
/// 1-based so messages line up with fixture labels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground set must contain at least one element")]
    EmptyGround,

    #[error("partition has no blocks")]
    NoBlocks,

    #[error("block {block} is empty")]
    EmptyBlock { block: usize },

    #[error("element {} is outside the ground set of size {n}", .element + 1)]
    ElementOutOfRange { element: usize, n: usize },

    #[error("element {} appears in more than one block", .element + 1)]
    Overlap { element: usize },

    #[error("element {} is not covered by any block", .element + 1)]
    Coverage { element: usize },

    #[error("ground set mismatch: {left} vs {right} elements")]
    GroundMismatch { left: usize, right: usize },

    #[error("oracle bound exceeded: n = {n} > {bound}")]
    OracleBoundExceeded { n: usize, bound: usize },

    #[error("{fine} is not a refinement of {coarse}")]
    NotARefinement { coarse: String, fine: String },

    #[error("weights sum to {sum}, expected 1")]
    WeightSum { sum: String },

    #[error("negative weight {value} at position {index}")]
    NegativeWeight { index: usize, value: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("not a permutation of 0..{n}: {detail}")]
    InvalidPermutation { n: usize, detail: String },

    #[error("group element {element} does not preserve {partition}")]
    InvalidGroup { element: String, partition: String },

    #[error("{a} and {b} do not commute (witness ({}, {}))", .witness.0 + 1, .witness.1 + 1)]
    CommutativityViolation {
        a: String,
        b: String,
        witness: (usize, usize),
    },

    #[error("compatibility domain is empty")]
    EmptyDomain,

    #[error("refinements have different sources")]
    SourceMismatch,

    #[error("refinement is not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid atomic refinement: {0}")]
    InvalidRefinement(String),

    #[error("branch set is empty")]
    EmptyBranchSet,

    #[error("incompatible branch input: {0}")]
    IncompatibleInput(String),

    #[error("label {0} names two different refinements")]
    LabelConflict(String),

    #[error("precedence relation has a cycle through {0}")]
    Cyclicity(String),

    #[error("policy error: {0}")]
    Policy(String),

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
}

pub type Result<T> = std::result::Result<T, Error>;
