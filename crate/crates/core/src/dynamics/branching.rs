use crate::dynamics::refinement::{classify, AtomicRefinement, Separation};
use crate::error::{Error, Result};
use crate::measure::check_distribution;
use crate::rational::{int, rat, Rational};

/// Strategy for weighting mutually exclusive branches.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum BranchingRule {
    #[default]
    Uniform,
    /// Weight proportional to the number of parts each branch creates.
    ProportionalToPartCount,
    /// Caller-supplied weights, one per branch.
    Table(Vec<Rational>),
}

/// Weights for a set of pairwise timelike branches from one source.
pub fn branching_weights(
    branches: &[AtomicRefinement],
    rule: &BranchingRule,
) -> Result<Vec<Rational>> {
    let first = branches.first().ok_or(Error::EmptyBranchSet)?;
    for b in &branches[1..] {
        if b.source() != first.source() {
            return Err(Error::SourceMismatch);
        }
    }
    for (i, a) in branches.iter().enumerate() {
        for b in &branches[i + 1..] {
            if classify(a, b)? == Separation::Spacelike {
                return Err(Error::IncompatibleInput(format!(
                    "{a} and {b} are spacelike and can be realised jointly"
                )));
            }
        }
    }
    let weights = match rule {
        BranchingRule::Uniform => vec![rat(1, branches.len() as i64); branches.len()],
        BranchingRule::ProportionalToPartCount => {
            let total: usize = branches.iter().map(|b| b.parts().len()).sum();
            branches
                .iter()
                .map(|b| int(b.parts().len() as i64) / int(total as i64))
                .collect()
        }
        BranchingRule::Table(table) => {
            if table.len() != branches.len() {
                return Err(Error::Shape(format!(
                    "{} branches but {} table weights",
                    branches.len(),
                    table.len()
                )));
            }
            table.clone()
        }
    };
    check_distribution(&weights)?;
    Ok(weights)
}
