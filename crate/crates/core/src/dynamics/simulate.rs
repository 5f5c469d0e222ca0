use crate::dynamics::refinement::{
    enumerate_atomic_refinements, AtomicRefinement, RefinementChain,
};
use crate::endogenous::CompatibilityDomain;
use crate::error::{Error, Result};
use crate::partition::Partition;

/// Deterministic choice among the admissible refinements of a partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitRule {
    /// First binary split in canonical order.
    FirstBinary,
    /// Last binary split in canonical order.
    LastBinary,
    /// Full subdivision of the first divisible atom into singletons.
    Singletons,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Policy {
    /// First admissible refinement in canonical enumeration order.
    Exhaustive,
    /// Apply the given steps in order, located by atom content.
    Scripted(Vec<AtomicRefinement>),
    Rule(SplitRule),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// No admissible refinement remains.
    Stabilized,
    StepBudgetExhausted,
    /// The script ran out while admissible refinements remain.
    ScriptCompleted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simulation {
    pub trace: RefinementChain,
    pub outcome: Outcome,
}

impl Simulation {
    pub fn final_partition(&self) -> &Partition {
        self.trace.end()
    }
}

/// Refinements of `p` whose target lies in `domain`, or all of them when no
/// domain is given.
pub fn admissible_refinements<'a>(
    p: &'a Partition,
    domain: Option<&'a CompatibilityDomain>,
) -> impl Iterator<Item = AtomicRefinement> + 'a {
    enumerate_atomic_refinements(p).filter(move |r| domain.map_or(true, |d| d.contains(r.target())))
}

/// Runs refinement operators from `start` until nothing admissible remains
/// or `max_steps` steps have been taken.
pub fn simulate(
    start: &Partition,
    policy: &Policy,
    max_steps: usize,
    domain: Option<&CompatibilityDomain>,
) -> Result<Simulation> {
    if let Some(d) = domain {
        start.ground().ensure_same(d.ground())?;
    }
    let mut trace = RefinementChain::empty(start.clone());
    let mut script = match policy {
        Policy::Scripted(steps) => steps.iter(),
        _ => [].iter(),
    };
    loop {
        let current = trace.end().clone();
        let mut options = admissible_refinements(&current, domain).peekable();
        if options.peek().is_none() {
            return Ok(Simulation {
                trace,
                outcome: Outcome::Stabilized,
            });
        }
        if trace.len() >= max_steps {
            return Ok(Simulation {
                trace,
                outcome: Outcome::StepBudgetExhausted,
            });
        }
        let step = match policy {
            Policy::Exhaustive => options.next(),
            Policy::Rule(SplitRule::FirstBinary) => options.find(AtomicRefinement::is_binary),
            Policy::Rule(SplitRule::LastBinary) => {
                options.filter(AtomicRefinement::is_binary).last()
            }
            Policy::Rule(SplitRule::Singletons) => {
                options.find(|r| r.parts().iter().all(|p| p.len() == 1))
            }
            Policy::Scripted(_) => match script.next() {
                None => {
                    return Ok(Simulation {
                        trace,
                        outcome: Outcome::ScriptCompleted,
                    })
                }
                Some(s) => Some(scripted_step(&current, s, domain)?),
            },
        };
        let Some(step) = step else {
            return Err(Error::Policy(format!(
                "{policy:?} selects none of the admissible refinements of {current}"
            )));
        };
        trace.push(step)?;
    }
}

fn scripted_step(
    current: &Partition,
    step: &AtomicRefinement,
    domain: Option<&CompatibilityDomain>,
) -> Result<AtomicRefinement> {
    if !step.is_applicable(current) {
        return Err(Error::Policy(format!(
            "{step} is not applicable to {current}"
        )));
    }
    let relocated =
        AtomicRefinement::splitting(current, step.atom(), step.parts())?.with_label(step.label());
    if let Some(d) = domain {
        if !d.contains(relocated.target()) {
            return Err(Error::Policy(format!(
                "{step} leads to {} outside the domain",
                relocated.target()
            )));
        }
    }
    Ok(relocated)
}
