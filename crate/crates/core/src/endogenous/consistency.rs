//! Self-consistency of a (partition, measure) pair and the refinement
//! stability check for non-admissible refinements.

use crate::endogenous::domain::CompatibilityDomain;
use crate::error::{Error, Result};
use crate::feasibility::{nonnegative_solution, Equality};
use crate::measure::{
    automorphism_group, is_invariant, pushforward, PermGroup, Permutation, ProbMeasure,
};
use crate::partition::{enumerate_partitions, is_refinement, Partition};
use crate::rational::{int, Rational};

/// Which symmetry an extension must carry to count as invariance-preserving.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InvarianceReading {
    /// Invariant under at least one nontrivial automorphism of the finer
    /// partition (the cyclic subgroup it generates).
    #[default]
    SomeNontrivialAutomorphism,
    /// Invariant under the whole automorphism group of the finer partition.
    FullAutomorphismGroup,
}

/// Which strict refinements the refinement-consistency clause inspects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RefinementScope {
    /// Only refinements inside the domain. Commutativity holds for those by
    /// membership, so the clause cannot fail; the count is still reported.
    #[default]
    Admissible,
    /// Every strict refinement of the partition. Those outside the domain
    /// must not admit an invariance-preserving extension.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConsistencyOptions {
    pub scope: RefinementScope,
    pub reading: InvarianceReading,
}

/// Outcome of the refinement stability check for one refinement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StabilityVerdict {
    /// The refinement is in the domain, so the check does not apply.
    Vacuous,
    /// No invariance-preserving extension exists.
    Blocked,
    /// An extension exists; `symmetry` generates the subgroup it is
    /// invariant under.
    Violated {
        extension: ProbMeasure,
        symmetry: Vec<Permutation>,
    },
}

/// One failed clause of the self-consistency predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finding {
    NotInDomain,
    /// `element` preserves the partition but moves the measure.
    NotInvariant {
        element: Permutation,
        pushed: ProbMeasure,
    },
    /// A non-admissible strict refinement admits an invariant extension.
    ExtensionExists {
        refinement: Partition,
        extension: ProbMeasure,
        symmetry: Vec<Permutation>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfConsistencyReport {
    pub algebra: Partition,
    pub measure: ProbMeasure,
    pub compat_ok: bool,
    pub invariance_ok: bool,
    pub refinement_ok: bool,
    pub violations: Vec<Finding>,
    pub options: ConsistencyOptions,
    /// Number of strict refinements the third clause looked at.
    pub refinements_checked: usize,
}

impl SelfConsistencyReport {
    pub fn is_self_consistent(&self) -> bool {
        self.compat_ok && self.invariance_ok && self.refinement_ok
    }
}

/// Default-option form of [`check_self_consistent_with`].
pub fn check_self_consistent(
    p: &Partition,
    mu: &ProbMeasure,
    domain: &CompatibilityDomain,
) -> Result<SelfConsistencyReport> {
    check_self_consistent_with(p, mu, domain, ConsistencyOptions::default())
}

/// Evaluates the three clauses: membership in the domain, invariance under
/// `Aut(p)`, and refinement consistency over the selected scope.
pub fn check_self_consistent_with(
    p: &Partition,
    mu: &ProbMeasure,
    domain: &CompatibilityDomain,
    options: ConsistencyOptions,
) -> Result<SelfConsistencyReport> {
    domain.ground().ensure_same(p.ground())?;
    ensure_base(p, mu)?;
    let mut violations = Vec::new();

    let compat_ok = domain.contains(p);
    if !compat_ok {
        violations.push(Finding::NotInDomain);
    }

    let aut = automorphism_group(p)?;
    let invariance_ok = is_invariant(mu, &aut)?;
    if !invariance_ok {
        for g in aut.generators() {
            let pushed = pushforward(g, mu)?;
            if pushed != *mu {
                violations.push(Finding::NotInvariant {
                    element: g.clone(),
                    pushed,
                });
                break;
            }
        }
    }

    let mut refinement_ok = true;
    let refinements_checked;
    match options.scope {
        RefinementScope::Admissible => {
            refinements_checked = domain
                .members()
                .iter()
                .filter(|q| q.strictly_refines(p))
                .count();
        }
        RefinementScope::All => {
            let mut checked = 0;
            for q in enumerate_partitions(p.ground())?.filter(|q| q.strictly_refines(p)) {
                checked += 1;
                if let StabilityVerdict::Violated {
                    extension,
                    symmetry,
                } = check_refinement_stability_with(p, mu, &q, domain, options.reading)?
                {
                    refinement_ok = false;
                    violations.push(Finding::ExtensionExists {
                        refinement: q,
                        extension,
                        symmetry,
                    });
                }
            }
            refinements_checked = checked;
        }
    }

    Ok(SelfConsistencyReport {
        algebra: p.clone(),
        measure: mu.clone(),
        compat_ok,
        invariance_ok,
        refinement_ok,
        violations,
        options,
        refinements_checked,
    })
}

/// Default-reading form of [`check_refinement_stability_with`].
pub fn check_refinement_stability(
    p: &Partition,
    mu: &ProbMeasure,
    fine: &Partition,
    domain: &CompatibilityDomain,
) -> Result<StabilityVerdict> {
    check_refinement_stability_with(p, mu, fine, domain, InvarianceReading::default())
}

/// For a refinement outside the domain, searches for an extension of `mu`
/// to `fine` carrying the symmetry required by `reading`.
pub fn check_refinement_stability_with(
    p: &Partition,
    mu: &ProbMeasure,
    fine: &Partition,
    domain: &CompatibilityDomain,
    reading: InvarianceReading,
) -> Result<StabilityVerdict> {
    ensure_base(p, mu)?;
    ensure_refinement(p, fine)?;
    if domain.contains(fine) {
        return Ok(StabilityVerdict::Vacuous);
    }
    Ok(match symmetric_extension(mu, fine, reading)? {
        Some((extension, symmetry)) => StabilityVerdict::Violated {
            extension,
            symmetry,
        },
        None => StabilityVerdict::Blocked,
    })
}

/// Searches for an extension of `mu` to `fine` that is invariant under a
/// nontrivial subgroup of `Aut(fine)` chosen by `reading`. Candidate
/// subgroups are tried in canonical element order; the first feasible one
/// wins.
pub fn symmetric_extension(
    mu: &ProbMeasure,
    fine: &Partition,
    reading: InvarianceReading,
) -> Result<Option<(ProbMeasure, Vec<Permutation>)>> {
    ensure_refinement(mu.base(), fine)?;
    let aut = automorphism_group(fine)?;
    match reading {
        InvarianceReading::SomeNontrivialAutomorphism => {
            for g in aut.elements().iter().filter(|g| !g.is_identity()) {
                let cyclic = PermGroup::from_generators(fine.ground(), vec![g.clone()])?;
                if let Some(nu) = invariant_extension(mu, fine, &cyclic)? {
                    return Ok(Some((nu, vec![g.clone()])));
                }
            }
            Ok(None)
        }
        InvarianceReading::FullAutomorphismGroup => {
            if aut.order() == 1 {
                return Ok(None);
            }
            Ok(invariant_extension(mu, fine, &aut)?.map(|nu| (nu, aut.generators().to_vec())))
        }
    }
}

/// An extension of `mu` to `fine` invariant under `group`, if one exists.
///
/// Unknowns are the masses of single atoms in each atom orbit (invariance
/// makes them equal across the orbit); restriction to `base(mu)` gives one
/// equality per coarse atom.
pub fn invariant_extension(
    mu: &ProbMeasure,
    fine: &Partition,
    group: &PermGroup,
) -> Result<Option<ProbMeasure>> {
    let witness = ensure_refinement(mu.base(), fine)?;
    let orbits = group.atom_orbits(fine)?;
    let mut orbit_of = vec![0; fine.num_atoms()];
    for (o, orbit) in orbits.iter().enumerate() {
        for &a in orbit {
            orbit_of[a] = o;
        }
    }
    let equalities: Vec<Equality> = (0..mu.base().num_atoms())
        .map(|c| {
            let mut coeffs = vec![Rational::from_integer(0.into()); orbits.len()];
            for a in witness.parts_of(c) {
                coeffs[orbit_of[a]] += int(1);
            }
            Equality::new(coeffs, mu.weight(c).clone())
        })
        .collect();
    let Some(orbit_values) = nonnegative_solution(orbits.len(), &equalities) else {
        return Ok(None);
    };
    let weights = (0..fine.num_atoms())
        .map(|a| orbit_values[orbit_of[a]].clone())
        .collect();
    Ok(Some(ProbMeasure::new(fine.clone(), weights)?))
}

fn ensure_base(p: &Partition, mu: &ProbMeasure) -> Result<()> {
    if mu.base() != p {
        return Err(Error::Shape(format!(
            "measure lives on {} but the pair names {p}",
            mu.base()
        )));
    }
    Ok(())
}

fn ensure_refinement(
    coarse: &Partition,
    fine: &Partition,
) -> Result<crate::partition::RefinementWitness> {
    is_refinement(coarse, fine)?.ok_or_else(|| Error::NotARefinement {
        coarse: coarse.to_string(),
        fine: fine.to_string(),
    })
}
