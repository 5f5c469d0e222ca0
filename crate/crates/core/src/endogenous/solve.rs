//! Construction of endogenous pairs and the uniqueness-up-to-symmetry check.

use crate::dynamics::enumerate_atomic_refinements;
use crate::endogenous::consistency::{check_self_consistent, invariant_extension};
use crate::endogenous::domain::{maximal_elements, CompatibilityDomain};
use crate::error::{Error, Result};
use crate::measure::{
    automorphism_group, invariant_measures, pushforward, InvariantPolytope, PermGroup, Permutation,
    ProbMeasure,
};
use crate::partition::{coarsenings, meet, Partition};

/// Why a strict refinement does not extend an endogenous pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    /// The refinement lies outside the domain.
    NotAdmissible,
    /// The refinement is admissible but no `Aut`-invariant measure on it
    /// restricts to the pair's measure.
    NoInvariantExtension,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RejectedRefinement {
    pub refinement: Partition,
    pub reason: Rejection,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoarseningVerdict {
    pub coarsening: Partition,
    pub restricted: ProbMeasure,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// One-step refinements of the algebra, with the reason each fails to
    /// extend the pair. Every strict admissible refinement passes through
    /// one of these, since domains are closed under coarsening.
    pub rejected_refinements: Vec<RejectedRefinement>,
    /// Strict coarsenings of the algebra and the restricted measure on each.
    pub coarsenings: Vec<CoarseningVerdict>,
    /// True iff the algebra is a maximal element of the domain.
    pub maximal_in_domain: bool,
}

impl Certificate {
    /// Every strict coarsening makes the measure degenerate.
    pub fn minimality_holds(&self) -> bool {
        self.coarsenings.iter().all(|c| c.degenerate)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndogenousPair {
    pub algebra: Partition,
    pub measure: ProbMeasure,
    /// All `Aut(algebra)`-invariant measures; `measure` is its canonical
    /// representative.
    pub polytope: InvariantPolytope,
    pub certificate: Certificate,
}

/// True iff some strict refinement inside the domain carries an invariant
/// measure restricting to `mu`.
pub fn extends_within_domain(mu: &ProbMeasure, domain: &CompatibilityDomain) -> Result<bool> {
    for g in domain
        .members()
        .iter()
        .filter(|q| q.strictly_refines(mu.base()))
    {
        let aut = automorphism_group(g)?;
        if invariant_extension(mu, g, &aut)?.is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Builds the endogenous pairs of a domain.
///
/// Every member is paired with the canonical invariant measure (the
/// `Aut`-average of the uniform measure). Pairs that extend to an invariant
/// measure on a strictly finer member are discarded; maximal members always
/// survive. Among survivors the refinement-minimal algebras are returned in
/// canonical order, each with maximality and minimality evidence.
pub fn solve_endogenous(domain: &CompatibilityDomain) -> Result<Vec<EndogenousPair>> {
    if domain.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let maximal = maximal_elements(domain);
    let mut candidates: Vec<(Partition, InvariantPolytope)> = Vec::new();
    for f in domain.members() {
        let aut = automorphism_group(f)?;
        let polytope = invariant_measures(f, &aut)?;
        let mu = &polytope.representative;
        let is_maximal = maximal.contains(f);
        if !is_maximal && extends_within_domain(mu, domain)? {
            continue;
        }
        debug_assert!(check_self_consistent(f, mu, domain)?.is_self_consistent());
        candidates.push((f.clone(), polytope));
    }

    let minimal: Vec<&(Partition, InvariantPolytope)> = candidates
        .iter()
        .filter(|(f, _)| !candidates.iter().any(|(g, _)| f.strictly_refines(g)))
        .collect();

    minimal
        .into_iter()
        .map(|(f, polytope)| {
            let measure = polytope.representative.clone();
            let certificate = certify(f, &measure, domain, maximal.contains(f))?;
            Ok(EndogenousPair {
                algebra: f.clone(),
                measure,
                polytope: polytope.clone(),
                certificate,
            })
        })
        .collect()
}

fn certify(
    f: &Partition,
    mu: &ProbMeasure,
    domain: &CompatibilityDomain,
    maximal_in_domain: bool,
) -> Result<Certificate> {
    let mut rejected_refinements = Vec::new();
    for step in enumerate_atomic_refinements(f) {
        let target = step.target().clone();
        if rejected_refinements
            .iter()
            .any(|r: &RejectedRefinement| r.refinement == target)
        {
            continue;
        }
        let reason = if !domain.contains(&target) {
            Rejection::NotAdmissible
        } else if invariant_extension(mu, &target, &automorphism_group(&target)?)?.is_none() {
            Rejection::NoInvariantExtension
        } else {
            // only reachable for non-maximal members, which solve_endogenous
            // has already filtered out
            continue;
        };
        rejected_refinements.push(RejectedRefinement {
            refinement: target,
            reason,
        });
    }
    let mut coarsening_verdicts = Vec::new();
    for g in coarsenings(f).filter(|g| g != f) {
        let restricted = mu.restrict(&g)?;
        coarsening_verdicts.push(CoarseningVerdict {
            degenerate: restricted.is_degenerate(),
            coarsening: g,
            restricted,
        });
    }
    Ok(Certificate {
        rejected_refinements,
        coarsenings: coarsening_verdicts,
        maximal_in_domain,
    })
}

/// `g` maps pair `from` onto pair `to`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryWitness {
    pub from: usize,
    pub to: usize,
    pub element: Permutation,
    /// The group acts transitively on the atoms of the target algebra, so
    /// the invariant measure there is the uniform one.
    pub atom_action_transitive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniquenessFailure {
    NoPairs,
    DomainNotPreserved {
        element: Permutation,
        member: Partition,
        image: Partition,
    },
    /// No group element maps the first algebra onto `unreached`.
    NotTransitive {
        unreached: Partition,
    },
    /// `element` maps algebra `from` onto algebra `to` but the pushforward
    /// of the measure differs.
    MeasureMismatch {
        from: usize,
        to: usize,
        element: Permutation,
        pushed: ProbMeasure,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniquenessVerdict {
    UniqueUpToSymmetry { witnesses: Vec<SymmetryWitness> },
    NotEstablished(UniquenessFailure),
}

impl UniquenessVerdict {
    pub fn is_unique(&self) -> bool {
        matches!(self, UniquenessVerdict::UniqueUpToSymmetry { .. })
    }
}

/// Checks the symmetry hypotheses (the group preserves the domain and is
/// transitive on the algebras of `pairs`) and then that each connecting
/// element pushes one measure exactly onto the other.
pub fn check_uniqueness_up_to_symmetry(
    pairs: &[EndogenousPair],
    group: &PermGroup,
    domain: &CompatibilityDomain,
) -> Result<UniquenessVerdict> {
    use UniquenessVerdict::NotEstablished;
    let Some(first) = pairs.first() else {
        return Ok(NotEstablished(UniquenessFailure::NoPairs));
    };
    group.ground().ensure_same(domain.ground())?;

    for g in group.generators() {
        for member in domain.members() {
            let image = g.act_on_partition(member);
            if !domain.contains(&image) {
                return Ok(NotEstablished(UniquenessFailure::DomainNotPreserved {
                    element: g.clone(),
                    member: member.clone(),
                    image,
                }));
            }
        }
    }

    for pair in &pairs[1..] {
        let reached = group
            .elements()
            .iter()
            .any(|g| g.act_on_partition(&first.algebra) == pair.algebra);
        if !reached {
            return Ok(NotEstablished(UniquenessFailure::NotTransitive {
                unreached: pair.algebra.clone(),
            }));
        }
    }

    let mut witnesses = Vec::new();
    for (i, a) in pairs.iter().enumerate() {
        for (j, b) in pairs.iter().enumerate() {
            if i == j {
                continue;
            }
            let g = group
                .elements()
                .iter()
                .find(|g| g.act_on_partition(&a.algebra) == b.algebra)
                .expect("transitivity checked above");
            let pushed = pushforward(g, &a.measure)?;
            if pushed != b.measure {
                return Ok(NotEstablished(UniquenessFailure::MeasureMismatch {
                    from: i,
                    to: j,
                    element: g.clone(),
                    pushed,
                }));
            }
            let atom_action_transitive = group
                .atom_orbits(&b.algebra)
                .map(|orbits| orbits.len() == 1)
                .unwrap_or(false);
            witnesses.push(SymmetryWitness {
                from: i,
                to: j,
                element: g.clone(),
                atom_action_transitive,
            });
        }
    }
    Ok(UniquenessVerdict::UniqueUpToSymmetry { witnesses })
}

/// Domain members compatible with a measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebrasFor {
    /// Members `F` for which `(F, μ|F)` is self-consistent.
    pub algebras: Vec<Partition>,
    /// Members not coarser than `base(μ)`, where restriction is undefined.
    pub skipped: Vec<Partition>,
    /// Finest common coarsening of `algebras`.
    pub meet: Option<Partition>,
}

/// Tests every member that `base(μ)` refines; incomparable members are
/// skipped and listed.
pub fn algebras_for(mu: &ProbMeasure, domain: &CompatibilityDomain) -> Result<AlgebrasFor> {
    let mut algebras = Vec::new();
    let mut skipped = Vec::new();
    for f in domain.members() {
        if !mu.base().refines(f) {
            skipped.push(f.clone());
            continue;
        }
        let restricted = mu.restrict(f)?;
        if check_self_consistent(f, &restricted, domain)?.is_self_consistent() {
            algebras.push(f.clone());
        }
    }
    let meet = meet_all(&algebras)?;
    Ok(AlgebrasFor {
        algebras,
        skipped,
        meet,
    })
}

/// Meet of the compatible algebras of every pair's measure: the finite-atom
/// form of intersecting the compatible classes over all endogenous measures.
pub fn common_algebra(
    pairs: &[EndogenousPair],
    domain: &CompatibilityDomain,
) -> Result<Option<Partition>> {
    let mut all = Vec::new();
    for pair in pairs {
        all.extend(algebras_for(&pair.measure, domain)?.algebras);
    }
    meet_all(&all)
}

fn meet_all(parts: &[Partition]) -> Result<Option<Partition>> {
    let Some((first, rest)) = parts.split_first() else {
        return Ok(None);
    };
    let mut acc = first.clone();
    for p in rest {
        acc = meet(&acc, p)?;
    }
    Ok(Some(acc))
}
