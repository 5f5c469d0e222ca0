//! Pushforwards, invariance, and the polytope of invariant measures.

use num_traits::{One, Zero};

use crate::error::Result;
use crate::measure::group::{PermGroup, Permutation};
use crate::measure::prob::ProbMeasure;
use crate::partition::Partition;
use crate::rational::{int, Rational};

/// `g♯μ`, a measure on `g · base(μ)` with `(g♯μ)(g·A) = μ(A)`.
pub fn pushforward(g: &Permutation, mu: &ProbMeasure) -> Result<ProbMeasure> {
    mu.base().ground().ensure_same(g.ground())?;
    let image = g.act_on_partition(mu.base());
    let mut weights = vec![Rational::zero(); image.num_atoms()];
    for (a, atom) in mu.base().atoms().iter().enumerate() {
        weights[image.atom_of(g.apply(atom[0]))] = mu.weight(a).clone();
    }
    Ok(ProbMeasure::from_parts_unchecked(image, weights))
}

/// True iff `μ(g⁻¹A) = μ(A)` for every atom `A` and every group element.
/// Fails with `InvalidGroup` if some element does not preserve `base(μ)`.
pub fn is_invariant(mu: &ProbMeasure, group: &PermGroup) -> Result<bool> {
    group.ensure_preserves(mu.base())?;
    for g in group.generators() {
        if pushforward(g, mu)? != *mu {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(1/|G|) Σ_g g♯μ`. The group must preserve `base(μ)`.
pub fn group_average(mu: &ProbMeasure, group: &PermGroup) -> Result<ProbMeasure> {
    group.ensure_preserves(mu.base())?;
    let mut weights = vec![Rational::zero(); mu.base().num_atoms()];
    for g in group.elements() {
        let pushed = pushforward(g, mu)?;
        for (w, p) in weights.iter_mut().zip(pushed.weights()) {
            *w += p;
        }
    }
    let order = int(group.order() as i64);
    for w in &mut weights {
        *w /= &order;
    }
    Ok(ProbMeasure::from_parts_unchecked(
        mu.base().clone(),
        weights,
    ))
}

/// The set of `G`-invariant probability measures on a partition.
///
/// Invariant measures are exactly the assignments constant on atom orbits,
/// so the set is a simplex whose vertices are the uniform measures on each
/// orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantPolytope {
    pub base: Partition,
    /// Atom-index orbits, ordered by smallest atom.
    pub orbits: Vec<Vec<usize>>,
    /// `|orbits| - 1`.
    pub dimension: usize,
    /// Group average of the uniform-on-atoms measure.
    pub representative: ProbMeasure,
}

impl InvariantPolytope {
    /// One vertex per orbit: mass 1 spread evenly over that orbit's atoms.
    pub fn vertices(&self) -> Vec<ProbMeasure> {
        self.orbits
            .iter()
            .map(|orbit| {
                let share = Rational::one() / int(orbit.len() as i64);
                let mut weights = vec![Rational::zero(); self.base.num_atoms()];
                for &a in orbit {
                    weights[a] = share.clone();
                }
                ProbMeasure::from_parts_unchecked(self.base.clone(), weights)
            })
            .collect()
    }

    /// Membership test: same base and weights constant on every orbit.
    pub fn contains(&self, mu: &ProbMeasure) -> bool {
        mu.base() == &self.base
            && self
                .orbits
                .iter()
                .all(|orbit| orbit.iter().all(|&a| mu.weight(a) == mu.weight(orbit[0])))
    }

    /// The measure with total mass `masses[i]` spread evenly over orbit `i`.
    pub fn point_from_orbit_masses(&self, masses: &[Rational]) -> Result<ProbMeasure> {
        let mut weights = vec![Rational::zero(); self.base.num_atoms()];
        for (orbit, m) in self.orbits.iter().zip(masses) {
            let share = m / int(orbit.len() as i64);
            for &a in orbit {
                weights[a] = share.clone();
            }
        }
        ProbMeasure::new(self.base.clone(), weights)
    }
}

pub fn invariant_measures(p: &Partition, group: &PermGroup) -> Result<InvariantPolytope> {
    let orbits = group.atom_orbits(p)?;
    let representative = group_average(&ProbMeasure::uniform(p.clone()), group)?;
    Ok(InvariantPolytope {
        base: p.clone(),
        dimension: orbits.len() - 1,
        orbits,
        representative,
    })
}

/// The uniform measure when the group is transitive on atoms, which is then
/// the only invariant measure; `None` otherwise.
pub fn unique_invariant_if_transitive(
    p: &Partition,
    group: &PermGroup,
) -> Result<Option<ProbMeasure>> {
    let polytope = invariant_measures(p, group)?;
    if polytope.dimension != 0 {
        return Ok(None);
    }
    let uniform = ProbMeasure::uniform(p.clone());
    debug_assert_eq!(polytope.representative, uniform);
    Ok(Some(uniform))
}
