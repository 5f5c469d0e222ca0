use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::partition::{coarsenings, GroundSet, Partition};
use crate::relation::{commute, CommuteVerdict};

/// A nonempty, coarsening-closed family of pairwise commuting partitions.
///
/// Members are kept sorted in canonical partition order. The only way to
/// obtain a domain is [`build_domain`], which enforces both conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityDomain {
    ground: GroundSet,
    members: Vec<Partition>,
}

impl CompatibilityDomain {
    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn members(&self) -> &[Partition] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Membership, i.e. admissibility of a refinement target.
    pub fn contains(&self, p: &Partition) -> bool {
        self.members.binary_search(p).is_ok()
    }

    /// Re-checks both closure conditions on the stored members.
    pub fn audit(&self) -> Result<()> {
        if self.members.is_empty() {
            return Err(Error::EmptyDomain);
        }
        for p in &self.members {
            if let Some(missing) = coarsenings(p).find(|q| !self.contains(q)) {
                return Err(Error::Shape(format!(
                    "{missing} is a coarsening of member {p} but not a member"
                )));
            }
        }
        first_non_commuting_pair(&self.members)
    }

    /// Covering pairs `(i, j)` of member indices: member `j` strictly refines
    /// member `i` with no member strictly in between.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        let m = &self.members;
        let mut out = Vec::new();
        for i in 0..m.len() {
            for j in 0..m.len() {
                if !m[j].strictly_refines(&m[i]) {
                    continue;
                }
                let between = (0..m.len())
                    .any(|k| m[k].strictly_refines(&m[i]) && m[j].strictly_refines(&m[k]));
                if !between {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

fn first_non_commuting_pair(members: &[Partition]) -> Result<()> {
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            if let CommuteVerdict::NonCommuting { witness, .. } = commute(a, b)? {
                return Err(Error::CommutativityViolation {
                    a: a.to_string(),
                    b: b.to_string(),
                    witness,
                });
            }
        }
    }
    Ok(())
}

/// Closes the generators under coarsening and checks pairwise commutativity
/// of the closure. The first non-commuting pair in canonical order is
/// reported.
pub fn build_domain(generators: &[Partition]) -> Result<CompatibilityDomain> {
    let first = generators.first().ok_or(Error::EmptyDomain)?;
    let ground = first.ground();
    for g in generators {
        ground.ensure_same(g.ground())?;
    }
    let closure: BTreeSet<Partition> = generators.iter().flat_map(coarsenings).collect();
    let members: Vec<Partition> = closure.into_iter().collect();
    first_non_commuting_pair(&members)?;
    Ok(CompatibilityDomain { ground, members })
}

/// Members with no strict refinement inside the domain, in canonical order.
pub fn maximal_elements(domain: &CompatibilityDomain) -> Vec<Partition> {
    domain
        .members
        .iter()
        .filter(|p| !domain.members.iter().any(|q| q.strictly_refines(p)))
        .cloned()
        .collect()
}
