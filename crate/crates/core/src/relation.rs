//! Boolean relation matrices, composition and the commutativity test.
//!
//! Composition follows the convention `(x, z) ∈ R ∘ S` iff there is `y` with
//! `(x, y) ∈ S` and `(y, z) ∈ R`: apply `S` first, then `R`.

use crate::error::Result;
use crate::partition::{GroundSet, Partition};

/// An arbitrary binary relation on the ground set, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryRelation {
    ground: GroundSet,
    rel: Vec<bool>,
}

impl BinaryRelation {
    pub fn empty(ground: GroundSet) -> Self {
        let n = ground.size();
        BinaryRelation {
            ground,
            rel: vec![false; n * n],
        }
    }

    pub fn identity(ground: GroundSet) -> Self {
        let mut r = Self::empty(ground);
        for x in ground.elements() {
            r.set(x, x, true);
        }
        r
    }

    /// Builds a relation from `(x, y)` pairs (0-based).
    pub fn from_pairs(ground: GroundSet, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Self::empty(ground);
        for (x, y) in pairs {
            r.set(x, y, true);
        }
        r
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.size()
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.rel[x * self.n() + y]
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        let n = self.n();
        self.rel[x * n + y] = value;
    }

    /// All related pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n();
        (0..n * n)
            .filter(|&i| self.rel[i])
            .map(move |i| (i / n, i % n))
    }

    pub fn is_reflexive(&self) -> bool {
        self.ground.elements().all(|x| self.get(x, x))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(x, y)| self.get(y, x))
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.n();
        self.pairs()
            .all(|(x, y)| (0..n).all(|z| !self.get(y, z) || self.get(x, z)))
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_reflexive() && self.is_symmetric() && self.is_transitive()
    }

    /// The equivalence classes, if this relation is an equivalence.
    pub fn to_partition(&self) -> Option<Partition> {
        if !self.is_equivalence() {
            return None;
        }
        let labels: Vec<usize> = self
            .ground
            .elements()
            .map(|x| {
                self.ground
                    .elements()
                    .find(|&y| self.get(x, y))
                    .unwrap_or(x)
            })
            .collect();
        Partition::from_labels(self.ground, &labels).ok()
    }
}

/// The equivalence relation "shares an atom with".
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EquivRelation(BinaryRelation);

impl EquivRelation {
    pub fn from_partition(p: &Partition) -> Self {
        let ground = p.ground();
        let mut r = BinaryRelation::empty(ground);
        for atom in p.atoms() {
            for &x in atom {
                for &y in atom {
                    r.set(x, y, true);
                }
            }
        }
        EquivRelation(r)
    }

    /// Accepts a relation only if it is reflexive, symmetric and transitive.
    pub fn try_from_relation(r: BinaryRelation) -> Option<Self> {
        r.is_equivalence().then_some(EquivRelation(r))
    }

    pub fn as_relation(&self) -> &BinaryRelation {
        &self.0
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.0.get(x, y)
    }

    pub fn to_partition(&self) -> Partition {
        self.0
            .to_partition()
            .expect("equivalence relation always induces a partition")
    }
}

impl From<EquivRelation> for BinaryRelation {
    fn from(e: EquivRelation) -> Self {
        e.0
    }
}

/// `r ∘ s`: `(x, z)` is related iff some `y` has `s(x, y)` and `r(y, z)`.
pub fn compose(r: &BinaryRelation, s: &BinaryRelation) -> Result<BinaryRelation> {
    r.ground.ensure_same(s.ground)?;
    let n = r.n();
    let mut out = BinaryRelation::empty(r.ground);
    for x in 0..n {
        for y in (0..n).filter(|&y| s.get(x, y)) {
            for z in (0..n).filter(|&z| r.get(y, z)) {
                out.set(x, z, true);
            }
        }
    }
    Ok(out)
}

/// Which composition contains the witness pair of a failed commutativity test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessSide {
    /// The pair is in `∼a ∘ ∼b` but not `∼b ∘ ∼a`.
    AAfterB,
    /// The pair is in `∼b ∘ ∼a` but not `∼a ∘ ∼b`.
    BAfterA,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommuteVerdict {
    Commuting,
    NonCommuting {
        /// Lexicographically smallest pair (0-based) in exactly one composition.
        witness: (usize, usize),
        side: WitnessSide,
    },
}

impl CommuteVerdict {
    pub fn is_commuting(&self) -> bool {
        matches!(self, CommuteVerdict::Commuting)
    }

    pub fn witness(&self) -> Option<(usize, usize)> {
        match self {
            CommuteVerdict::Commuting => None,
            CommuteVerdict::NonCommuting { witness, .. } => Some(*witness),
        }
    }
}

/// Tests `∼a ∘ ∼b = ∼b ∘ ∼a`.
pub fn commute(a: &Partition, b: &Partition) -> Result<CommuteVerdict> {
    a.ground().ensure_same(b.ground())?;
    let ra = EquivRelation::from_partition(a);
    let rb = EquivRelation::from_partition(b);
    let ab = compose(ra.as_relation(), rb.as_relation())?;
    let ba = compose(rb.as_relation(), ra.as_relation())?;
    let n = a.n();
    for x in 0..n {
        for z in 0..n {
            match (ab.get(x, z), ba.get(x, z)) {
                (true, false) => {
                    return Ok(CommuteVerdict::NonCommuting {
                        witness: (x, z),
                        side: WitnessSide::AAfterB,
                    })
                }
                (false, true) => {
                    return Ok(CommuteVerdict::NonCommuting {
                        witness: (x, z),
                        side: WitnessSide::BAfterA,
                    })
                }
                _ => {}
            }
        }
    }
    Ok(CommuteVerdict::Commuting)
}

/// Convenience form of [`commute`] for partitions already known to share a
/// ground set.
pub fn commutes(a: &Partition, b: &Partition) -> bool {
    commute(a, b).map(|v| v.is_commuting()).unwrap_or(false)
}

/// True iff `∼a ∘ ∼b` is an equivalence relation.
pub fn composition_is_equivalence(a: &Partition, b: &Partition) -> Result<bool> {
    a.ground().ensure_same(b.ground())?;
    let ra = EquivRelation::from_partition(a);
    let rb = EquivRelation::from_partition(b);
    Ok(compose(ra.as_relation(), rb.as_relation())?.is_equivalence())
}
