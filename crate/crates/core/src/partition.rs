//! Finite σ-algebras represented by their atoms.
//!
//! On a finite ground set a σ-algebra is determined by its partition into
//! atoms, so every algebra in this crate is a [`Partition`]. Partitions are
//! kept in canonical form: atoms are sorted internally and ordered by their
//! minimum element, and `atom_of` is the restricted growth string of the
//! partition. Two partitions are equal iff their canonical forms are equal.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Default upper bound on `n` for exhaustive enumerations.
pub const DEFAULT_ORACLE_BOUND: usize = 8;

/// The ground set `{0, .., n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSet(usize);

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGround);
        }
        Ok(GroundSet(n))
    }

    pub fn size(self) -> usize {
        self.0
    }

    pub fn elements(self) -> std::ops::Range<usize> {
        0..self.0
    }

    pub(crate) fn ensure_same(self, other: GroundSet) -> Result<()> {
        if self != other {
            return Err(Error::GroundMismatch {
                left: self.0,
                right: other.0,
            });
        }
        Ok(())
    }
}

/// A canonical partition of the ground set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    ground: GroundSet,
    atom_of: Vec<usize>,
    atoms: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds a canonical partition from arbitrary blocks.
    ///
    /// Block order and element order inside blocks do not matter. Fails on
    /// empty blocks, out-of-range elements, overlaps and uncovered elements.
    pub fn from_blocks<B: AsRef<[usize]>>(ground: GroundSet, blocks: &[B]) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::NoBlocks);
        }
        let n = ground.size();
        let mut label = vec![None; n];
        for (b, block) in blocks.iter().enumerate() {
            let block = block.as_ref();
            if block.is_empty() {
                return Err(Error::EmptyBlock { block: b });
            }
            for &x in block {
                if x >= n {
                    return Err(Error::ElementOutOfRange { element: x, n });
                }
                if label[x].replace(b).is_some() {
                    return Err(Error::Overlap { element: x });
                }
            }
        }
        let mut labels = Vec::with_capacity(n);
        for (x, l) in label.into_iter().enumerate() {
            labels.push(l.ok_or(Error::Coverage { element: x })?);
        }
        Ok(Self::from_labels_unchecked(ground, &labels))
    }

    /// Builds a partition from any labelling: `x` and `y` share an atom iff
    /// `labels[x] == labels[y]`.
    pub fn from_labels(ground: GroundSet, labels: &[usize]) -> Result<Self> {
        if labels.len() != ground.size() {
            return Err(Error::Shape(format!(
                "{} labels for a ground set of {}",
                labels.len(),
                ground.size()
            )));
        }
        Ok(Self::from_labels_unchecked(ground, labels))
    }

    fn from_labels_unchecked(ground: GroundSet, labels: &[usize]) -> Self {
        let mut relabel: Vec<(usize, usize)> = Vec::new();
        let mut atom_of = Vec::with_capacity(labels.len());
        let mut atoms: Vec<Vec<usize>> = Vec::new();
        for (x, &l) in labels.iter().enumerate() {
            let idx = match relabel.iter().find(|(old, _)| *old == l) {
                Some(&(_, new)) => new,
                None => {
                    let new = atoms.len();
                    relabel.push((l, new));
                    atoms.push(Vec::new());
                    new
                }
            };
            atom_of.push(idx);
            atoms[idx].push(x);
        }
        Partition {
            ground,
            atom_of,
            atoms,
        }
    }

    /// The one-atom partition (the σ-algebra `{∅, Ω}`).
    pub fn trivial(ground: GroundSet) -> Self {
        Self::from_labels_unchecked(ground, &vec![0; ground.size()])
    }

    /// The partition into singletons (the power set).
    pub fn discrete(ground: GroundSet) -> Self {
        let labels: Vec<usize> = ground.elements().collect();
        Self::from_labels_unchecked(ground, &labels)
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.size()
    }

    pub fn atoms(&self) -> &[Vec<usize>] {
        &self.atoms
    }

    pub fn atom(&self, index: usize) -> &[usize] {
        &self.atoms[index]
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    /// Index of the atom containing `x`.
    pub fn atom_of(&self, x: usize) -> usize {
        self.atom_of[x]
    }

    /// The restricted growth string of the partition.
    pub fn labels(&self) -> &[usize] {
        &self.atom_of
    }

    pub fn is_trivial(&self) -> bool {
        self.atoms.len() == 1
    }

    pub fn is_discrete(&self) -> bool {
        self.atoms.len() == self.n()
    }

    /// Index of the atom equal to `block` (as a set), if any.
    pub fn find_atom(&self, block: &[usize]) -> Option<usize> {
        let first = *block.first()?;
        if first >= self.n() {
            return None;
        }
        let idx = self.atom_of[first];
        let atom = &self.atoms[idx];
        if atom.len() == block.len()
            && block
                .iter()
                .all(|&x| x < self.n() && self.atom_of[x] == idx)
        {
            Some(idx)
        } else {
            None
        }
    }

    /// True iff `self` refines `coarse` (every atom of `self` lies inside an
    /// atom of `coarse`). Partitions on different ground sets never refine
    /// each other.
    pub fn refines(&self, coarse: &Partition) -> bool {
        self.ground == coarse.ground
            && self.atoms.iter().all(|atom| {
                atom.iter()
                    .all(|&x| coarse.atom_of[x] == coarse.atom_of[atom[0]])
            })
    }

    /// True iff `self` refines `coarse` and differs from it.
    pub fn strictly_refines(&self, coarse: &Partition) -> bool {
        self.refines(coarse) && self.num_atoms() > coarse.num_atoms()
    }

    /// Replaces the atom covered by `parts` with the parts themselves.
    /// `parts` must partition one atom of `self`.
    pub(crate) fn split_atom(&self, parts: &[Vec<usize>]) -> Partition {
        let mut labels = self.atom_of.clone();
        let fresh = self.num_atoms();
        for (k, part) in parts.iter().enumerate().skip(1) {
            for &x in part {
                labels[x] = fresh + k;
            }
        }
        Self::from_labels_unchecked(self.ground, &labels)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical total order: by ground size, then lexicographically by the
/// restricted growth string. This is the enumeration order of
/// [`enumerate_partitions`].
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ground
            .cmp(&other.ground)
            .then_with(|| self.atom_of.cmp(&other.atom_of))
    }
}

/// Renders with 1-based labels, e.g. `{{1,2},{3,4}}`.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, atom) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write_block(f, atom)?;
        }
        f.write_str("}")
    }
}

pub(crate) fn write_block(f: &mut impl fmt::Write, block: &[usize]) -> fmt::Result {
    f.write_str("{")?;
    for (j, x) in block.iter().enumerate() {
        if j > 0 {
            f.write_str(",")?;
        }
        write!(f, "{}", x + 1)?;
    }
    f.write_str("}")
}

/// Formats a set of 0-based elements with 1-based labels.
pub fn format_block(block: &[usize]) -> String {
    let mut s = String::new();
    let _ = write_block(&mut s, block);
    s
}

/// Evidence that `fine` refines `coarse`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementWitness {
    pub coarse: Partition,
    pub fine: Partition,
    /// For each fine atom, the index of the coarse atom containing it.
    pub block_map: Vec<usize>,
}

impl RefinementWitness {
    /// Fine atom indices contained in the given coarse atom, in order.
    pub fn parts_of(&self, coarse_atom: usize) -> Vec<usize> {
        self.block_map
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == coarse_atom)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Tests `coarse ⪯ fine`, returning the block map when it holds.
pub fn is_refinement(coarse: &Partition, fine: &Partition) -> Result<Option<RefinementWitness>> {
    coarse.ground.ensure_same(fine.ground)?;
    if !fine.refines(coarse) {
        return Ok(None);
    }
    let block_map = fine
        .atoms
        .iter()
        .map(|atom| coarse.atom_of[atom[0]])
        .collect();
    Ok(Some(RefinementWitness {
        coarse: coarse.clone(),
        fine: fine.clone(),
        block_map,
    }))
}

/// Coarsest common refinement: atoms are the nonempty pairwise intersections.
pub fn join(a: &Partition, b: &Partition) -> Result<Partition> {
    a.ground.ensure_same(b.ground)?;
    let nb = b.num_atoms();
    let labels: Vec<usize> = a
        .ground
        .elements()
        .map(|x| a.atom_of[x] * nb + b.atom_of[x])
        .collect();
    Ok(Partition::from_labels_unchecked(a.ground, &labels))
}

/// Finest common coarsening: the transitive closure of the union of the two
/// equivalence relations, computed by union-find.
pub fn meet(a: &Partition, b: &Partition) -> Result<Partition> {
    a.ground.ensure_same(b.ground)?;
    let mut uf = UnionFind::new(a.n());
    for p in [a, b] {
        for atom in &p.atoms {
            for w in atom.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
    }
    let labels: Vec<usize> = a.ground.elements().map(|x| uf.find(x)).collect();
    Ok(Partition::from_labels_unchecked(a.ground, &labels))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            // keep the smaller root so roots stay deterministic
            let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
            self.parent[hi] = lo;
        }
    }
}

/// Iterator over restricted growth strings of length `n` in lexicographic
/// order.
#[derive(Debug, Clone)]
pub struct RestrictedGrowth {
    current: Option<Vec<usize>>,
    // prefix maxima: max[i] = max(rgs[0..=i])
    max: Vec<usize>,
}

impl RestrictedGrowth {
    pub fn new(n: usize) -> Self {
        RestrictedGrowth {
            current: if n == 0 { None } else { Some(vec![0; n]) },
            max: vec![0; n],
        }
    }

    fn advance(&mut self) {
        let Some(rgs) = self.current.as_mut() else {
            return;
        };
        let n = rgs.len();
        let mut i = n;
        while i > 1 {
            i -= 1;
            if rgs[i] <= self.max[i - 1] {
                rgs[i] += 1;
                self.max[i] = self.max[i - 1].max(rgs[i]);
                for j in i + 1..n {
                    rgs[j] = 0;
                    self.max[j] = self.max[i];
                }
                return;
            }
        }
        self.current = None;
    }
}

impl Iterator for RestrictedGrowth {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        self.advance();
        Some(out)
    }
}

/// All partitions of the ground set in canonical order, one per restricted
/// growth string. Fails when `n` exceeds [`DEFAULT_ORACLE_BOUND`].
pub fn enumerate_partitions(ground: GroundSet) -> Result<impl Iterator<Item = Partition>> {
    enumerate_partitions_bounded(ground, DEFAULT_ORACLE_BOUND)
}

pub fn enumerate_partitions_bounded(
    ground: GroundSet,
    bound: usize,
) -> Result<impl Iterator<Item = Partition>> {
    if ground.size() > bound {
        return Err(Error::OracleBoundExceeded {
            n: ground.size(),
            bound,
        });
    }
    Ok(RestrictedGrowth::new(ground.size())
        .map(move |rgs| Partition::from_labels_unchecked(ground, &rgs)))
}

/// Every coarsening of `p` (every way of merging its atoms), including `p`
/// itself and the trivial partition. Order follows the restricted growth
/// strings over `p`'s atoms, so the trivial partition comes first.
pub fn coarsenings(p: &Partition) -> impl Iterator<Item = Partition> + '_ {
    RestrictedGrowth::new(p.num_atoms()).map(move |merge| {
        let labels: Vec<usize> = p.atom_of.iter().map(|&a| merge[a]).collect();
        Partition::from_labels_unchecked(p.ground, &labels)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    fn part(n: usize, blocks: &[&[usize]]) -> Partition {
        Partition::from_blocks(g(n), blocks).unwrap()
    }

    #[test]
    fn canonical_order_by_minimum() {
        let p = part(4, &[&[2, 3], &[1, 0]]);
        assert_eq!(p.atoms(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(p.labels(), &[0, 0, 1, 1]);
        assert_eq!(p.to_string(), "{{1,2},{3,4}}");
    }

    #[test]
    fn singletons_are_discrete() {
        let p = part(4, &[&[0], &[1], &[2], &[3]]);
        assert!(p.is_discrete());
        assert_eq!(p, Partition::discrete(g(4)));
    }

    #[test]
    fn rejects_overlap_and_gaps() {
        assert_eq!(
            Partition::from_blocks(g(3), &[vec![0, 1], vec![1, 2]]),
            Err(Error::Overlap { element: 1 })
        );
        assert_eq!(
            Partition::from_blocks(g(3), &[vec![0, 1]]),
            Err(Error::Coverage { element: 2 })
        );
        assert_eq!(
            Partition::from_blocks(g(2), &[vec![0, 0], vec![1]]),
            Err(Error::Overlap { element: 0 })
        );
        assert!(matches!(
            Partition::from_blocks(g(2), &[vec![0, 5]]),
            Err(Error::ElementOutOfRange { element: 5, .. })
        ));
        assert!(matches!(
            Partition::from_blocks::<Vec<usize>>(g(2), &[]),
            Err(Error::NoBlocks)
        ));
        assert!(GroundSet::new(0).is_err());
    }

    #[test]
    fn refinement_examples() {
        let pa = part(4, &[&[0, 1], &[2, 3]]);
        let pb = part(4, &[&[0, 2], &[1, 3]]);
        let trivial = Partition::trivial(g(4));
        let discrete = Partition::discrete(g(4));
        assert!(is_refinement(&trivial, &pa).unwrap().is_some());
        let w = is_refinement(&pa, &discrete).unwrap().unwrap();
        assert_eq!(w.block_map, vec![0, 0, 1, 1]);
        assert_eq!(w.parts_of(1), vec![2, 3]);
        assert!(is_refinement(&pa, &pb).unwrap().is_none());
        assert!(is_refinement(&pa, &pa).unwrap().is_some());
        assert!(matches!(
            is_refinement(&pa, &Partition::trivial(g(3))),
            Err(Error::GroundMismatch { .. })
        ));
    }

    #[test]
    fn join_and_meet_examples() {
        let pa = part(4, &[&[0, 1], &[2, 3]]);
        let pb = part(4, &[&[0, 2], &[1, 3]]);
        let pb2 = part(4, &[&[0, 2, 3], &[1]]);
        assert_eq!(join(&pa, &pb).unwrap(), Partition::discrete(g(4)));
        assert_eq!(join(&pa, &pb2).unwrap(), part(4, &[&[0], &[1], &[2, 3]]));
        assert_eq!(join(&pa, &pa).unwrap(), pa);
        assert_eq!(meet(&pa, &pb).unwrap(), Partition::trivial(g(4)));
        assert_eq!(meet(&pa, &pb2).unwrap(), Partition::trivial(g(4)));
        assert_eq!(meet(&pa, &Partition::discrete(g(4))).unwrap(), pa);
    }

    #[test]
    fn enumeration_counts() {
        let counts: Vec<usize> = (1..=6)
            .map(|n| enumerate_partitions(g(n)).unwrap().count())
            .collect();
        assert_eq!(counts, vec![1, 2, 5, 15, 52, 203]);
        assert!(matches!(
            enumerate_partitions(g(9)),
            Err(Error::OracleBoundExceeded { n: 9, bound: 8 })
        ));
        assert_eq!(
            enumerate_partitions_bounded(g(9), 9)
                .unwrap()
                .next()
                .unwrap()
                .num_atoms(),
            1
        );
    }

    #[test]
    fn enumeration_is_sorted_and_starts_trivial() {
        let all: Vec<Partition> = enumerate_partitions(g(4)).unwrap().collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all[0].is_trivial());
        assert!(all.last().unwrap().is_discrete());
    }

    #[test]
    fn coarsening_examples() {
        let pa = part(4, &[&[0, 1], &[2, 3]]);
        let c: Vec<Partition> = coarsenings(&pa).collect();
        assert_eq!(c, vec![Partition::trivial(g(4)), pa.clone()]);
        assert_eq!(coarsenings(&Partition::discrete(g(3))).count(), 5);
        let t = Partition::trivial(g(4));
        assert_eq!(coarsenings(&t).collect::<Vec<_>>(), vec![t.clone()]);
    }

    #[test]
    fn find_atom_matches_sets_only() {
        let pa = part(4, &[&[0, 1], &[2, 3]]);
        assert_eq!(pa.find_atom(&[2, 3]), Some(1));
        assert_eq!(pa.find_atom(&[2]), None);
        assert_eq!(pa.find_atom(&[1, 2]), None);
        assert_eq!(pa.find_atom(&[]), None);
    }

    #[test]
    fn split_atom_replaces_one_block() {
        let pa = part(4, &[&[0, 1], &[2, 3]]);
        let q = pa.split_atom(&[vec![2], vec![3]]);
        assert_eq!(q, part(4, &[&[0, 1], &[2], &[3]]));
    }
}
