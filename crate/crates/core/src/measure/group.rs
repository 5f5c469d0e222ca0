//! Permutations of the ground set and the finite groups they generate.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::partition::{GroundSet, Partition, DEFAULT_ORACLE_BOUND};

/// A bijection of `{0, .., n-1}`; `map[x]` is the image of `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(ground: GroundSet, map: Vec<usize>) -> Result<Self> {
        let n = ground.size();
        if map.len() != n {
            return Err(Error::InvalidPermutation {
                n,
                detail: format!("length {}", map.len()),
            });
        }
        let mut seen = vec![false; n];
        for &y in &map {
            if y >= n || std::mem::replace(&mut seen[y], true) {
                return Err(Error::InvalidPermutation {
                    n,
                    detail: format!("image {} repeated or out of range", y + 1),
                });
            }
        }
        Ok(Permutation { map })
    }

    pub fn identity(ground: GroundSet) -> Self {
        Permutation {
            map: ground.elements().collect(),
        }
    }

    /// Builds a permutation from disjoint cycles of 0-based elements.
    pub fn from_cycles(ground: GroundSet, cycles: &[&[usize]]) -> Result<Self> {
        let mut map: Vec<usize> = ground.elements().collect();
        let mut touched = HashSet::new();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= ground.size() || !touched.insert(x) {
                    return Err(Error::InvalidPermutation {
                        n: ground.size(),
                        detail: format!("cycles are not disjoint at {}", x + 1),
                    });
                }
                map[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::new(ground, map)
    }

    /// A single transposition of two 0-based elements.
    pub fn transposition(ground: GroundSet, a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Ok(Self::identity(ground));
        }
        Self::from_cycles(ground, &[&[a, b]])
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn ground(&self) -> GroundSet {
        GroundSet::new(self.n()).expect("permutations are never empty")
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &y)| i == y)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            map: other.map.iter().map(|&y| self.map[y]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Permutation { map: inv }
    }

    /// Image of a set, sorted.
    pub fn image(&self, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&x| self.map[x]).collect();
        out.sort_unstable();
        out
    }

    /// `g · P`: the partition whose atoms are the images of the atoms of `P`.
    pub fn act_on_partition(&self, p: &Partition) -> Partition {
        let mut labels = vec![0; p.n()];
        for x in p.ground().elements() {
            labels[self.map[x]] = p.atom_of(x);
        }
        Partition::from_labels(p.ground(), &labels).expect("label vector has ground length")
    }

    /// True iff every atom of `p` is mapped onto an atom of `p`.
    pub fn preserves(&self, p: &Partition) -> bool {
        self.n() == p.n()
            && p.atoms().iter().all(|atom| {
                let target = p.atom_of(self.map[atom[0]]);
                atom.iter().all(|&x| p.atom_of(self.map[x]) == target)
                    && p.atom(target).len() == atom.len()
            })
    }

    /// The induced map on atom indices of a preserved partition.
    pub fn atom_map(&self, p: &Partition) -> Vec<usize> {
        p.atoms()
            .iter()
            .map(|atom| p.atom_of(self.map[atom[0]]))
            .collect()
    }

    /// Disjoint cycles of length at least two, each starting at its minimum.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for start in 0..self.n() {
            if seen[start] || self.map[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.map[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.map[x];
            }
            out.push(cycle);
        }
        out
    }
}

/// Cycle notation with 1-based labels, `()` for the identity.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A finite permutation group with its elements materialized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    ground: GroundSet,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermGroup {
    /// The group generated by `generators` (closure under composition).
    pub fn from_generators(ground: GroundSet, generators: Vec<Permutation>) -> Result<Self> {
        for g in &generators {
            ground.ensure_same(g.ground())?;
        }
        let identity = Permutation::identity(ground);
        let mut seen: HashSet<Permutation> = HashSet::from([identity.clone()]);
        let mut queue = VecDeque::from([identity]);
        while let Some(h) = queue.pop_front() {
            for g in &generators {
                let gh = g.compose(&h);
                if seen.insert(gh.clone()) {
                    queue.push_back(gh);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort();
        Ok(PermGroup {
            ground,
            generators,
            elements,
        })
    }

    pub fn trivial(ground: GroundSet) -> Self {
        PermGroup {
            ground,
            generators: Vec::new(),
            elements: vec![Permutation::identity(ground)],
        }
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Elements in lexicographic order of their image vectors; the identity
    /// is always first.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    /// Checks that every generator (hence every element) preserves `p`.
    pub fn ensure_preserves(&self, p: &Partition) -> Result<()> {
        self.ground.ensure_same(p.ground())?;
        match self.generators.iter().find(|g| !g.preserves(p)) {
            Some(g) => Err(Error::InvalidGroup {
                element: g.to_string(),
                partition: p.to_string(),
            }),
            None => Ok(()),
        }
    }

    /// Orbits of the induced action on the atoms of a preserved partition,
    /// as sorted lists of atom indices ordered by their smallest atom.
    pub fn atom_orbits(&self, p: &Partition) -> Result<Vec<Vec<usize>>> {
        self.ensure_preserves(p)?;
        let k = p.num_atoms();
        let mut orbit_of: Vec<Option<usize>> = vec![None; k];
        let mut orbits = Vec::new();
        let atom_maps: Vec<Vec<usize>> = self.generators.iter().map(|g| g.atom_map(p)).collect();
        for start in 0..k {
            if orbit_of[start].is_some() {
                continue;
            }
            let id = orbits.len();
            let mut orbit = BTreeSet::from([start]);
            orbit_of[start] = Some(id);
            let mut stack = vec![start];
            while let Some(a) = stack.pop() {
                for m in &atom_maps {
                    let b = m[a];
                    if orbit_of[b].is_none() {
                        orbit_of[b] = Some(id);
                        orbit.insert(b);
                        stack.push(b);
                    }
                }
            }
            orbits.push(orbit.into_iter().collect());
        }
        Ok(orbits)
    }

    /// True iff the induced action on atoms has a single orbit.
    pub fn acts_transitively_on_atoms(&self, p: &Partition) -> Result<bool> {
        Ok(self.atom_orbits(p)?.len() == 1)
    }
}

/// Calls `f` on every permutation of `0..n` in lexicographic order.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        f(&perm);
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return;
        };
        let j = (i..n)
            .rev()
            .find(|&j| perm[j] > perm[i - 1])
            .expect("pivot exists");
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

/// `Aut(P)`: all permutations mapping atoms of `P` onto atoms of `P`.
///
/// Elements come from an exhaustive scan of the symmetric group, so `n` is
/// limited by the oracle bound. Generators are adjacent transpositions inside
/// each atom plus block swaps between consecutive atoms of equal size.
pub fn automorphism_group(p: &Partition) -> Result<PermGroup> {
    automorphism_group_bounded(p, DEFAULT_ORACLE_BOUND)
}

pub fn automorphism_group_bounded(p: &Partition, bound: usize) -> Result<PermGroup> {
    let n = p.n();
    if n > bound {
        return Err(Error::OracleBoundExceeded { n, bound });
    }
    let ground = p.ground();
    let mut elements = Vec::new();
    for_each_permutation(n, |perm| {
        let g = Permutation { map: perm.to_vec() };
        if g.preserves(p) {
            elements.push(g);
        }
    });
    Ok(PermGroup {
        ground,
        generators: structural_generators(p),
        elements,
    })
}

fn structural_generators(p: &Partition) -> Vec<Permutation> {
    let ground = p.ground();
    let mut gens = Vec::new();
    for atom in p.atoms() {
        for w in atom.windows(2) {
            gens.push(Permutation::transposition(ground, w[0], w[1]).expect("distinct elements"));
        }
    }
    let atoms = p.atoms();
    for (i, a) in atoms.iter().enumerate() {
        if let Some(b) = atoms[i + 1..].iter().find(|b| b.len() == a.len()) {
            let mut map: Vec<usize> = ground.elements().collect();
            for (&x, &y) in a.iter().zip(b.iter()) {
                map[x] = y;
                map[y] = x;
            }
            gens.push(Permutation { map });
        }
    }
    gens
}
