use std::fmt;

use crate::error::{Error, Result};
use crate::measure::ProbMeasure;
use crate::partition::{format_block, is_refinement, Partition, RestrictedGrowth};
use crate::rational::Rational;
use crate::relation::commutes;

/// One step subdividing exactly one atom of `source` into two or more parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomicRefinement {
    label: String,
    source: Partition,
    target: Partition,
    split_atom: usize,
    parts: Vec<Vec<usize>>,
}

impl AtomicRefinement {
    /// Validates that `parts` partition atom `split_atom` of `source` into
    /// at least two nonempty blocks. Parts are stored sorted by their
    /// minimum element and the label is the canonical one.
    pub fn new(source: &Partition, split_atom: usize, parts: &[Vec<usize>]) -> Result<Self> {
        if split_atom >= source.num_atoms() {
            return Err(Error::InvalidRefinement(format!(
                "{source} has no atom with index {split_atom}"
            )));
        }
        let atom = source.atom(split_atom);
        if parts.len() < 2 {
            return Err(Error::InvalidRefinement(format!(
                "atom {} must be split into at least two parts",
                format_block(atom)
            )));
        }
        let mut sorted: Vec<Vec<usize>> = parts
            .iter()
            .map(|p| {
                let mut p = p.clone();
                p.sort_unstable();
                p
            })
            .collect();
        if sorted.iter().any(Vec::is_empty) {
            return Err(Error::InvalidRefinement("empty part".into()));
        }
        sorted.sort();
        let mut covered: Vec<usize> = sorted.iter().flatten().copied().collect();
        covered.sort_unstable();
        if covered != atom {
            return Err(Error::InvalidRefinement(format!(
                "parts {} do not partition atom {}",
                sorted
                    .iter()
                    .map(|p| format_block(p))
                    .collect::<Vec<_>>()
                    .join("|"),
                format_block(atom)
            )));
        }
        let target = source.split_atom(&sorted);
        let label = canonical_label(atom, &sorted);
        Ok(AtomicRefinement {
            label,
            source: source.clone(),
            target,
            split_atom,
            parts: sorted,
        })
    }

    /// Locates the atom by its elements instead of its index.
    pub fn splitting(source: &Partition, atom: &[usize], parts: &[Vec<usize>]) -> Result<Self> {
        let mut block = atom.to_vec();
        block.sort_unstable();
        let index = source.find_atom(&block).ok_or_else(|| {
            Error::InvalidRefinement(format!(
                "{} is not an atom of {source}",
                format_block(&block)
            ))
        })?;
        Self::new(source, index, parts)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn source(&self) -> &Partition {
        &self.source
    }

    pub fn target(&self) -> &Partition {
        &self.target
    }

    pub fn split_atom(&self) -> usize {
        self.split_atom
    }

    /// Elements of the subdivided atom.
    pub fn atom(&self) -> &[usize] {
        self.source.atom(self.split_atom)
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn is_binary(&self) -> bool {
        self.parts.len() == 2
    }

    /// The same subdivision, ignoring labels.
    pub fn same_step(&self, other: &AtomicRefinement) -> bool {
        self.source == other.source && self.target == other.target
    }

    pub fn is_applicable(&self, p: &Partition) -> bool {
        p.ground() == self.source.ground() && p.find_atom(self.atom()).is_some()
    }

    /// Applies the subdivision to any partition that has the split atom
    /// among its atoms.
    pub fn apply(&self, p: &Partition) -> Result<Partition> {
        if !self.is_applicable(p) {
            return Err(Error::NotApplicable(format!(
                "{} is not an atom of {p}",
                format_block(self.atom())
            )));
        }
        Ok(p.split_atom(&self.parts))
    }
}

impl fmt::Display for AtomicRefinement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// `split{1,2,3,4}->{1,2}|{3,4}`
fn canonical_label(atom: &[usize], parts: &[Vec<usize>]) -> String {
    let parts: Vec<String> = parts.iter().map(|p| format_block(p)).collect();
    format!("split{}->{}", format_block(atom), parts.join("|"))
}

/// Every atomic refinement of `p`: for each atom of size at least two, one
/// step per set partition of the atom into two or more blocks. Atoms are
/// visited in canonical order and subdivisions in restricted growth order.
pub fn enumerate_atomic_refinements(p: &Partition) -> impl Iterator<Item = AtomicRefinement> + '_ {
    (0..p.num_atoms())
        .filter(move |&a| p.atom(a).len() >= 2)
        .flat_map(move |a| {
            let atom = p.atom(a);
            RestrictedGrowth::new(atom.len())
                .filter(|rgs| rgs.iter().any(|&b| b > 0))
                .map(move |rgs| {
                    let blocks = rgs.iter().max().map_or(0, |m| m + 1);
                    let mut parts = vec![Vec::new(); blocks];
                    for (&x, &b) in atom.iter().zip(&rgs) {
                        parts[b].push(x);
                    }
                    AtomicRefinement::new(p, a, &parts).expect("restricted growth split is valid")
                })
        })
}

/// A sequence of atomic steps with the partitions they pass through.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementChain {
    steps: Vec<AtomicRefinement>,
    algebras: Vec<Partition>,
}

impl RefinementChain {
    pub fn empty(start: Partition) -> Self {
        RefinementChain {
            steps: Vec::new(),
            algebras: vec![start],
        }
    }

    /// Checks that each step starts where the previous one ended.
    pub fn new(start: Partition, steps: Vec<AtomicRefinement>) -> Result<Self> {
        let mut chain = RefinementChain::empty(start);
        for step in steps {
            chain.push(step)?;
        }
        Ok(chain)
    }

    pub fn push(&mut self, step: AtomicRefinement) -> Result<()> {
        if step.source() != self.end() {
            return Err(Error::SourceMismatch);
        }
        self.algebras.push(step.target().clone());
        self.steps.push(step);
        Ok(())
    }

    pub fn steps(&self) -> &[AtomicRefinement] {
        &self.steps
    }

    /// `F_0 ⪯ F_1 ⪯ … ⪯ F_n`, one more entry than there are steps.
    pub fn algebras(&self) -> &[Partition] {
        &self.algebras
    }

    pub fn start(&self) -> &Partition {
        &self.algebras[0]
    }

    pub fn end(&self) -> &Partition {
        self.algebras.last().expect("chain has a start")
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.steps.iter().map(|s| s.label().to_string()).collect()
    }
}

/// Splits `coarse` down to `fine` one binary step at a time. Each step
/// takes the lowest-index atom that `fine` still subdivides and separates
/// the fine block holding its minimum element from the rest of the atom.
pub fn decompose(coarse: &Partition, fine: &Partition) -> Result<RefinementChain> {
    if is_refinement(coarse, fine)?.is_none() {
        return Err(Error::NotARefinement {
            coarse: coarse.to_string(),
            fine: fine.to_string(),
        });
    }
    let mut chain = RefinementChain::empty(coarse.clone());
    loop {
        let current = chain.end().clone();
        let divisible = (0..current.num_atoms()).find(|&a| {
            let atom = current.atom(a);
            atom.iter()
                .any(|&x| fine.atom_of(x) != fine.atom_of(atom[0]))
        });
        let Some(a) = divisible else {
            break;
        };
        let atom = current.atom(a);
        let head = fine.atom_of(atom[0]);
        let (first, rest): (Vec<usize>, Vec<usize>) =
            atom.iter().partition(|&&x| fine.atom_of(x) == head);
        chain.push(AtomicRefinement::new(&current, a, &[first, rest])?)?;
    }
    debug_assert_eq!(chain.end(), fine);
    Ok(chain)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Separation {
    /// The targets commute and can be realised jointly.
    Spacelike,
    Timelike,
}

/// Spacelike iff the two targets commute. Both steps must start from the
/// same partition.
pub fn classify(a: &AtomicRefinement, b: &AtomicRefinement) -> Result<Separation> {
    if a.source() != b.source() {
        return Err(Error::SourceMismatch);
    }
    Ok(if commutes(a.target(), b.target()) {
        Separation::Spacelike
    } else {
        Separation::Timelike
    })
}

/// Whether the two operators commute on a partition where both apply,
/// which is `a`'s source if possible and otherwise `b`'s. They commute
/// exactly when they split different atoms.
pub fn operators_commute(a: &AtomicRefinement, b: &AtomicRefinement) -> Result<bool> {
    let common = [a.source(), b.source()]
        .into_iter()
        .find(|p| a.is_applicable(p) && b.is_applicable(p))
        .ok_or_else(|| {
            Error::NotApplicable(format!(
                "{a} and {b} are not both applicable to a common source"
            ))
        })?;
    if a.atom() == b.atom() {
        return Ok(false);
    }
    let ab = b.apply(&a.apply(common)?)?;
    let ba = a.apply(&b.apply(common)?)?;
    assert_eq!(ab, ba, "disjoint splits must commute");
    Ok(true)
}

/// Pushes `mu` along the chain. `conditionals[i]` gives the probabilities
/// of the parts of step `i` given its split atom, in part order.
pub fn extend_along(
    mu: &ProbMeasure,
    chain: &RefinementChain,
    conditionals: &[Vec<Rational>],
) -> Result<ProbMeasure> {
    if mu.base() != chain.start() {
        return Err(Error::SourceMismatch);
    }
    if conditionals.len() != chain.len() {
        return Err(Error::Shape(format!(
            "{} steps but {} conditional weight vectors",
            chain.len(),
            conditionals.len()
        )));
    }
    let mut current = mu.clone();
    for (step, cond) in chain.steps().iter().zip(conditionals) {
        current = current.extend_with_weights(step.target(), std::slice::from_ref(cond))?;
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::GroundSet;
    use crate::rational::rat;

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    fn part(blocks: &[&[usize]]) -> Partition {
        Partition::from_blocks(g(4), blocks).unwrap()
    }

    fn pa() -> Partition {
        part(&[&[0, 1], &[2, 3]])
    }
    fn pb() -> Partition {
        part(&[&[0, 2], &[1, 3]])
    }
    fn pb_prime() -> Partition {
        part(&[&[0, 2, 3], &[1]])
    }

    fn step_to(target: &Partition) -> AtomicRefinement {
        let t = Partition::trivial(g(4));
        AtomicRefinement::new(&t, 0, target.atoms()).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(
            enumerate_atomic_refinements(&Partition::discrete(g(4))).count(),
            0
        );
        assert_eq!(
            enumerate_atomic_refinements(&Partition::trivial(g(4))).count(),
            14
        );
        let steps: Vec<_> = enumerate_atomic_refinements(&pa()).collect();
        assert_eq!(steps.len(), 2);
        assert_eq!(steps[0].label(), "split{1,2}->{1}|{2}");
        assert_eq!(steps[1].label(), "split{3,4}->{3}|{4}");
    }

    #[test]
    fn canonical_label_and_target() {
        let r = step_to(&pa());
        assert_eq!(r.label(), "split{1,2,3,4}->{1,2}|{3,4}");
        assert_eq!(r.target(), &pa());
        assert!(r.is_binary());
        let r =
            AtomicRefinement::new(&Partition::trivial(g(4)), 0, &[vec![3, 2], vec![1, 0]]).unwrap();
        assert_eq!(r.parts(), &[vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn invalid_subdivisions_rejected() {
        let t = Partition::trivial(g(4));
        for parts in [
            vec![vec![0, 1, 2, 3]],
            vec![vec![0, 1], vec![2]],
            vec![vec![0, 1], vec![1, 2, 3]],
            vec![vec![0, 1], vec![], vec![2, 3]],
        ] {
            assert!(matches!(
                AtomicRefinement::new(&t, 0, &parts),
                Err(Error::InvalidRefinement(_))
            ));
        }
        assert!(AtomicRefinement::new(&t, 1, &[vec![0], vec![1, 2, 3]]).is_err());
    }

    #[test]
    fn decompose_examples() {
        let t = Partition::trivial(g(4));
        let c = decompose(&t, &pa()).unwrap();
        assert_eq!(c.len(), 1);
        let c = decompose(&pa(), &Partition::discrete(g(4))).unwrap();
        assert_eq!(
            c.labels(),
            vec!["split{1,2}->{1}|{2}", "split{3,4}->{3}|{4}"]
        );
        assert!(decompose(&pa(), &pa()).unwrap().is_empty());
        assert!(matches!(
            decompose(&pa(), &pb()),
            Err(Error::NotARefinement { .. })
        ));
        let c = decompose(&t, &Partition::discrete(g(4))).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.steps()[0].parts(), &[vec![0], vec![1, 2, 3]]);
    }

    #[test]
    fn classify_examples() {
        let (a, b, b2) = (step_to(&pa()), step_to(&pb()), step_to(&pb_prime()));
        assert_eq!(classify(&a, &b).unwrap(), Separation::Spacelike);
        assert_eq!(classify(&a, &b2).unwrap(), Separation::Timelike);
        assert_eq!(classify(&b2, &a).unwrap(), Separation::Timelike);
        assert_eq!(classify(&a, &a).unwrap(), Separation::Spacelike);
        let other = enumerate_atomic_refinements(&pa()).next().unwrap();
        assert!(matches!(classify(&a, &other), Err(Error::SourceMismatch)));
    }

    #[test]
    fn operator_commutation() {
        let steps: Vec<_> = enumerate_atomic_refinements(&pa()).collect();
        assert!(operators_commute(&steps[0], &steps[1]).unwrap());
        assert_eq!(
            steps[1].apply(&steps[0].apply(&pa()).unwrap()).unwrap(),
            Partition::discrete(g(4))
        );
        let a = step_to(&pa());
        let b = step_to(&pb());
        assert!(!operators_commute(&a, &b).unwrap());
        assert!(matches!(
            operators_commute(&a, &steps[0]),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn extension_along_chains() {
        let t = Partition::trivial(g(4));
        let mu = ProbMeasure::uniform(t.clone());
        let chain = decompose(&t, &pa()).unwrap();
        let nu = extend_along(&mu, &chain, &[vec![rat(1, 3), rat(2, 3)]]).unwrap();
        assert_eq!(nu.weights(), &[rat(1, 3), rat(2, 3)]);
        assert!(matches!(
            extend_along(&mu, &chain, &[]),
            Err(Error::Shape(_))
        ));
    }
}
