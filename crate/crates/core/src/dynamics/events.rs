use std::collections::{BTreeMap, BTreeSet};

use crate::dynamics::refinement::{AtomicRefinement, RefinementChain};
use crate::error::{Error, Result};
use crate::relation::commutes;

/// Precedence between labelled steps induced by a set of chains.
///
/// `a ≺ b` holds when at least one chain contains both and every chain
/// containing both places `a` first. Steps that never share a chain are
/// incomparable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventGraph {
    nodes: Vec<String>,
    precedes: BTreeSet<(usize, usize)>,
    covers: Vec<(usize, usize)>,
    chains: Vec<Vec<String>>,
}

impl EventGraph {
    /// Labels in sorted order.
    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn chains(&self) -> &[Vec<String>] {
        &self.chains
    }

    fn index(&self, label: &str) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.as_str().cmp(label)).ok()
    }

    pub fn precedes(&self, a: &str, b: &str) -> bool {
        match (self.index(a), self.index(b)) {
            (Some(i), Some(j)) => self.precedes.contains(&(i, j)),
            _ => false,
        }
    }

    pub fn incomparable(&self, a: &str, b: &str) -> bool {
        !self.precedes(a, b) && !self.precedes(b, a)
    }

    /// Every precedence pair, as label pairs.
    pub fn relation(&self) -> Vec<(&str, &str)> {
        self.precedes
            .iter()
            .map(|&(i, j)| (self.nodes[i].as_str(), self.nodes[j].as_str()))
            .collect()
    }

    /// The transitive reduction of the precedence relation.
    pub fn covers(&self) -> Vec<(&str, &str)> {
        self.covers
            .iter()
            .map(|&(i, j)| (self.nodes[i].as_str(), self.nodes[j].as_str()))
            .collect()
    }

    /// Whether `≺` is already transitively closed. Chains that share too
    /// few steps can leave comparabilities implied only through a middle
    /// step.
    pub fn is_transitive(&self) -> bool {
        self.precedes.iter().all(|&(i, j)| {
            self.precedes
                .range((j, 0)..(j + 1, 0))
                .all(|&(_, k)| self.precedes.contains(&(i, k)))
        })
    }
}

/// Builds the event graph of abstract label chains.
pub fn build_event_graph(chains: &[Vec<String>]) -> Result<EventGraph> {
    let nodes: Vec<String> = chains
        .iter()
        .flatten()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index = |label: &str| nodes.binary_search_by(|n| n.as_str().cmp(label)).unwrap();

    // (a, b) -> (chains placing a before b, chains placing b before a)
    let mut order: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    for chain in chains {
        let positions: Vec<usize> = chain.iter().map(|l| index(l)).collect();
        let distinct: BTreeSet<usize> = positions.iter().copied().collect();
        if distinct.len() != positions.len() {
            return Err(Error::LabelConflict(format!(
                "a label repeats within chain [{}]",
                chain.join(", ")
            )));
        }
        for (p, &a) in positions.iter().enumerate() {
            for &b in &positions[p + 1..] {
                let key = (a.min(b), a.max(b));
                let entry = order.entry(key).or_default();
                if a < b {
                    entry.0 += 1;
                } else {
                    entry.1 += 1;
                }
            }
        }
    }
    let precedes: BTreeSet<(usize, usize)> = order
        .into_iter()
        .filter_map(|((a, b), (fwd, back))| match (fwd, back) {
            (_, 0) => Some((a, b)),
            (0, _) => Some((b, a)),
            _ => None,
        })
        .collect();

    let topo = topological_order(nodes.len(), &precedes).ok_or_else(|| {
        Error::Cyclicity(format!(
            "precedence over [{}] contains a cycle",
            nodes.join(", ")
        ))
    })?;
    let covers = transitive_reduction(nodes.len(), &precedes, &topo);
    Ok(EventGraph {
        nodes,
        precedes,
        covers,
        chains: chains.to_vec(),
    })
}

/// Builds the event graph of concrete chains, checking that equal labels
/// denote the same step.
pub fn build_event_graph_from_chains(chains: &[RefinementChain]) -> Result<EventGraph> {
    let mut seen: BTreeMap<&str, &AtomicRefinement> = BTreeMap::new();
    for step in chains.iter().flat_map(RefinementChain::steps) {
        match seen.get(step.label()) {
            Some(prev) if !prev.same_step(step) => {
                return Err(Error::LabelConflict(format!(
                    "label {} names both {} -> {} and {} -> {}",
                    step.label(),
                    prev.source(),
                    prev.target(),
                    step.source(),
                    step.target()
                )));
            }
            Some(_) => {}
            None => {
                seen.insert(step.label(), step);
            }
        }
    }
    let labels: Vec<Vec<String>> = chains.iter().map(RefinementChain::labels).collect();
    build_event_graph(&labels)
}

fn topological_order(n: usize, edges: &BTreeSet<(usize, usize)>) -> Option<Vec<usize>> {
    let mut indegree = vec![0usize; n];
    for &(_, b) in edges {
        indegree[b] += 1;
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut out = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        out.push(v);
        for &(_, b) in edges.range((v, 0)..(v + 1, 0)) {
            indegree[b] -= 1;
            if indegree[b] == 0 {
                ready.insert(b);
            }
        }
    }
    (out.len() == n).then_some(out)
}

fn transitive_reduction(
    n: usize,
    edges: &BTreeSet<(usize, usize)>,
    topo: &[usize],
) -> Vec<(usize, usize)> {
    // reach[v] = vertices reachable from v by a path of length >= 1
    let mut reach = vec![BTreeSet::new(); n];
    for &v in topo.iter().rev() {
        let mut r = BTreeSet::new();
        for &(_, w) in edges.range((v, 0)..(v + 1, 0)) {
            r.insert(w);
            r.extend(reach[w].iter().copied());
        }
        reach[v] = r;
    }
    edges
        .iter()
        .copied()
        .filter(|&(a, b)| {
            !edges
                .range((a, 0)..(a + 1, 0))
                .any(|&(_, m)| m != b && reach[m].contains(&b))
        })
        .collect()
}

/// Every step of one history commutes with every step of the other.
pub fn histories_coherent(h1: &RefinementChain, h2: &RefinementChain) -> Result<bool> {
    h1.start().ground().ensure_same(h2.start().ground())?;
    Ok(h1
        .steps()
        .iter()
        .all(|a| h2.steps().iter().all(|b| commutes(a.target(), b.target()))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::refinement::decompose;
    use crate::partition::{GroundSet, Partition};

    fn chains(raw: &[&[&str]]) -> Vec<Vec<String>> {
        raw.iter()
            .map(|c| c.iter().map(|s| s.to_string()).collect())
            .collect()
    }

    #[test]
    fn diamond() {
        let g = build_event_graph(&chains(&[&["R1", "R2", "R4"], &["R1", "R3", "R4"]])).unwrap();
        assert_eq!(
            g.covers(),
            vec![("R1", "R2"), ("R1", "R3"), ("R2", "R4"), ("R3", "R4")]
        );
        assert!(g.precedes("R1", "R4"));
        assert!(g.incomparable("R2", "R3"));
        assert!(g.is_transitive());
    }

    #[test]
    fn single_and_disagreeing_chains() {
        let g = build_event_graph(&chains(&[&["R1", "R2"]])).unwrap();
        assert_eq!(g.covers(), vec![("R1", "R2")]);
        let g = build_event_graph(&chains(&[&["R1", "R2"], &["R2", "R1"]])).unwrap();
        assert!(g.covers().is_empty());
        assert!(g.incomparable("R1", "R2"));
    }

    #[test]
    fn cycles_and_repeats_surface() {
        let cyclic = chains(&[&["A", "B"], &["B", "C"], &["C", "A"]]);
        assert!(matches!(
            build_event_graph(&cyclic),
            Err(Error::Cyclicity(_))
        ));
        assert!(matches!(
            build_event_graph(&chains(&[&["A", "B", "A"]])),
            Err(Error::LabelConflict(_))
        ));
        let partial = build_event_graph(&chains(&[&["A", "B"], &["B", "C"]])).unwrap();
        assert!(!partial.is_transitive());
    }

    #[test]
    fn concrete_label_conflicts() {
        let g4 = GroundSet::new(4).unwrap();
        let t = Partition::trivial(g4);
        let pa = Partition::from_blocks(g4, &[[0, 1], [2, 3]]).unwrap();
        let pb = Partition::from_blocks(g4, &[[0, 2], [1, 3]]).unwrap();
        let mut a = decompose(&t, &pa).unwrap().steps()[0]
            .clone()
            .with_label("R1");
        let chain_a = RefinementChain::new(t.clone(), vec![a.clone()]).unwrap();
        a = decompose(&t, &pb).unwrap().steps()[0]
            .clone()
            .with_label("R1");
        let chain_b = RefinementChain::new(t.clone(), vec![a]).unwrap();
        assert!(matches!(
            build_event_graph_from_chains(&[chain_a.clone(), chain_b.clone()]),
            Err(Error::LabelConflict(_))
        ));
        assert!(build_event_graph_from_chains(&[chain_a.clone(), chain_a]).is_ok());
    }

    #[test]
    fn coherence_examples() {
        let g4 = GroundSet::new(4).unwrap();
        let t = Partition::trivial(g4);
        let pa = Partition::from_blocks(g4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let pb = Partition::from_blocks(g4, &[vec![0, 2], vec![1, 3]]).unwrap();
        let pb2 = Partition::from_blocks(g4, &[vec![0, 2, 3], vec![1]]).unwrap();
        let h = |p: &Partition| decompose(&t, p).unwrap();
        assert!(histories_coherent(&h(&pa), &h(&pb)).unwrap());
        assert!(!histories_coherent(&h(&pa), &h(&pb2)).unwrap());
        assert!(histories_coherent(&h(&pa), &h(&pa)).unwrap());
        let other = RefinementChain::empty(Partition::trivial(GroundSet::new(3).unwrap()));
        assert!(matches!(
            histories_coherent(&h(&pa), &other),
            Err(Error::GroundMismatch { .. })
        ));
    }
}
