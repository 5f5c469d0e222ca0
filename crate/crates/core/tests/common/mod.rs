#![allow(dead_code)]

use std::collections::BTreeSet;

use sigma_refine::{GroundSet, Partition};

pub type Blocks = BTreeSet<BTreeSet<usize>>;

pub fn ground(n: usize) -> GroundSet {
    GroundSet::new(n).unwrap()
}

/// All set partitions of `0..n`, built by inserting each element into an
/// existing block or a new one.
pub fn brute_partitions(n: usize) -> Vec<Blocks> {
    let mut acc: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for x in 0..n {
        let mut next = Vec::new();
        for p in &acc {
            for i in 0..p.len() {
                let mut q = p.clone();
                q[i].push(x);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![x]);
            next.push(q);
        }
        acc = next;
    }
    acc.into_iter()
        .map(|p| p.into_iter().map(|b| b.into_iter().collect()).collect())
        .collect()
}

/// Bell numbers from the Bell triangle.
pub fn bell_triangle(upto: usize) -> Vec<u64> {
    let mut bells = vec![1u64];
    let mut row = vec![1u64];
    for _ in 1..=upto {
        let mut next = vec![*row.last().unwrap()];
        for v in &row {
            let last = *next.last().unwrap();
            next.push(last + v);
        }
        bells.push(next[0]);
        row = next;
    }
    bells
}

pub fn blocks_of(p: &Partition) -> Blocks {
    p.atoms()
        .iter()
        .map(|a| a.iter().copied().collect())
        .collect()
}

pub fn to_partition(n: usize, blocks: &Blocks) -> Partition {
    let blocks: Vec<Vec<usize>> = blocks.iter().map(|b| b.iter().copied().collect()).collect();
    Partition::from_blocks(ground(n), &blocks).unwrap()
}

pub fn same_block(b: &Blocks, x: usize, y: usize) -> bool {
    b.iter().any(|blk| blk.contains(&x) && blk.contains(&y))
}

/// Every block of `fine` sits inside a block of `coarse`.
pub fn refines_oracle(fine: &Blocks, coarse: &Blocks) -> bool {
    fine.iter().all(|f| coarse.iter().any(|c| f.is_subset(c)))
}

/// Nonempty pairwise intersections.
pub fn join_oracle(a: &Blocks, b: &Blocks) -> Blocks {
    a.iter()
        .flat_map(|x| {
            b.iter()
                .map(move |y| x.intersection(y).copied().collect::<BTreeSet<_>>())
        })
        .filter(|s| !s.is_empty())
        .collect()
}

/// Merge overlapping blocks until nothing changes.
pub fn meet_oracle(a: &Blocks, b: &Blocks) -> Blocks {
    let mut blocks: Vec<BTreeSet<usize>> = a.iter().chain(b).cloned().collect();
    loop {
        let mut merged = false;
        'outer: for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                if !blocks[i].is_disjoint(&blocks[j]) {
                    let other = blocks.remove(j);
                    blocks[i].extend(other);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            return blocks.into_iter().collect();
        }
    }
}

/// The definition of commuting equivalence relations: for every (x, z),
/// some y with x~a y ~b z iff some y with x ~b y ~a z.
pub fn commute_oracle(n: usize, a: &Blocks, b: &Blocks) -> bool {
    (0..n).all(|x| {
        (0..n).all(|z| {
            let ab = (0..n).any(|y| same_block(a, x, y) && same_block(b, y, z));
            let ba = (0..n).any(|y| same_block(b, x, y) && same_block(a, y, z));
            ab == ba
        })
    })
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// `|Aut(P)| = Π_s m_s! (s!)^{m_s}` where `m_s` atoms have size `s`.
pub fn aut_order_oracle(p: &Partition) -> usize {
    let mut counts = std::collections::BTreeMap::new();
    for a in p.atoms() {
        *counts.entry(a.len()).or_insert(0usize) += 1;
    }
    counts
        .iter()
        .map(|(&s, &m)| factorial(m) * factorial(s).pow(m as u32))
        .product()
}
