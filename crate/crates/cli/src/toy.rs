//! Replay of the four-element toy universe.

use std::fmt::Write;

use sigma_refine::dynamics::{classify, decompose, Separation};
use sigma_refine::endogenous::{build_domain, check_uniqueness_up_to_symmetry, solve_endogenous};
use sigma_refine::measure::{PermGroup, Permutation, ProbMeasure};
use sigma_refine::partition::{format_block, join};
use sigma_refine::rational::{display_rational, one, rat};
use sigma_refine::relation::{commute, CommuteVerdict};
use sigma_refine::{GroundSet, Partition, Result};

pub fn toy_partitions() -> (Partition, Partition, Partition, Partition) {
    let g = GroundSet::new(4).expect("nonempty");
    let p = |blocks: &[&[usize]]| Partition::from_blocks(g, blocks).expect("valid toy partition");
    (
        Partition::trivial(g),
        p(&[&[0, 1], &[2, 3]]),
        p(&[&[0, 2], &[1, 3]]),
        p(&[&[0, 2, 3], &[1]]),
    )
}

fn intersections(a: &Partition, b: &Partition) -> Vec<String> {
    let mut out = Vec::new();
    for x in a.atoms() {
        for y in b.atoms() {
            let common: Vec<usize> = x.iter().copied().filter(|e| y.contains(e)).collect();
            let shown = if common.is_empty() {
                "∅".to_string()
            } else {
                format_block(&common)
            };
            out.push(format!(
                "{} ∩ {} = {}",
                format_block(x),
                format_block(y),
                shown
            ));
        }
    }
    out
}

fn verdict(v: &CommuteVerdict) -> String {
    match v {
        CommuteVerdict::Commuting => "commuting".into(),
        CommuteVerdict::NonCommuting {
            witness: (x, z), ..
        } => {
            format!("non-commuting, witness ({},{})", x + 1, z + 1)
        }
    }
}

/// The transcript printed by `sigma toy`.
pub fn transcript() -> Result<String> {
    let (t, pa, pb, pb2) = toy_partitions();
    let d = Partition::discrete(t.ground());
    let mut out = String::new();
    let w = &mut out;

    writeln!(w, "toy universe: Ω = {{1,2,3,4}}").unwrap();
    writeln!(w).unwrap();
    writeln!(w, "[initial state]").unwrap();
    writeln!(w, "F0 = {t}, μ0 = {}", ProbMeasure::uniform(t.clone())).unwrap();
    writeln!(w).unwrap();

    writeln!(w, "[first distinction A]").unwrap();
    writeln!(w, "P_A = {pa}").unwrap();
    writeln!(w, "μ_A = (p, 1-p); instances:").unwrap();
    for p in [rat(0, 1), rat(1, 3), rat(1, 2), rat(1, 1)] {
        let mu = ProbMeasure::uniform(t.clone())
            .extend_with_weights(&pa, &[vec![p.clone(), one() - &p]])?;
        writeln!(w, "  p = {}: μ_A = {mu}", display_rational(&p)).unwrap();
    }
    writeln!(w).unwrap();

    writeln!(w, "[commuting second distinction B]").unwrap();
    writeln!(w, "P_B = {pb}").unwrap();
    writeln!(w, "commute(P_A, P_B): {}", verdict(&commute(&pa, &pb)?)).unwrap();
    writeln!(w, "join(P_A, P_B) = {}", join(&pa, &pb)?).unwrap();
    for line in intersections(&pa, &pb) {
        writeln!(w, "  {line}").unwrap();
    }
    writeln!(w, "extensions to F_AB with p1+p2 = p, p3+p4 = 1-p:").unwrap();
    for p in [rat(0, 1), rat(1, 3), rat(1, 1)] {
        let mu_a = ProbMeasure::new(pa.clone(), vec![p.clone(), one() - &p])?;
        let q = rat(1, 4);
        let fine = mu_a.extend_with_weights(&d, &vec![vec![q.clone(), one() - &q]; 2])?;
        let back = fine.restrict(&pa)?;
        writeln!(
            w,
            "  p = {}: μ_AB = {fine}, p1+p2 = {}, p3+p4 = {}",
            display_rational(&p),
            display_rational(&back.weights()[0]),
            display_rational(&back.weights()[1])
        )
        .unwrap();
    }
    writeln!(w).unwrap();

    writeln!(w, "[non-commuting second distinction B′]").unwrap();
    writeln!(w, "P_B′ = {pb2}").unwrap();
    writeln!(w, "commute(P_A, P_B′): {}", verdict(&commute(&pa, &pb2)?)).unwrap();
    for line in intersections(&pa, &pb2) {
        writeln!(w, "  {line}").unwrap();
    }
    writeln!(w, "join(P_A, P_B′) = {}", join(&pa, &pb2)?).unwrap();
    writeln!(w).unwrap();

    writeln!(w, "[endogenous pairs on {{F0, P_A, P_B}}]").unwrap();
    let domain = build_domain(&[pa.clone(), pb.clone()])?;
    let pairs = solve_endogenous(&domain)?;
    for pair in &pairs {
        let degenerate: Vec<String> = pair
            .certificate
            .coarsenings
            .iter()
            .map(|c| {
                format!(
                    "{} ↦ {} degenerate={}",
                    c.coarsening, c.restricted, c.degenerate
                )
            })
            .collect();
        writeln!(
            w,
            "  {} with μ = {}; {}",
            pair.algebra,
            pair.measure,
            degenerate.join("; ")
        )
        .unwrap();
    }
    let swap = Permutation::transposition(t.ground(), 1, 2)?;
    let group = PermGroup::from_generators(t.ground(), vec![swap.clone()])?;
    let unique = check_uniqueness_up_to_symmetry(&pairs, &group, &domain)?.is_unique();
    writeln!(
        w,
        "  uniqueness under ⟨{swap}⟩: {}",
        if unique {
            "unique up to symmetry"
        } else {
            "not established"
        }
    )
    .unwrap();
    writeln!(w).unwrap();

    writeln!(w, "[summary]").unwrap();
    writeln!(w, "{:<18} {:<10} {}", "pair", "relation", "joint atoms").unwrap();
    let a = decompose(&t, &pa)?.steps()[0].clone();
    for (name, other) in [("A, B", &pb), ("A, B′", &pb2)] {
        let b = decompose(&t, other)?.steps()[0].clone();
        let relation = match classify(&a, &b)? {
            Separation::Spacelike => "spacelike",
            Separation::Timelike => "timelike",
        };
        writeln!(w, "{:<18} {:<10} {}", name, relation, join(&pa, other)?).unwrap();
    }
    let stages = [("F0", &t), ("F_A", &pa), ("F_B", &pb), ("F_AB", &d)];
    let mut covers = Vec::new();
    for (lo, p) in &stages {
        for (hi, q) in &stages {
            let between = stages
                .iter()
                .any(|(_, m)| m.strictly_refines(p) && q.strictly_refines(m));
            if q.strictly_refines(p) && !between {
                covers.push(format!("{lo} ≺ {hi}"));
            }
        }
    }
    writeln!(w, "refinement order: {}", covers.join(", ")).unwrap();
    Ok(out)
}
