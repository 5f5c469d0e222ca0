mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sigma_refine::measure::{
    automorphism_group, group_average, invariant_measures, is_invariant, pushforward, PermGroup,
    Permutation, ProbMeasure,
};
use sigma_refine::partition::{enumerate_partitions, is_refinement};
use sigma_refine::rational::{int, one, rat, sum};
use sigma_refine::{Partition, Rational};

fn random_measure(p: &Partition, rng: &mut impl Rng) -> ProbMeasure {
    let raw: Vec<i64> = (0..p.num_atoms()).map(|_| rng.gen_range(0..20)).collect();
    let total: i64 = raw.iter().sum();
    let weights = if total == 0 {
        vec![rat(1, p.num_atoms() as i64); p.num_atoms()]
    } else {
        raw.iter().map(|&w| rat(w, total)).collect()
    };
    ProbMeasure::new(p.clone(), weights).unwrap()
}

fn random_subgroup(aut: &PermGroup, rng: &mut impl Rng) -> PermGroup {
    let k = rng.gen_range(1..=2);
    let gens: Vec<Permutation> = (0..k)
        .map(|_| aut.elements()[rng.gen_range(0..aut.order())].clone())
        .collect();
    PermGroup::from_generators(aut.ground(), gens).unwrap()
}

/// Orbits of atoms under the generators, by repeated relabelling.
fn orbit_oracle(p: &Partition, gens: &[Permutation]) -> Vec<usize> {
    let mut orbit: Vec<usize> = (0..p.num_atoms()).collect();
    loop {
        let mut changed = false;
        for g in gens {
            for a in 0..p.num_atoms() {
                let b = p.atom_of(g.apply(p.atom(a)[0]));
                let (ra, rb) = (orbit[a], orbit[b]);
                if ra != rb {
                    let (lo, hi) = (ra.min(rb), ra.max(rb));
                    for o in orbit.iter_mut() {
                        if *o == hi {
                            *o = lo;
                        }
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            return orbit;
        }
    }
}

#[test]
fn automorphism_orders_match_formula() {
    for n in 1..=5 {
        for p in enumerate_partitions(ground(n)).unwrap() {
            let aut = automorphism_group(&p).unwrap();
            assert_eq!(aut.order(), aut_order_oracle(&p), "{p}");
            assert!(aut.elements().iter().all(|g| g.preserves(&p)));
            let regenerated =
                PermGroup::from_generators(ground(n), aut.generators().to_vec()).unwrap();
            assert_eq!(regenerated.order(), aut.order());
        }
    }
}

#[test]
fn transitive_subgroups_have_a_single_invariant_measure() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=5 {
        let mut sampled = 0;
        let ps: Vec<Partition> = enumerate_partitions(ground(n)).unwrap().collect();
        let per_partition = 60usize.div_ceil(ps.len());
        for p in ps {
            let aut = automorphism_group(&p).unwrap();
            for _ in 0..per_partition {
                let h = random_subgroup(&aut, &mut rng);
                sampled += 1;
                let oracle = orbit_oracle(&p, h.generators());
                let orbits = h.atom_orbits(&p).unwrap();
                let distinct: std::collections::BTreeSet<_> = oracle.iter().collect();
                assert_eq!(orbits.len(), distinct.len());
                for orbit in &orbits {
                    assert!(orbit.iter().all(|&a| oracle[a] == oracle[orbit[0]]));
                }
                let polytope = invariant_measures(&p, &h).unwrap();
                if distinct.len() == 1 {
                    assert_eq!(polytope.dimension, 0);
                    assert_eq!(polytope.representative, ProbMeasure::uniform(p.clone()));
                    let k = p.num_atoms() as i64;
                    assert!(polytope
                        .representative
                        .weights()
                        .iter()
                        .all(|w| *w == rat(1, k)));
                }
                for v in polytope.vertices() {
                    assert!(is_invariant(&v, &h).unwrap());
                }
            }
        }
        assert!(sampled >= 50);
    }
}

#[test]
fn averaging_yields_invariant_measures() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=4 {
        for p in enumerate_partitions(ground(n)).unwrap() {
            let aut = automorphism_group(&p).unwrap();
            let polytope = invariant_measures(&p, &aut).unwrap();
            for _ in 0..20 {
                let mu = random_measure(&p, &mut rng);
                let avg = group_average(&mu, &aut).unwrap();
                assert_eq!(sum(avg.weights()), one());
                for g in aut.elements() {
                    assert_eq!(pushforward(g, &avg).unwrap(), avg);
                }
                assert!(polytope.contains(&avg));
                // averaging fixes invariant measures
                assert_eq!(group_average(&avg, &aut).unwrap(), avg);
            }
        }
    }
}

#[test]
fn invariant_measures_are_orbit_constant() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for p in enumerate_partitions(ground(5)).unwrap() {
        let aut = automorphism_group(&p).unwrap();
        let h = random_subgroup(&aut, &mut rng);
        let polytope = invariant_measures(&p, &h).unwrap();
        for _ in 0..10 {
            let mu = random_measure(&p, &mut rng);
            let orbit_constant = polytope
                .orbits
                .iter()
                .all(|o| o.iter().all(|&a| mu.weight(a) == mu.weight(o[0])));
            assert_eq!(is_invariant(&mu, &h).unwrap(), orbit_constant);
        }
    }
}

fn partition_and_refinement() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    (1usize..=6).prop_flat_map(|n| {
        (
            proptest::collection::vec(0..n, n),
            proptest::collection::vec(0..n, n),
        )
    })
}

proptest! {
    #[test]
    fn restriction_undoes_extension(
        (coarse_labels, split_labels) in partition_and_refinement(),
        seed in any::<u64>(),
    ) {
        let n = coarse_labels.len();
        let coarse = Partition::from_labels(ground(n), &coarse_labels).unwrap();
        // the fine partition distinguishes both label vectors
        let pair: Vec<usize> = coarse_labels.iter().zip(&split_labels).map(|(a, b)| a * n + b).collect();
        let fine = Partition::from_labels(ground(n), &pair).unwrap();
        let witness = is_refinement(&coarse, &fine).unwrap().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mu = random_measure(&coarse, &mut rng);
        let split: Vec<Vec<Rational>> = (0..coarse.num_atoms())
            .map(|c| witness.parts_of(c).len())
            .filter(|&k| k > 1)
            .map(|k| {
                let raw: Vec<i64> = (0..k).map(|_| rng.gen_range(1..9)).collect();
                let t: i64 = raw.iter().sum();
                raw.iter().map(|&r| rat(r, t)).collect()
            })
            .collect();
        let nu = mu.extend_with_weights(&fine, &split).unwrap();
        prop_assert_eq!(sum(nu.weights()), one());
        prop_assert_eq!(nu.restrict(&coarse).unwrap(), mu);
    }

    #[test]
    fn pushforward_composes(labels in (1usize..=6).prop_flat_map(|n| proptest::collection::vec(0..n, n)), seed in any::<u64>()) {
        let n = labels.len();
        let p = Partition::from_labels(ground(n), &labels).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mu = random_measure(&p, &mut rng);
        let perm = |rng: &mut ChaCha8Rng| {
            let mut map: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                map.swap(i, rng.gen_range(0..=i));
            }
            Permutation::new(ground(n), map).unwrap()
        };
        let (g, h) = (perm(&mut rng), perm(&mut rng));
        let lhs = pushforward(&g.compose(&h), &mu).unwrap();
        let rhs = pushforward(&g, &pushforward(&h, &mu).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let back = pushforward(&g.inverse(), &pushforward(&g, &mu).unwrap()).unwrap();
        prop_assert_eq!(back, mu.clone());
        // mass of each atom travels with it
        let pushed = pushforward(&g, &mu).unwrap();
        for a in 0..p.num_atoms() {
            let image = g.image(p.atom(a));
            let b = pushed.base().find_atom(&image).unwrap();
            prop_assert_eq!(pushed.weight(b), mu.weight(a));
        }
        prop_assert_eq!(sum(pushed.weights()), int(1));
    }
}
