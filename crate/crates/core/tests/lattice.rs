mod common;

use common::*;
use proptest::prelude::*;
use sigma_refine::partition::{coarsenings, enumerate_partitions, is_refinement, join, meet};
use sigma_refine::Partition;

fn all(n: usize) -> Vec<Partition> {
    enumerate_partitions(ground(n)).unwrap().collect()
}

#[test]
fn counts_match_bell_triangle() {
    let bells = bell_triangle(6);
    assert_eq!(&bells[1..], &[1, 2, 5, 15, 52, 203]);
    for n in 1..=6 {
        assert_eq!(all(n).len() as u64, bells[n]);
    }
}

#[test]
fn enumeration_matches_brute_force_and_is_sorted() {
    for n in 1..=6 {
        let ours = all(n);
        assert!(ours.windows(2).all(|w| w[0] < w[1]));
        let mut from_ours: Vec<Blocks> = ours.iter().map(blocks_of).collect();
        let mut brute = brute_partitions(n);
        from_ours.sort();
        brute.sort();
        assert_eq!(from_ours, brute);
    }
}

#[test]
fn order_join_meet_agree_with_set_oracles() {
    for n in 1..=5 {
        let ps = all(n);
        for a in &ps {
            let ba = blocks_of(a);
            for b in &ps {
                let bb = blocks_of(b);
                assert_eq!(b.refines(a), refines_oracle(&bb, &ba));
                assert_eq!(is_refinement(a, b).unwrap().is_some(), b.refines(a));
                assert_eq!(blocks_of(&join(a, b).unwrap()), join_oracle(&ba, &bb));
                assert_eq!(blocks_of(&meet(a, b).unwrap()), meet_oracle(&ba, &bb));
            }
        }
    }
}

#[test]
fn lattice_laws() {
    for n in 1..=4 {
        let ps = all(n);
        let (bot, top) = (
            Partition::trivial(ground(n)),
            Partition::discrete(ground(n)),
        );
        for a in &ps {
            assert_eq!(join(a, a).unwrap(), *a);
            assert_eq!(meet(a, &bot).unwrap(), bot);
            assert_eq!(join(a, &top).unwrap(), top);
            for b in &ps {
                let j = join(a, b).unwrap();
                let m = meet(a, b).unwrap();
                assert_eq!(j, join(b, a).unwrap());
                assert_eq!(m, meet(b, a).unwrap());
                assert_eq!(join(a, &m).unwrap(), *a);
                assert_eq!(meet(a, &j).unwrap(), *a);
                assert!(j.refines(a) && j.refines(b));
                assert!(a.refines(&m) && b.refines(&m));
                for c in &ps {
                    assert_eq!(join(&j, c).unwrap(), join(a, &join(b, c).unwrap()).unwrap());
                    assert_eq!(meet(&m, c).unwrap(), meet(a, &meet(b, c).unwrap()).unwrap());
                }
            }
        }
    }
}

#[test]
fn coarsenings_are_exactly_the_coarser_partitions() {
    for n in 1..=5 {
        let ps = all(n);
        for p in &ps {
            let mut ours: Vec<Partition> = coarsenings(p).collect();
            ours.sort();
            let expected: Vec<Partition> = ps.iter().filter(|q| p.refines(q)).cloned().collect();
            assert_eq!(ours, expected);
        }
    }
}

fn labels(max_n: usize) -> impl Strategy<Value = Vec<usize>> {
    (1..=max_n).prop_flat_map(|n| proptest::collection::vec(0..n, n))
}

proptest! {
    #[test]
    fn canonical_form_is_label_independent(labels in labels(8), shift in 1usize..5) {
        let n = labels.len();
        let p = Partition::from_labels(ground(n), &labels).unwrap();
        let relabelled: Vec<usize> = labels.iter().map(|l| l * 7 + shift).collect();
        let q = Partition::from_labels(ground(n), &relabelled).unwrap();
        prop_assert_eq!(&p, &q);
        prop_assert_eq!(p.labels()[0], 0);
        for (i, atom) in p.atoms().iter().enumerate() {
            prop_assert!(atom.windows(2).all(|w| w[0] < w[1]));
            if i > 0 {
                prop_assert!(p.atoms()[i - 1][0] < atom[0]);
            }
        }
        let back = Partition::from_blocks(ground(n), p.atoms()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn join_meet_bound_random_pairs(a in labels(8), b_seed in proptest::collection::vec(0usize..8, 8)) {
        let n = a.len();
        let b: Vec<usize> = b_seed[..n].iter().map(|x| x % n).collect();
        let pa = Partition::from_labels(ground(n), &a).unwrap();
        let pb = Partition::from_labels(ground(n), &b).unwrap();
        let (ba, bb) = (blocks_of(&pa), blocks_of(&pb));
        prop_assert_eq!(blocks_of(&join(&pa, &pb).unwrap()), join_oracle(&ba, &bb));
        prop_assert_eq!(blocks_of(&meet(&pa, &pb).unwrap()), meet_oracle(&ba, &bb));
    }
}
