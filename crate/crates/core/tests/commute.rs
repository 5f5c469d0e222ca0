mod common;

use common::*;
use sigma_refine::partition::{enumerate_partitions, join, meet};
use sigma_refine::relation::{commute, composition_is_equivalence, CommuteVerdict, WitnessSide};
use sigma_refine::Partition;

#[test]
fn commute_agrees_with_definition() {
    for n in 1..=4 {
        let ps: Vec<Partition> = enumerate_partitions(ground(n)).unwrap().collect();
        for a in &ps {
            for b in &ps {
                let expected = commute_oracle(n, &blocks_of(a), &blocks_of(b));
                let verdict = commute(a, b).unwrap();
                assert_eq!(verdict.is_commuting(), expected, "{a} {b}");
                assert_eq!(composition_is_equivalence(a, b).unwrap(), expected);
                assert_eq!(commute(b, a).unwrap().is_commuting(), expected);
            }
        }
    }
}

#[test]
fn witnesses_are_minimal_differing_pairs() {
    let n = 4;
    let ps: Vec<Partition> = enumerate_partitions(ground(n)).unwrap().collect();
    for a in &ps {
        for b in &ps {
            let (ba, bb) = (blocks_of(a), blocks_of(b));
            let differing = (0..n)
                .flat_map(|x| (0..n).map(move |z| (x, z)))
                .find(|&(x, z)| {
                    let ab = (0..n).any(|y| same_block(&ba, x, y) && same_block(&bb, y, z));
                    let ba_ = (0..n).any(|y| same_block(&bb, x, y) && same_block(&ba, y, z));
                    ab != ba_
                });
            match commute(a, b).unwrap() {
                CommuteVerdict::Commuting => assert!(differing.is_none()),
                CommuteVerdict::NonCommuting { witness, side } => {
                    assert_eq!(Some(witness), differing);
                    let (x, z) = witness;
                    // the witness lies in b∘a: x ~a y ~b z
                    let in_b_after_a =
                        (0..n).any(|y| same_block(&ba, x, y) && same_block(&bb, y, z));
                    assert_eq!(side == WitnessSide::BAfterA, in_b_after_a);
                }
            }
        }
    }
}

#[test]
fn commuting_pairs_compose_to_their_meet() {
    for n in 1..=4 {
        let ps: Vec<Partition> = enumerate_partitions(ground(n)).unwrap().collect();
        for a in &ps {
            for b in &ps {
                if commute(a, b).unwrap().is_commuting() {
                    let m = blocks_of(&meet(a, b).unwrap());
                    let (ba, bb) = (blocks_of(a), blocks_of(b));
                    for x in 0..n {
                        for z in 0..n {
                            let comp =
                                (0..n).any(|y| same_block(&ba, x, y) && same_block(&bb, y, z));
                            assert_eq!(comp, same_block(&m, x, z));
                        }
                    }
                    assert!(join(a, b).unwrap().refines(a));
                }
            }
        }
    }
}
