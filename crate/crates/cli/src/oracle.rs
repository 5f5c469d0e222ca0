//! Exhaustive and seeded property suites checking the library against
//! brute-force computations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sigma_refine::dynamics::{decompose, enumerate_atomic_refinements, extend_along};
use sigma_refine::endogenous::{build_domain, check_self_consistent, solve_endogenous};
use sigma_refine::measure::{
    automorphism_group, group_average, invariant_measures, is_invariant, PermGroup, Permutation,
    ProbMeasure,
};
use sigma_refine::partition::{enumerate_partitions, join, meet, DEFAULT_ORACLE_BOUND};
use sigma_refine::rational::{one, rat};
use sigma_refine::relation::{commute, commutes, composition_is_equivalence};
use sigma_refine::{GroundSet, Partition};

/// Largest ground set the endogenous suite enumerates domains for.
const ENDOGENOUS_MAX_N: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Bell,
    Lattice,
    Commute,
    Aut,
    Averaging,
    Transitive,
    Refinements,
    Decompose,
    Endogenous,
    Extension,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Bell,
        Suite::Lattice,
        Suite::Commute,
        Suite::Aut,
        Suite::Averaging,
        Suite::Transitive,
        Suite::Refinements,
        Suite::Decompose,
        Suite::Endogenous,
        Suite::Extension,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Bell => "bell",
            Suite::Lattice => "lattice",
            Suite::Commute => "commute",
            Suite::Aut => "aut",
            Suite::Averaging => "averaging",
            Suite::Transitive => "transitive",
            Suite::Refinements => "refinements",
            Suite::Decompose => "decompose",
            Suite::Endogenous => "endogenous",
            Suite::Extension => "extension",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                format!("unknown suite {s:?}; expected one of {}", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_n: usize,
    pub suites: Vec<Suite>,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_n: 5,
            suites: Suite::ALL.to_vec(),
            seed: 0,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.max_n == 0 || self.max_n > DEFAULT_ORACLE_BOUND {
            return Err(format!(
                "max_n must be between 1 and {DEFAULT_ORACLE_BOUND}, got {}",
                self.max_n
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checked: usize,
    pub failed: usize,
    /// The first few failures, for diagnosis.
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport {
            suite,
            checked: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < 5 {
                self.failures.push(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

/// Runs the configured suites in the order given. Each suite seeds its own
/// generator from the config seed, so reports do not depend on which other
/// suites run.
pub fn run_oracle(config: &OracleConfig) -> Vec<SuiteReport> {
    config
        .suites
        .iter()
        .map(|&suite| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ (suite as u64 + 1) * 0x9e37_79b9);
            let mut r = SuiteReport::new(suite);
            match suite {
                Suite::Bell => bell(config.max_n, &mut r),
                Suite::Lattice => lattice(config.max_n, &mut r),
                Suite::Commute => commute_suite(config.max_n, &mut r),
                Suite::Aut => aut(config.max_n, &mut r),
                Suite::Averaging => averaging(config.max_n, &mut rng, &mut r),
                Suite::Transitive => transitive(config.max_n, &mut rng, &mut r),
                Suite::Refinements => refinements(config.max_n, &mut r),
                Suite::Decompose => decompose_suite(config.max_n, &mut r),
                Suite::Endogenous => endogenous(config.max_n.min(ENDOGENOUS_MAX_N), &mut r),
                Suite::Extension => extension(&mut rng, &mut r),
            }
            r
        })
        .collect()
}

type Blocks = BTreeSet<BTreeSet<usize>>;

fn ground(n: usize) -> GroundSet {
    GroundSet::new(n).expect("n >= 1")
}

fn all(n: usize) -> Vec<Partition> {
    enumerate_partitions(ground(n))
        .expect("n within bound")
        .collect()
}

fn blocks(p: &Partition) -> Blocks {
    p.atoms()
        .iter()
        .map(|a| a.iter().copied().collect())
        .collect()
}

fn related(b: &Blocks, x: usize, y: usize) -> bool {
    b.iter().any(|blk| blk.contains(&x) && blk.contains(&y))
}

pub fn bell_numbers(upto: usize) -> Vec<u64> {
    let mut bells = vec![1u64];
    let mut row = vec![1u64];
    for _ in 1..=upto {
        let mut next = vec![*row.last().expect("nonempty")];
        for v in &row {
            let last = *next.last().expect("nonempty");
            next.push(last + v);
        }
        bells.push(next[0]);
        row = next;
    }
    bells
}

fn bell(max_n: usize, r: &mut SuiteReport) {
    let bells = bell_numbers(max_n);
    for n in 1..=max_n {
        let count = all(n).len() as u64;
        r.check(count == bells[n], || {
            format!("n={n}: {count} partitions, Bell {}", bells[n])
        });
    }
}

fn lattice(max_n: usize, r: &mut SuiteReport) {
    for n in 1..=max_n {
        let ps = all(n);
        let bs: Vec<Blocks> = ps.iter().map(blocks).collect();
        for (a, ba) in ps.iter().zip(&bs) {
            for (b, bb) in ps.iter().zip(&bs) {
                let refines = bb.iter().all(|f| ba.iter().any(|c| f.is_subset(c)));
                r.check(b.refines(a) == refines, || format!("order {a} {b}"));
                let expected_join: Blocks = ba
                    .iter()
                    .flat_map(|x| bb.iter().map(move |y| x & y))
                    .filter(|s| !s.is_empty())
                    .collect();
                let j = join(a, b).expect("same ground");
                r.check(blocks(&j) == expected_join, || format!("join {a} {b}"));
                let m = meet(a, b).expect("same ground");
                let coarser_than_both = a.refines(&m) && b.refines(&m);
                // every common coarsening is coarser than the meet
                let finest = ps
                    .iter()
                    .filter(|c| a.refines(c) && b.refines(c))
                    .all(|c| m.refines(c));
                r.check(coarser_than_both && finest, || format!("meet {a} {b}"));
            }
        }
    }
}

fn commute_suite(max_n: usize, r: &mut SuiteReport) {
    for n in 1..=max_n {
        let ps = all(n);
        let bs: Vec<Blocks> = ps.iter().map(blocks).collect();
        for (a, ba) in ps.iter().zip(&bs) {
            for (b, bb) in ps.iter().zip(&bs) {
                let definition = (0..n).all(|x| {
                    (0..n).all(|z| {
                        let ab = (0..n).any(|y| related(ba, x, y) && related(bb, y, z));
                        let ba_ = (0..n).any(|y| related(bb, x, y) && related(ba, y, z));
                        ab == ba_
                    })
                });
                let matrix = commute(a, b).expect("same ground").is_commuting();
                let criterion = composition_is_equivalence(a, b).expect("same ground");
                r.check(matrix == definition && criterion == definition, || {
                    format!(
                        "{a} {b}: matrix {matrix}, definition {definition}, criterion {criterion}"
                    )
                });
            }
        }
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn aut(max_n: usize, r: &mut SuiteReport) {
    for n in 1..=max_n.min(6) {
        for p in all(n) {
            let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
            for a in p.atoms() {
                *sizes.entry(a.len()).or_default() += 1;
            }
            let expected: usize = sizes
                .iter()
                .map(|(&s, &m)| factorial(m) * factorial(s).pow(m as u32))
                .product();
            let order = automorphism_group(&p).map(|g| g.order());
            r.check(order.as_ref().ok() == Some(&expected), || {
                format!("|Aut({p})| = {order:?}, expected {expected}")
            });
        }
    }
}

fn random_measure(p: &Partition, rng: &mut ChaCha8Rng) -> ProbMeasure {
    let raw: Vec<i64> = (0..p.num_atoms()).map(|_| rng.gen_range(1..30)).collect();
    let total: i64 = raw.iter().sum();
    ProbMeasure::new(p.clone(), raw.iter().map(|&w| rat(w, total)).collect())
        .expect("normalised weights")
}

fn averaging(max_n: usize, rng: &mut ChaCha8Rng, r: &mut SuiteReport) {
    for n in 1..=max_n.min(5) {
        for p in all(n) {
            let group = automorphism_group(&p).expect("bounded");
            for _ in 0..100 {
                let mu = random_measure(&p, rng);
                let avg = group_average(&mu, &group).expect("group preserves p");
                r.check(is_invariant(&avg, &group).expect("same base"), || {
                    format!("average of {mu} on {p} is not invariant")
                });
            }
        }
    }
}

/// Atom orbits by merging the atoms each generator connects.
fn orbit_count(p: &Partition, gens: &[Permutation]) -> usize {
    let mut root: Vec<usize> = (0..p.num_atoms()).collect();
    fn find(root: &mut [usize], a: usize) -> usize {
        if root[a] == a {
            a
        } else {
            let r = find(root, root[a]);
            root[a] = r;
            r
        }
    }
    for g in gens {
        for a in 0..p.num_atoms() {
            let b = p.atom_of(g.apply(p.atom(a)[0]));
            let (ra, rb) = (find(&mut root, a), find(&mut root, b));
            root[ra.max(rb)] = ra.min(rb);
        }
    }
    (0..p.num_atoms())
        .filter(|&a| find(&mut root, a) == a)
        .count()
}

fn transitive(max_n: usize, rng: &mut ChaCha8Rng, r: &mut SuiteReport) {
    for n in 1..=max_n.min(5) {
        let ps = all(n);
        let per_partition = 50usize.div_ceil(ps.len()).max(2);
        for p in &ps {
            let aut = automorphism_group(p).expect("bounded");
            for _ in 0..per_partition {
                let k = rng.gen_range(1..=2);
                let gens: Vec<Permutation> = (0..k)
                    .map(|_| aut.elements()[rng.gen_range(0..aut.order())].clone())
                    .collect();
                let h = PermGroup::from_generators(ground(n), gens).expect("valid");
                if orbit_count(p, h.generators()) != 1 {
                    continue;
                }
                let polytope = invariant_measures(p, &h).expect("preserves p");
                let uniform = ProbMeasure::uniform(p.clone());
                r.check(
                    polytope.dimension == 0 && polytope.representative == uniform,
                    || {
                        format!(
                            "transitive subgroup on {p} leaves dimension {}",
                            polytope.dimension
                        )
                    },
                );
            }
        }
    }
}

fn refinements(max_n: usize, r: &mut SuiteReport) {
    let bells = bell_numbers(max_n);
    for n in 1..=max_n {
        for p in all(n) {
            let expected: u64 = p.atoms().iter().map(|a| bells[a.len()] - 1).sum();
            let steps: Vec<_> = enumerate_atomic_refinements(&p).collect();
            let one_atom_each = steps
                .iter()
                .all(|s| blocks(s.source()).difference(&blocks(s.target())).count() == 1);
            r.check(steps.len() as u64 == expected && one_atom_each, || {
                format!("{p}: {} refinements, expected {expected}", steps.len())
            });
        }
    }
}

fn decompose_suite(max_n: usize, r: &mut SuiteReport) {
    for n in 1..=max_n.min(5) {
        let ps = all(n);
        for coarse in &ps {
            for fine in ps.iter().filter(|f| f.refines(coarse)) {
                let ok = decompose(coarse, fine).is_ok_and(|chain| {
                    chain.end() == fine
                        && chain.algebras().windows(2).all(|w| {
                            w[1].strictly_refines(&w[0])
                                && blocks(&w[0]).difference(&blocks(&w[1])).count() == 1
                        })
                });
                r.check(ok, || format!("decompose {coarse} -> {fine}"));
            }
        }
    }
}

fn endogenous(max_n: usize, r: &mut SuiteReport) {
    for n in 1..=max_n {
        let two: Vec<Partition> = all(n).into_iter().filter(|p| p.num_atoms() == 2).collect();
        let mut generator_sets = vec![vec![Partition::trivial(ground(n))]];
        for mask in 1u32..(1 << two.len()) {
            let gens: Vec<Partition> = (0..two.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| two[i].clone())
                .collect();
            if gens.iter().all(|a| gens.iter().all(|b| commutes(a, b))) {
                generator_sets.push(gens);
            }
        }
        for gens in generator_sets {
            let Ok(domain) = build_domain(&gens) else {
                r.check(false, || format!("commuting generators {gens:?} rejected"));
                continue;
            };
            let Ok(pairs) = solve_endogenous(&domain) else {
                r.check(false, || "solve_endogenous failed".into());
                continue;
            };
            let tops: Vec<&Partition> = domain
                .members()
                .iter()
                .filter(|p| p.num_atoms() == 2)
                .collect();
            let expected: Vec<&Partition> = if tops.is_empty() {
                domain.members().iter().collect()
            } else {
                tops
            };
            let got: Vec<&Partition> = pairs.iter().map(|p| &p.algebra).collect();
            let consistent = pairs.iter().all(|pair| {
                pair.measure == ProbMeasure::uniform(pair.algebra.clone())
                    && check_self_consistent(&pair.algebra, &pair.measure, &domain)
                        .is_ok_and(|rep| rep.is_self_consistent())
                    && pair.certificate.minimality_holds()
            });
            r.check(got == expected && consistent, || {
                format!("domain over n={n} with {} members", domain.len())
            });
        }
    }
}

fn extension(rng: &mut ChaCha8Rng, r: &mut SuiteReport) {
    let g = ground(4);
    let t = Partition::trivial(g);
    let pa = Partition::from_blocks(g, &[[0, 1], [2, 3]]).expect("valid");
    let pb = Partition::from_blocks(g, &[[0, 2], [1, 3]]).expect("valid");
    let d = Partition::discrete(g);
    let chain = |mid: &Partition| {
        let mut c = decompose(&t, mid).expect("refines");
        for s in decompose(mid, &d).expect("refines").steps() {
            c.push(s.clone()).expect("consecutive");
        }
        c
    };
    let (via_a, via_b) = (chain(&pa), chain(&pb));
    let mu0 = ProbMeasure::uniform(t.clone());
    for _ in 0..100 {
        let a = rat(rng.gen_range(0..=20), 20);
        let b = rat(rng.gen_range(0..=20), 20);
        let ca = vec![a.clone(), one() - &a];
        let cb = vec![b.clone(), one() - &b];
        let x = extend_along(&mu0, &via_a, &[ca.clone(), cb.clone(), cb.clone()]);
        let y = extend_along(&mu0, &via_b, &[cb, ca.clone(), ca]);
        r.check(matches!((&x, &y), (Ok(x), Ok(y)) if x == y), || {
            format!("a={a}, b={b}: {x:?} vs {y:?}")
        });
    }
}
