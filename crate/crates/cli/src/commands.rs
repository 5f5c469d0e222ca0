use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sigma_refine::dynamics::{
    build_event_graph, build_event_graph_from_chains, simulate, Outcome, Policy, SplitRule,
};
use sigma_refine::endogenous::{
    check_uniqueness_up_to_symmetry, common_algebra, maximal_elements, solve_endogenous,
    EndogenousPair, Rejection, UniquenessFailure, UniquenessVerdict,
};
use sigma_refine::measure::{automorphism_group, invariant_measures, Permutation};
use sigma_refine::partition::{format_block, join, meet};
use sigma_refine::rational::{display_rational, parse_rational};
use sigma_refine::relation::{commute, CommuteVerdict, WitnessSide};
use sigma_refine::{Error, Partition};

use crate::dot::{domain_dot, event_graph_dot};
use crate::fixtures::{
    load_chains, load_domain, load_group, load_measure, load_partition, DomainJson, FixtureError,
    MeasureJson, PartitionJson, StepJson,
};
use crate::oracle::{run_oracle, OracleConfig, Suite};
use crate::toy::transcript;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NEGATIVE: i32 = 3;
pub const EXIT_INVALID: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "sigma",
    version,
    about = "Exact finite σ-algebra refinement systems"
)]
struct Cli {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Test whether two partitions commute.
    Commute { a: PathBuf, b: PathBuf },
    /// Coarsest common refinement.
    Join { a: PathBuf, b: PathBuf },
    /// Finest common coarsening.
    Meet { a: PathBuf, b: PathBuf },
    /// List the atoms of a partition.
    Atoms { partition: PathBuf },
    /// Automorphism group of a partition.
    Aut { partition: PathBuf },
    /// Invariant measures under Aut(P) or a supplied group.
    Invariant {
        partition: PathBuf,
        #[arg(long)]
        group: Option<PathBuf>,
    },
    /// Extend a measure to a finer partition.
    Extend {
        measure: PathBuf,
        fine: PathBuf,
        /// Comma-separated part weights for one subdivided atom; repeat once
        /// per subdivided atom in canonical order. Equal splits by default.
        #[arg(long = "weights")]
        weights: Vec<String>,
    },
    /// Endogenous pairs of a domain, with certificates.
    Endogenous {
        domain: PathBuf,
        /// Symmetry group for the uniqueness check.
        #[arg(long)]
        group: Option<PathBuf>,
    },
    /// Compatibility domain operations.
    Domain {
        #[command(subcommand)]
        action: DomainCommand,
    },
    /// Event graph of a chain set.
    EventGraph {
        chains: PathBuf,
        /// Emit Graphviz DOT.
        #[arg(long)]
        dot: bool,
    },
    /// Run refinement operators until stabilization.
    Simulate {
        partition: PathBuf,
        #[arg(long, value_enum, default_value_t = PolicyArg::Exhaustive)]
        policy: PolicyArg,
        /// Chains fixture whose first chain is the script.
        #[arg(long)]
        script: Option<PathBuf>,
        /// Defaults to the ground-set size.
        #[arg(long)]
        max_steps: Option<usize>,
        /// Only refine into members of this domain.
        #[arg(long)]
        domain: Option<PathBuf>,
    },
    /// Run the exhaustive property suites.
    Oracle {
        #[arg(long, env = "SIGMA_ORACLE_MAX_N", default_value_t = 5)]
        max_n: usize,
        /// Comma-separated suite names; all suites by default.
        #[arg(long, value_delimiter = ',')]
        suites: Vec<Suite>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Replay the four-element toy universe.
    Toy,
}

#[derive(Debug, Subcommand)]
enum DomainCommand {
    /// Close generators under coarsening and check commutativity.
    Build {
        #[arg(required = true)]
        generators: Vec<PathBuf>,
        /// Emit the Hasse diagram as Graphviz DOT.
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolicyArg {
    Exhaustive,
    Scripted,
    FirstBinary,
    LastBinary,
    Singletons,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Invalid(String),
    Negative(String),
}

impl From<FixtureError> for Failure {
    fn from(e: FixtureError) -> Self {
        match e {
            FixtureError::Invalid(e) => e.into(),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CommutativityViolation { .. } => Failure::Negative(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

/// What a command produced: text or JSON for stdout, plus the exit code.
struct Output {
    text: String,
    json: Value,
    code: i32,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            code: EXIT_OK,
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(output) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&output.json).expect("values serialize") + "\n"
            } else {
                output.text
            };
            let _ = out.write_all(body.as_bytes());
            output.code
        }
        Err(failure) => {
            let (code, message) = match failure {
                Failure::Usage(m) => (EXIT_USAGE, m),
                Failure::Invalid(m) => (EXIT_INVALID, m),
                Failure::Negative(m) => (EXIT_NEGATIVE, m),
            };
            if cli.json {
                let kind = match code {
                    EXIT_USAGE => "usage",
                    EXIT_NEGATIVE => "negative",
                    _ => "validation",
                };
                let body = json!({"error": kind, "message": message});
                let _ = writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&body).expect("serializes")
                );
            }
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

fn dispatch(command: &Command) -> Result<Output, Failure> {
    match command {
        Command::Commute { a, b } => cmd_commute(a, b),
        Command::Join { a, b } => lattice_op(a, b, join),
        Command::Meet { a, b } => lattice_op(a, b, meet),
        Command::Atoms { partition } => cmd_atoms(partition),
        Command::Aut { partition } => cmd_aut(partition),
        Command::Invariant { partition, group } => cmd_invariant(partition, group.as_deref()),
        Command::Extend {
            measure,
            fine,
            weights,
        } => cmd_extend(measure, fine, weights),
        Command::Endogenous { domain, group } => cmd_endogenous(domain, group.as_deref()),
        Command::Domain {
            action: DomainCommand::Build { generators, dot },
        } => cmd_domain_build(generators, *dot),
        Command::EventGraph { chains, dot } => cmd_event_graph(chains, *dot),
        Command::Simulate {
            partition,
            policy,
            script,
            max_steps,
            domain,
        } => cmd_simulate(
            partition,
            *policy,
            script.as_deref(),
            *max_steps,
            domain.as_deref(),
        ),
        Command::Oracle {
            max_n,
            suites,
            seed,
        } => cmd_oracle(*max_n, suites, *seed),
        Command::Toy => {
            let text = transcript()?;
            let lines: Vec<&str> = text.lines().collect();
            Ok(Output::ok(text.clone(), json!({"transcript": lines})))
        }
    }
}

fn pj(p: &Partition) -> Value {
    serde_json::to_value(PartitionJson::from_partition(p)).expect("serializes")
}

fn one_based(block: &[usize]) -> Vec<usize> {
    block.iter().map(|x| x + 1).collect()
}

fn cmd_commute(a: &Path, b: &Path) -> Result<Output, Failure> {
    let (pa, pb) = (load_partition(a)?, load_partition(b)?);
    Ok(match commute(&pa, &pb)? {
        CommuteVerdict::Commuting => {
            Output::ok("commuting\n".into(), json!({"verdict": "commuting"}))
        }
        CommuteVerdict::NonCommuting {
            witness: (x, z),
            side,
        } => {
            let (side_text, side_key) = match side {
                WitnessSide::AAfterB => ("∼A∘∼B", "a_after_b"),
                WitnessSide::BAfterA => ("∼B∘∼A", "b_after_a"),
            };
            Output {
                text: format!(
                    "non-commuting: witness ({},{}) lies in {side_text} only\n",
                    x + 1,
                    z + 1
                ),
                json: json!({
                    "verdict": "non_commuting",
                    "witness": [x + 1, z + 1],
                    "side": side_key,
                }),
                code: EXIT_NEGATIVE,
            }
        }
    })
}

fn lattice_op(
    a: &Path,
    b: &Path,
    op: fn(&Partition, &Partition) -> sigma_refine::Result<Partition>,
) -> Result<Output, Failure> {
    let p = op(&load_partition(a)?, &load_partition(b)?)?;
    Ok(Output::ok(format!("{p}\n"), pj(&p)))
}

fn cmd_atoms(path: &Path) -> Result<Output, Failure> {
    let p = load_partition(path)?;
    let text: String = p.atoms().iter().map(|a| format_block(a) + "\n").collect();
    let atoms: Vec<Vec<usize>> = p.atoms().iter().map(|a| one_based(a)).collect();
    Ok(Output::ok(text, json!({"atoms": atoms})))
}

fn perm_json(g: &Permutation) -> Value {
    json!({"images": one_based(g.as_slice()), "cycles": g.to_string()})
}

fn cmd_aut(path: &Path) -> Result<Output, Failure> {
    let p = load_partition(path)?;
    let group = automorphism_group(&p)?;
    let gens: Vec<String> = group.generators().iter().map(ToString::to_string).collect();
    let text = format!("order {}\ngenerators {}\n", group.order(), gens.join(" "));
    let json = json!({
        "order": group.order(),
        "generators": group.generators().iter().map(perm_json).collect::<Vec<_>>(),
    });
    Ok(Output::ok(text, json))
}

fn cmd_invariant(path: &Path, group: Option<&Path>) -> Result<Output, Failure> {
    let p = load_partition(path)?;
    let group = match group {
        Some(g) => load_group(g)?,
        None => automorphism_group(&p)?,
    };
    let polytope = invariant_measures(&p, &group)?;
    let orbits: Vec<Vec<Vec<usize>>> = polytope
        .orbits
        .iter()
        .map(|o| o.iter().map(|&a| one_based(p.atom(a))).collect())
        .collect();
    let vertices = polytope.vertices();
    let mut text = format!("group order {}\n", group.order());
    for o in &polytope.orbits {
        let atoms: Vec<String> = o.iter().map(|&a| format_block(p.atom(a))).collect();
        text += &format!("orbit {}\n", atoms.join(" "));
    }
    text += &format!("dimension {}\n", polytope.dimension);
    text += &format!("representative {}\n", polytope.representative);
    for v in &vertices {
        text += &format!("vertex {v}\n");
    }
    let json = json!({
        "group_order": group.order(),
        "orbits": orbits,
        "dimension": polytope.dimension,
        "representative": MeasureJson::from_measure(&polytope.representative),
        "vertices": vertices.iter().map(MeasureJson::from_measure).collect::<Vec<_>>(),
    });
    Ok(Output::ok(text, json))
}

fn cmd_extend(measure: &Path, fine: &Path, weights: &[String]) -> Result<Output, Failure> {
    let mu = load_measure(measure)?;
    let fine = load_partition(fine)?;
    let witness = sigma_refine::partition::is_refinement(mu.base(), &fine)?
        .ok_or_else(|| Failure::Invalid(format!("{fine} does not refine {}", mu.base())))?;
    let subdivided: Vec<usize> = (0..mu.base().num_atoms())
        .filter(|&c| witness.parts_of(c).len() > 1)
        .collect();
    let split: Vec<Vec<sigma_refine::Rational>> = if weights.is_empty() {
        subdivided
            .iter()
            .map(|&c| {
                let k = witness.parts_of(c).len() as i64;
                vec![sigma_refine::rational::rat(1, k); k as usize]
            })
            .collect()
    } else {
        weights
            .iter()
            .map(|w| {
                w.split(',')
                    .map(|s| parse_rational(s.trim()))
                    .collect::<sigma_refine::Result<Vec<_>>>()
            })
            .collect::<sigma_refine::Result<Vec<_>>>()?
    };
    let nu = mu.extend_with_weights(&fine, &split)?;
    let mut constraints = Vec::new();
    for c in 0..mu.base().num_atoms() {
        let parts: Vec<String> = witness
            .parts_of(c)
            .iter()
            .map(|&f| format!("μ{}", format_block(fine.atom(f))))
            .collect();
        constraints.push(format!(
            "{} = {}",
            parts.join(" + "),
            display_rational(mu.weight(c))
        ));
    }
    let mut text = format!("{nu}\n");
    for c in &constraints {
        text += &format!("constraint {c}\n");
    }
    let json = json!({
        "measure": MeasureJson::from_measure(&nu),
        "constraints": constraints,
    });
    Ok(Output::ok(text, json))
}

fn rejection_key(r: &Rejection) -> &'static str {
    match r {
        Rejection::NotAdmissible => "not_admissible",
        Rejection::NoInvariantExtension => "no_invariant_extension",
    }
}

fn pair_json(pair: &EndogenousPair) -> Value {
    let c = &pair.certificate;
    json!({
        "algebra": pj(&pair.algebra),
        "measure": MeasureJson::from_measure(&pair.measure),
        "invariant_polytope": {
            "dimension": pair.polytope.dimension,
            "vertices": pair.polytope.vertices().iter().map(MeasureJson::from_measure).collect::<Vec<_>>(),
        },
        "certificate": {
            "maximal_in_domain": c.maximal_in_domain,
            "rejected_refinements": c.rejected_refinements.iter().map(|r| json!({
                "refinement": pj(&r.refinement),
                "reason": rejection_key(&r.reason),
            })).collect::<Vec<_>>(),
            "coarsenings": c.coarsenings.iter().map(|v| json!({
                "coarsening": pj(&v.coarsening),
                "restricted": MeasureJson::from_measure(&v.restricted),
                "degenerate": v.degenerate,
            })).collect::<Vec<_>>(),
            "minimality": c.minimality_holds(),
        },
    })
}

fn uniqueness_json(verdict: &UniquenessVerdict) -> (String, Value) {
    match verdict {
        UniquenessVerdict::UniqueUpToSymmetry { witnesses } => {
            let mut text = "unique up to symmetry\n".to_string();
            let list: Vec<Value> = witnesses
                .iter()
                .map(|w| {
                    text += &format!(
                        "  pair {} -> pair {} via {}{}\n",
                        w.from + 1,
                        w.to + 1,
                        w.element,
                        if w.atom_action_transitive {
                            " (transitive on atoms)"
                        } else {
                            ""
                        }
                    );
                    json!({
                        "from": w.from + 1,
                        "to": w.to + 1,
                        "element": perm_json(&w.element),
                        "atom_action_transitive": w.atom_action_transitive,
                    })
                })
                .collect();
            (
                text,
                json!({"verdict": "unique_up_to_symmetry", "witnesses": list}),
            )
        }
        UniquenessVerdict::NotEstablished(reason) => {
            let (detail, key) = match reason {
                UniquenessFailure::NoPairs => ("no pairs".to_string(), "no_pairs"),
                UniquenessFailure::DomainNotPreserved {
                    element,
                    member,
                    image,
                } => (
                    format!("{element} maps member {member} to {image} outside the domain"),
                    "domain_not_preserved",
                ),
                UniquenessFailure::NotTransitive { unreached } => (
                    format!("no group element maps the first algebra onto {unreached}"),
                    "not_transitive",
                ),
                UniquenessFailure::MeasureMismatch {
                    from, to, element, ..
                } => (
                    format!(
                        "{element} maps pair {} onto pair {} but not its measure",
                        from + 1,
                        to + 1
                    ),
                    "measure_mismatch",
                ),
            };
            (
                format!("not established: {detail}\n"),
                json!({"verdict": "not_established", "reason": key, "detail": detail}),
            )
        }
    }
}

fn cmd_endogenous(domain: &Path, group: Option<&Path>) -> Result<Output, Failure> {
    let domain = load_domain(domain)?;
    let pairs = solve_endogenous(&domain)?;
    let mut text = String::new();
    for (i, pair) in pairs.iter().enumerate() {
        text += &format!(
            "pair {}: {} with μ = {}\n",
            i + 1,
            pair.algebra,
            pair.measure
        );
        for r in &pair.certificate.rejected_refinements {
            text += &format!(
                "  rejected refinement {} ({})\n",
                r.refinement,
                rejection_key(&r.reason)
            );
        }
        for v in &pair.certificate.coarsenings {
            text += &format!(
                "  coarsening {} gives {}{}\n",
                v.coarsening,
                v.restricted,
                if v.degenerate { " (degenerate)" } else { "" }
            );
        }
    }
    let common = common_algebra(&pairs, &domain)?;
    if let Some(c) = &common {
        text += &format!("common algebra (meet over all endogenous measures): {c}\n");
    }
    let mut json = json!({
        "pairs": pairs.iter().map(pair_json).collect::<Vec<_>>(),
        "common_algebra": common.as_ref().map(pj),
        "common_algebra_reading": "meet of the compatible algebras of every endogenous measure",
    });
    let mut code = EXIT_OK;
    if let Some(g) = group {
        let group = load_group(g)?;
        let verdict = check_uniqueness_up_to_symmetry(&pairs, &group, &domain)?;
        if !verdict.is_unique() {
            code = EXIT_NEGATIVE;
        }
        let (t, j) = uniqueness_json(&verdict);
        text += &t;
        json["uniqueness"] = j;
    }
    Ok(Output { text, json, code })
}

fn cmd_domain_build(generators: &[PathBuf], dot: bool) -> Result<Output, Failure> {
    let parts = generators
        .iter()
        .map(|p| load_partition(p))
        .collect::<Result<Vec<_>, _>>()?;
    let domain = sigma_refine::endogenous::build_domain(&parts)?;
    let maximal = maximal_elements(&domain);
    let text = if dot {
        domain_dot(&domain)
    } else {
        let mut t: String = domain.members().iter().map(|m| format!("{m}\n")).collect();
        let tops: Vec<String> = maximal.iter().map(ToString::to_string).collect();
        t += &format!("maximal {}\n", tops.join(" "));
        t
    };
    let mut json = serde_json::to_value(DomainJson::from_domain(&domain)).expect("serializes");
    json["maximal"] = maximal.iter().map(pj).collect();
    Ok(Output::ok(text, json))
}

fn cmd_event_graph(path: &Path, dot: bool) -> Result<Output, Failure> {
    let chains = load_chains(path)?;
    let graph = match chains.to_refinement_chains()? {
        Some(concrete) => build_event_graph_from_chains(&concrete)?,
        None => build_event_graph(&chains.chains)?,
    };
    let covers: Vec<(String, String)> = graph
        .covers()
        .into_iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    let mut incomparable = Vec::new();
    for (i, a) in graph.nodes().iter().enumerate() {
        for b in &graph.nodes()[i + 1..] {
            if graph.incomparable(a, b) {
                incomparable.push((a.clone(), b.clone()));
            }
        }
    }
    let text = if dot {
        event_graph_dot(&graph)
    } else {
        let mut t = format!("nodes {}\n", graph.nodes().join(" "));
        for (a, b) in &covers {
            t += &format!("{a} -> {b}\n");
        }
        for (a, b) in &incomparable {
            t += &format!("{a} || {b}\n");
        }
        t += "acyclic yes\nreading non-vacuous (pairs sharing no chain are incomparable)\n";
        t
    };
    let json = json!({
        "nodes": graph.nodes(),
        "edges": covers,
        "incomparable": incomparable,
        "acyclic": true,
        "transitive": graph.is_transitive(),
        "reading": "non_vacuous",
        "dot": event_graph_dot(&graph),
    });
    Ok(Output::ok(text, json))
}

fn cmd_simulate(
    path: &Path,
    policy: PolicyArg,
    script: Option<&Path>,
    max_steps: Option<usize>,
    domain: Option<&Path>,
) -> Result<Output, Failure> {
    let start = load_partition(path)?;
    let domain = domain.map(load_domain).transpose()?;
    let policy = match (policy, script) {
        (PolicyArg::Scripted, Some(s)) => {
            let chains = load_chains(s)?;
            let steps = chains
                .to_refinement_chains()?
                .ok_or_else(|| Failure::Invalid("script needs a steps map".into()))?;
            let first = steps
                .into_iter()
                .next()
                .map(|c| c.steps().to_vec())
                .unwrap_or_default();
            Policy::Scripted(first)
        }
        (PolicyArg::Scripted, None) => {
            return Err(Failure::Usage("--policy scripted requires --script".into()))
        }
        (_, Some(_)) => {
            return Err(Failure::Usage(
                "--script is only used with --policy scripted".into(),
            ))
        }
        (PolicyArg::Exhaustive, None) => Policy::Exhaustive,
        (PolicyArg::FirstBinary, None) => Policy::Rule(SplitRule::FirstBinary),
        (PolicyArg::LastBinary, None) => Policy::Rule(SplitRule::LastBinary),
        (PolicyArg::Singletons, None) => Policy::Rule(SplitRule::Singletons),
    };
    let run = simulate(
        &start,
        &policy,
        max_steps.unwrap_or(start.n()),
        domain.as_ref(),
    )?;
    let outcome = match run.outcome {
        Outcome::Stabilized => "stabilized",
        Outcome::StepBudgetExhausted => "step_budget_exhausted",
        Outcome::ScriptCompleted => "script_completed",
    };
    let mut text = String::new();
    for (step, after) in run.trace.steps().iter().zip(&run.trace.algebras()[1..]) {
        text += &format!("{step}  =>  {after}\n");
    }
    text += &format!("final {}\noutcome {outcome}\n", run.final_partition());
    let json = json!({
        "final": pj(run.final_partition()),
        "trace": run.trace.steps().iter().map(|s| json!({
            "label": s.label(),
            "step": StepJson::from_step(s),
        })).collect::<Vec<_>>(),
        "outcome": outcome,
    });
    Ok(Output::ok(text, json))
}

fn cmd_oracle(max_n: usize, suites: &[Suite], seed: u64) -> Result<Output, Failure> {
    let config = OracleConfig {
        max_n,
        suites: if suites.is_empty() {
            Suite::ALL.to_vec()
        } else {
            suites.to_vec()
        },
        seed,
    };
    config.validate().map_err(Failure::Usage)?;
    let reports = run_oracle(&config);
    let mut text = String::new();
    for r in &reports {
        text += &format!(
            "{:<12} {} {}/{} passed\n",
            r.suite.name(),
            if r.passed() { "ok  " } else { "FAIL" },
            r.checked - r.failed,
            r.checked
        );
        for f in &r.failures {
            text += &format!("  {f}\n");
        }
    }
    let all_passed = reports.iter().all(|r| r.passed());
    let json = json!({"max_n": max_n, "seed": seed, "suites": reports});
    Ok(Output {
        text,
        json,
        code: if all_passed { EXIT_OK } else { EXIT_NEGATIVE },
    })
}
