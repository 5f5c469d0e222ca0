use std::fs;
use std::path::PathBuf;
use std::process::Command;

use sigma_cli::fixtures::{
    ChainsJson, DomainJson, Fixture, FixturePayload, MeasureJson, PartitionJson, PermsJson,
};
use sigma_cli::{run, EXIT_INVALID, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn sigma(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("sigma").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut full = args.to_vec();
    full.push("--json");
    let (code, out, _) = sigma(&full);
    (code, serde_json::from_str(&out).unwrap())
}

#[test]
fn commute_exit_codes() {
    let (code, v) = json(&["commute", &fixture("PA.json"), &fixture("PBprime.json")]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(v["witness"], serde_json::json!([2, 3]));
    assert_eq!(v["side"], "b_after_a");
    let (code, v) = json(&["commute", &fixture("PA.json"), &fixture("PB.json")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["verdict"], "commuting");
}

#[test]
fn lattice_commands() {
    let (code, v) = json(&["join", &fixture("PA.json"), &fixture("PB.json")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["blocks"], serde_json::json!([[1], [2], [3], [4]]));
    let (_, v) = json(&["meet", &fixture("PA.json"), &fixture("PB.json")]);
    assert_eq!(v["blocks"], serde_json::json!([[1, 2, 3, 4]]));
    let (_, v) = json(&["atoms", &fixture("PBprime.json")]);
    assert_eq!(v["atoms"], serde_json::json!([[1, 3, 4], [2]]));
}

#[test]
fn aut_and_invariant() {
    let (_, v) = json(&["aut", &fixture("PA.json")]);
    assert_eq!(v["order"], 8);
    let (code, v) = json(&["invariant", &fixture("PA.json")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["dimension"], 0);
    assert_eq!(
        v["representative"]["weights"],
        serde_json::json!(["1/2", "1/2"])
    );
    let (code, _) = json(&[
        "invariant",
        &fixture("PA.json"),
        "--group",
        &fixture("swap23.json"),
    ]);
    assert_eq!(code, EXIT_INVALID);
}

#[test]
fn extend_reports_constraints() {
    let (code, v) = json(&[
        "extend",
        &fixture("muA.json"),
        &fixture("discrete.json"),
        "--weights",
        "1/4,3/4",
        "--weights",
        "1/2,1/2",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        v["measure"]["weights"],
        serde_json::json!(["1/12", "1/4", "1/3", "1/3"])
    );
    assert_eq!(v["constraints"][0], "μ{1} + μ{2} = 1/3");
    let (code, _, err) = sigma(&[
        "extend",
        &fixture("muA.json"),
        &fixture("discrete.json"),
        "--weights",
        "1/2,1/3",
    ]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("error:"));
}

#[test]
fn endogenous_with_uniqueness() {
    let (code, v) = json(&[
        "endogenous",
        &fixture("toy_domain.json"),
        "--group",
        &fixture("swap23.json"),
    ]);
    assert_eq!(code, EXIT_OK);
    let pairs = v["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 2);
    assert_eq!(
        pairs[0]["algebra"]["blocks"],
        serde_json::json!([[1, 2], [3, 4]])
    );
    assert_eq!(
        pairs[1]["measure"]["weights"],
        serde_json::json!(["1/2", "1/2"])
    );
    assert_eq!(
        pairs[0]["certificate"]["coarsenings"][0]["degenerate"],
        true
    );
    assert_eq!(v["uniqueness"]["verdict"], "unique_up_to_symmetry");
}

#[test]
fn domain_build_rejects_non_commuting_generators() {
    let (code, v) = json(&["domain", "build", &fixture("PA.json"), &fixture("PB.json")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["members"].as_array().unwrap().len(), 3);
    assert_eq!(v["maximal"].as_array().unwrap().len(), 2);
    let (code, _, err) = sigma(&[
        "domain",
        "build",
        &fixture("PA.json"),
        &fixture("PBprime.json"),
    ]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert!(err.contains("witness (2, 3)"));
}

#[test]
fn event_graph_dot_is_stable() {
    let (code, out, _) = sigma(&["event-graph", &fixture("diamond_chains.json"), "--dot"]);
    assert_eq!(code, EXIT_OK);
    let golden = fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/golden/diamond.dot"
    ))
    .unwrap();
    assert_eq!(out, golden);
    let (_, v) = json(&["event-graph", &fixture("diamond_chains.json")]);
    assert_eq!(v["incomparable"], serde_json::json!([["R2", "R3"]]));
}

#[test]
fn simulate_policies() {
    let (code, v) = json(&["simulate", &fixture("trivial.json")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["outcome"], "stabilized");
    assert_eq!(v["trace"].as_array().unwrap().len(), 3);
    let (_, v) = json(&[
        "simulate",
        &fixture("trivial.json"),
        "--domain",
        &fixture("toy_domain.json"),
    ]);
    assert_eq!(v["final"]["blocks"], serde_json::json!([[1, 2], [3, 4]]));
    let (_, v) = json(&["simulate", &fixture("trivial.json"), "--max-steps", "1"]);
    assert_eq!(v["outcome"], "step_budget_exhausted");
    let (_, v) = json(&[
        "simulate",
        &fixture("trivial.json"),
        "--policy",
        "scripted",
        "--script",
        &fixture("toy_script.json"),
    ]);
    assert_eq!(v["trace"][1]["label"], "A1");
    let (code, _, _) = sigma(&["simulate", &fixture("trivial.json"), "--policy", "scripted"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = sigma(&[
        "simulate",
        &fixture("PA.json"),
        "--policy",
        "scripted",
        "--script",
        &fixture("toy_script.json"),
    ]);
    assert_eq!(code, EXIT_INVALID);
}

#[test]
fn oracle_runs_selected_suites() {
    let (code, out, _) = sigma(&["oracle", "--max-n", "4", "--suites", "lattice,commute"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("lattice") && lines[0].contains("ok"));
    assert!(lines[1].starts_with("commute"));
    let (code, _, _) = sigma(&["oracle", "--max-n", "9"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = sigma(&["oracle", "--suites", "nope"]);
    assert_eq!(code, EXIT_USAGE);
    let (_, a) = json(&["oracle", "--max-n", "3", "--seed", "42"]);
    let (_, b) = json(&["oracle", "--max-n", "3", "--seed", "42"]);
    assert_eq!(a, b);
}

#[test]
fn oracle_bound_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_sigma"))
        .args(["oracle", "--suites", "bell"])
        .env("SIGMA_ORACLE_MAX_N", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("3/3 passed"));
}

#[test]
fn toy_transcript_is_byte_stable() {
    let golden =
        fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/toy.txt")).unwrap();
    let (code, out, _) = sigma(&["toy"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, golden);
    let bin = Command::new(env!("CARGO_BIN_EXE_sigma"))
        .arg("toy")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(bin.stdout).unwrap(), golden);
}

#[test]
fn usage_and_validation_errors() {
    assert_eq!(sigma(&[]).0, EXIT_USAGE);
    assert_eq!(sigma(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(sigma(&["--help"]).0, EXIT_OK);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"n":4,"blocks":[[1,2],[2,3,4]]}"#).unwrap();
    let (code, _, err) = sigma(&["atoms", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("element 2"));
    fs::write(&bad, "not json").unwrap();
    assert_eq!(sigma(&["atoms", bad.to_str().unwrap()]).0, EXIT_INVALID);
    let (code, v) = json(&["atoms", "/nonexistent/p.json"]);
    assert_eq!(code, EXIT_INVALID);
    assert_eq!(v["error"], "validation");
}

#[test]
fn every_fixture_kind_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    for name in [
        "PA.json",
        "PBprime.json",
        "muA.json",
        "toy_domain.json",
        "swap23.json",
        "diamond_chains.json",
        "toy_script.json",
    ] {
        let loaded = Fixture::load(PathBuf::from(fixture(name)).as_path()).unwrap();
        let emitted = match &loaded.payload {
            FixturePayload::Partition(p) => {
                serde_json::to_string(&PartitionJson::from_partition(&p.to_partition().unwrap()))
            }
            FixturePayload::Measure(m) => {
                serde_json::to_string(&MeasureJson::from_measure(&m.to_measure().unwrap()))
            }
            FixturePayload::Domain(d) => {
                serde_json::to_string(&DomainJson::from_domain(&d.to_domain().unwrap()))
            }
            FixturePayload::Perms(g) => {
                serde_json::to_string(&PermsJson::from_group(&g.to_group().unwrap()))
            }
            FixturePayload::Chains(c) => serde_json::to_string(c),
        }
        .unwrap();
        let path = dir.path().join(name);
        fs::write(&path, &emitted).unwrap();
        let reloaded = Fixture::load(&path).unwrap();
        assert_eq!(reloaded.kind(), loaded.kind());
        // canonical fixtures are fixed points of parse ∘ emit
        assert_eq!(reloaded.payload, loaded.payload, "{name}");
        if let FixturePayload::Chains(c) = &reloaded.payload {
            let again: ChainsJson =
                serde_json::from_str(&serde_json::to_string(c).unwrap()).unwrap();
            assert_eq!(&again, c);
        }
    }
}
