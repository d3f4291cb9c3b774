//! End-to-end tests of the command-line front end through `cli::run_argv`.

use itcalc::cli::run_argv;
use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{}", env!("CARGO_MANIFEST_DIR"), name)
}

fn run(args: &[&str]) -> (i32, Value) {
    let argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let (code, out) = run_argv(&argv);
    let value = serde_json::from_str(&out).unwrap_or_else(|_| panic!("non-JSON output: {}", out));
    (code, value)
}

#[test]
fn phi_of_simples_over_n3() {
    let (code, v) = run(&[
        "phi",
        "--algebra",
        &fixture("n3.alg"),
        "--module",
        "S(1)+S(2)",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["phi"], 2);
    assert_eq!(v["certified"], true);
    assert_eq!(v["division"]["d"], 2);
    assert_eq!(v["rank_sequence"][0], 2);
}

#[test]
fn phi_dim_nakayama_all() {
    for (alg, expected) in [("l2.alg", 0), ("l3.alg", 0), ("n3.alg", 2)] {
        let (code, v) = run(&[
            "phi-dim",
            "--algebra",
            &fixture(alg),
            "--family",
            "nakayama-all",
        ]);
        assert_eq!(code, 0);
        assert_eq!(v["phi_dim"], expected, "{}", alg);
        assert_eq!(v["certified"], true);
    }
}

#[test]
fn generator_collapses_phi_dim() {
    let (code, v) = run(&[
        "phi-dim",
        "--algebra",
        &fixture("l2.alg"),
        "--generator",
        "S(1)",
        "--family",
        "nakayama-all",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["phi_dim"], 0);
}

#[test]
fn resolve_terminates_over_n3() {
    let (code, v) = run(&[
        "resolve",
        "--algebra",
        &fixture("n3.alg"),
        "--module",
        "S(1)",
        "--length",
        "4",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["terminated"], true);
    assert_eq!(v["term_dims"][0], serde_json::json!([1, 1, 0]));
}

#[test]
fn ext_matches_projective_dimension() {
    let (code, v) = run(&[
        "ext",
        "--algebra",
        &fixture("n3.alg"),
        "--module",
        "S(1)",
        "--target",
        "S(3)",
        "--degree",
        "2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["ext_dim"], 1);
}

#[test]
fn check_exact_accepts_resolution_complex() {
    let (code, v) = run(&[
        "check-exact",
        "--algebra",
        &fixture("a2.alg"),
        "--complex",
        &fixture("a2-s1-resolution.cpx"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["f_acyclic"], true);
}

#[test]
fn module_file_loads_through_expression() {
    let (code, v) = run(&[
        "phi",
        "--algebra",
        &fixture("l3.alg"),
        "--module",
        &format!("file:{}", fixture("l3-m2.mod")),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["phi"], 0);
}

#[test]
fn tilting_check_of_regular_module() {
    let (code, v) = run(&[
        "tilting-check",
        "--algebra",
        &fixture("a2.alg"),
        "--tilting",
        "A",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["self_orthogonal"], true);
    assert_eq!(v["summand_count"], 2);
    assert_eq!(v["generation_heuristic"], true);
    assert_eq!(v["term_length"], 0);
}

#[test]
fn verify_bound_identity_and_apr() {
    // identity equivalence: B = A, tilting = A itself
    let (code, v) = run(&[
        "verify-bound",
        "--algebra",
        &fixture("n3.alg"),
        "--tilting",
        "A",
        "--b-algebra",
        &fixture("n3.alg"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["holds"], true);
    assert_eq!(v["certified"], true);
    assert_eq!(v["phi_dim_a"], v["phi_dim_b"]);
    // APR tilt: the endomorphism algebra of P(1)+S(1) is the reversed quiver
    let (code, v) = run(&[
        "verify-bound",
        "--algebra",
        &fixture("a2.alg"),
        "--tilting",
        "P(1)+S(1)",
        "--b-algebra",
        &fixture("a2-reversed.alg"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["holds"], true);
    assert_eq!(v["term_length"], 0);
}

#[test]
fn decompose_regular_module() {
    let (code, v) = run(&[
        "decompose",
        "--algebra",
        &fixture("n3.alg"),
        "--module",
        "A",
    ]);
    assert_eq!(code, 0);
    let summands = v["summands"].as_array().unwrap();
    let total: u64 = summands.iter().map(|s| s["multiplicity"].as_u64().unwrap()).sum();
    assert_eq!(total, 3);
    assert_eq!(v["total_dim"], 5);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = [
        "phi-dim",
        "--algebra",
        &fixture("n3.alg"),
        "--family",
        "nakayama-all",
    ];
    let argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let (_, a) = run_argv(&argv);
    let (_, b) = run_argv(&argv);
    assert_eq!(a, b);
}

#[test]
fn replay_reproduces_a_report() {
    let dir = std::env::temp_dir().join("itcalc-cli-replay-test");
    std::fs::create_dir_all(&dir).unwrap();
    let report = dir.join("report.json");
    let argv: Vec<String> = [
        "phi",
        "--algebra",
        &fixture("n3.alg"),
        "--module",
        "S(1)",
        "--output",
        report.to_str().unwrap(),
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let (code, first) = run_argv(&argv);
    assert_eq!(code, 0);
    let replay_args: Vec<String> =
        ["phi", "--algebra", "unused", "--module", "unused", "--replay", report.to_str().unwrap()]
            .iter()
            .map(|s| s.to_string())
            .collect();
    let (code, second) = run_argv(&replay_args);
    assert_eq!(code, 0);
    // the replay re-runs the recorded argv, minus the --output side effect
    let a: Value = serde_json::from_str(&first).unwrap();
    let b: Value = serde_json::from_str(&second).unwrap();
    assert_eq!(a["phi"], b["phi"]);
    assert_eq!(a["rank_sequence"], b["rank_sequence"]);
}

#[test]
fn input_errors_exit_one_with_error_object() {
    let (code, v) = run(&[
        "phi",
        "--algebra",
        &fixture("n3.alg"),
        "--module",
        "S(7)",
    ]);
    assert_eq!(code, 1);
    assert!(v["error"]["code"].is_string());
    let (code, v) = run(&[
        "phi",
        "--algebra",
        "/nonexistent/file.alg",
        "--module",
        "S(1)",
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "IoError");
}

#[test]
fn non_orthogonal_tilting_is_rejected() {
    // P(2)+P(1)[1] with zero differential has nonzero shifted self-homs,
    // so verify-bound refuses it before evaluating any bound
    let dir = std::env::temp_dir().join("itcalc-cli-bound-test");
    std::fs::create_dir_all(&dir).unwrap();
    let cpx = dir.join("bad.cpx");
    std::fs::write(&cpx, "complex\ndegree 0: P(2)\ndegree 1: P(1)\n").unwrap();
    let (code, v) = run(&[
        "verify-bound",
        "--algebra",
        &fixture("a2.alg"),
        "--tilting",
        cpx.to_str().unwrap(),
        "--b-algebra",
        &fixture("a2.alg"),
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "NotSelfOrthogonal");
}
