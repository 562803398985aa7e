//! End-to-end tests of the `modspec` binary: workspace parsing, command
//! output in both formats, exit codes, and input via file or stdin.

use std::io::Write as _;
use std::process::{Command, Stdio};

fn run(args: &[&str], stdin: Option<&str>) -> (String, String, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_modspec"));
    cmd.args(args);
    cmd.stdout(Stdio::piped()).stderr(Stdio::piped());
    if stdin.is_some() {
        cmd.stdin(Stdio::piped());
    }
    let mut child = cmd.spawn().expect("binary should spawn");
    if let Some(text) = stdin {
        child.stdin.take().expect("stdin requested").write_all(text.as_bytes()).unwrap();
    }
    let out = child.wait_with_output().expect("binary should finish");
    (
        String::from_utf8(out.stdout).expect("stdout should be UTF-8"),
        String::from_utf8(out.stderr).expect("stderr should be UTF-8"),
        out.status.code().expect("binary should exit normally"),
    )
}

fn json_of(stdout: &str) -> serde_json::Value {
    serde_json::from_str(stdout.trim()).expect("stdout should be one JSON document")
}

const Z12: &str = "ring R = ZZ\nmodule M = coker [[12]]\n";

#[test]
fn ass_reports_the_torsion_primes_of_a_cyclic_module() {
    let (stdout, stderr, code) =
        run(&["-w", "-", "--format", "json", "ass", "--module", "M"], Some(Z12));
    assert_eq!(code, 0, "stderr: {stderr}");
    let v = json_of(&stdout);
    assert_eq!(v["command"], "ass");
    assert_eq!(v["ring"], "ZZ");
    assert_eq!(v["result"]["ass"], serde_json::json!([["2"], ["3"]]));
    assert_eq!(v["provenance"], "proved");
    assert_eq!(v["proved"], true);
}

#[test]
fn supp_prints_a_union_of_prime_closures_as_text() {
    let (stdout, stderr, code) = run(&["-w", "-", "supp", "--module", "M"], Some(Z12));
    assert_eq!(code, 0, "stderr: {stderr}");
    assert!(stdout.contains("V(2)") && stdout.contains("V(3)"), "got: {stdout}");
}

#[test]
fn verify_bijection_suite_matches_known_counts() {
    let (stdout, stderr, code) = run(
        &["verify", "--suite", "dr9_4", "--ring", "Z/12", "--bound", "144", "--format", "json"],
        None,
    );
    assert_eq!(code, 0, "stderr: {stderr}");
    let v = json_of(&stdout);
    assert_eq!(v["result"]["lhs"], 4);
    assert_eq!(v["result"]["rhs"], 4);
    assert_eq!(v["result"]["bijection"], true);
    assert_eq!(v["result"]["passed"], true);
    assert!(
        v["result"]["matching"].as_array().is_some_and(|m| m.len() == 4),
        "an explicit matching should be emitted: {stdout}"
    );
}

#[test]
fn bass_accepts_an_inline_prime_literal() {
    let ws = "ring R = ZZ\nmodule Z = coker [[]]\n";
    let (stdout, stderr, code) = run(
        &["-w", "-", "--format", "json", "bass", "--module", "Z", "--prime", "(2)", "--range", "0..2"],
        Some(ws),
    );
    assert_eq!(code, 0, "stderr: {stderr}");
    let v = json_of(&stdout);
    assert_eq!(v["result"]["nonvanishing"], serde_json::json!([false, true, false]));
    assert_eq!(v["result"]["degrees"], serde_json::json!([0, 2]));
}

#[test]
fn torsion_decomposition_reports_verified_parts() {
    let ws = "ring R = ZZ\nmodule M = coker [[12]]\nprime p = (2)\nset S = closure{ p }\n";
    let (stdout, stderr, code) = run(
        &["-w", "-", "--format", "json", "torsion", "--module", "M", "--set", "S"],
        Some(ws),
    );
    assert_eq!(code, 0, "stderr: {stderr}");
    let v = json_of(&stdout);
    assert_eq!(v["result"]["verified"], true);
    assert_eq!(v["result"]["set"], serde_json::json!([["2"]]));
    assert!(v["result"]["exponent"].as_u64().is_some_and(|e| e >= 1));
}

#[test]
fn spectral_identifies_the_governing_prime() {
    let ws = "ring R = ZZ\nmodule A = coker [[2]]\nmodule B = coker [[12]]\n";
    let (stdout, _, code) =
        run(&["-w", "-", "--format", "json", "spectral", "--module", "A"], Some(ws));
    assert_eq!(code, 0);
    let v = json_of(&stdout);
    assert_eq!(v["result"]["spectral"], true);
    assert_eq!(v["result"]["prime"], serde_json::json!(["2"]));
    let (stdout, _, code) =
        run(&["-w", "-", "--format", "json", "spectral", "--module", "B"], Some(ws));
    assert_eq!(code, 0);
    assert_eq!(json_of(&stdout)["result"]["spectral"], false);
}

#[test]
fn filtration_lists_cyclic_prime_steps() {
    let (stdout, _, code) =
        run(&["-w", "-", "--format", "json", "filtration", "--module", "M"], Some(Z12));
    assert_eq!(code, 0);
    let v = json_of(&stdout);
    assert_eq!(v["result"]["verified"], true);
    assert_eq!(v["result"]["length"], 3, "Z/12 filters through (2), (2), (3): {stdout}");
}

#[test]
fn injres_names_its_candidate_primes() {
    let (stdout, _, code) =
        run(&["-w", "-", "--format", "json", "injres", "--module", "M", "--upto", "2"], Some(Z12));
    assert_eq!(code, 0);
    let v = json_of(&stdout);
    assert_eq!(v["result"]["candidates"], serde_json::json!([[], ["2"], ["3"]]));
    let terms = v["result"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 3);
    assert!(terms[0].as_str().unwrap().contains("E((2))"), "got: {stdout}");
}

#[test]
fn member_queries_cover_sets_points_and_sequences() {
    let ws = "ring R = ZZ\n\
              prime p2 = (2)\n\
              prime p3 = (3)\n\
              set S = closure{ p2 }\n\
              set Y1 = closure{ p2, p3 }\n\
              set E = closure{ }\n\
              points P = { p2 }\n\
              gseq Y = (Y1, E) for R\n\
              module F = coker [[]]\n\
              module T = coker [[2]]\n";
    let member = |module: &str, class: &str, flag: &str, name: &str| {
        let (stdout, stderr, code) = run(
            &["-w", "-", "--format", "json", "member", "--module", module, "--class", class, flag, name],
            Some(ws),
        );
        assert_eq!(code, 0, "member --class {class} failed: {stderr}");
        json_of(&stdout)["result"]["member"].as_bool().unwrap()
    };
    assert!(member("T", "serre", "--set", "S"), "Z/2 lies in the Serre class of V(2)");
    assert!(member("T", "torsion", "--set", "S"));
    assert!(!member("F", "torsion", "--set", "S"), "Z is torsion-free along V(2)");
    assert!(member("F", "torsionfree", "--set", "S"));
    assert!(member("F", "oneres", "--set", "S"));
    assert!(member("T", "psi", "--set", "P"));
    assert!(member("F", "ctilde", "--gseq", "Y"), "the free module generates its own kernel class");
    assert!(!member("T", "ctilde", "--gseq", "Y"), "Z/2 has an associated prime inside Y1");
}

#[test]
fn uncertified_prime_is_a_located_error() {
    let ws = "ring R = ZZ\nprime p = (4)\n";
    let (_, stderr, code) = run(&["-w", "-", "ass", "--module", "p"], Some(ws));
    assert_eq!(code, 1);
    assert!(stderr.contains("<stdin>:2:"), "error should carry a location: {stderr}");
    assert!(stderr.contains("assume prime"), "error should suggest the fix: {stderr}");
}

#[test]
fn matrix_arity_mismatch_is_a_located_error() {
    let ws = "ring R = ZZ\nmodule M = coker [[2, 0], [0]]\n";
    let (_, stderr, code) = run(&["-w", "-", "ass", "--module", "M"], Some(ws));
    assert_eq!(code, 1);
    assert!(stderr.contains("<stdin>:2:"), "got: {stderr}");
    assert!(stderr.contains("equal length"), "got: {stderr}");
}

#[test]
fn usage_errors_set_exit_code_one() {
    let (_, stderr, code) = run(&["verify", "--suite", "nope"], None);
    assert_eq!(code, 1);
    assert!(stderr.contains("unknown suite"), "got: {stderr}");
    let (_, stderr, code) = run(&["ass", "--module", "M"], None);
    assert_eq!(code, 1);
    assert!(stderr.contains("--workspace"), "got: {stderr}");
    let (_, stderr, code) = run(&["-w", "-", "ass", "--module", "X"], Some(Z12));
    assert_eq!(code, 1);
    assert!(stderr.contains("no binding named `X`"), "got: {stderr}");
}

#[test]
fn workspace_file_and_stdin_agree() {
    let path = std::env::temp_dir().join(format!(
        "modspec-test-{}-{}.msp",
        std::process::id(),
        std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).unwrap().as_nanos()
    ));
    std::fs::write(&path, Z12).unwrap();
    let from_file = run(
        &["-w", path.to_str().unwrap(), "--format", "json", "ass", "--module", "M"],
        None,
    );
    let from_stdin = run(&["-w", "-", "--format", "json", "ass", "--module", "M"], Some(Z12));
    std::fs::remove_file(&path).ok();
    assert_eq!(from_file.2, 0);
    assert_eq!(from_file.0, from_stdin.0, "path and stdin input should produce the same report");
}

#[test]
fn print_reaches_a_fixpoint_after_one_pass() {
    let ws = "ring R = QQ[x,y]\n\
              ideal I = (x^2, x*y)\n\
              prime p = (x)\n\
              module M = coker [[x, y], [0, x^2]]\n\
              set S = closure{ p }\n\
              points P = { p }\n";
    let (once, stderr, code) = run(&["-w", "-", "print"], Some(ws));
    assert_eq!(code, 0, "stderr: {stderr}");
    let (twice, _, code) = run(&["-w", "-", "print"], Some(&once));
    assert_eq!(code, 0);
    assert_eq!(once, twice, "printing should be stable under reparsing");
}

#[test]
fn sampled_verify_runs_are_byte_identical_per_seed() {
    let args =
        ["verify", "--suite", "supp_ass", "--seed", "5", "--samples", "6", "--format", "json"];
    let first = run(&args, None);
    let second = run(&args, None);
    assert_eq!(first.2, 0, "stderr: {}", first.1);
    assert_eq!(first.0, second.0, "same seed should reproduce the same bytes");
    let v = json_of(&first.0);
    assert_eq!(v["seed"], 5, "the seed must be echoed in the report");
}
