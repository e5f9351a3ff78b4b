//! End-to-end tests driving the installed binary: output formats, exit
//! codes, JSON shape, and determinism.

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

/// Runs the binary with `ORE_SEED` scrubbed; returns (exit code, stdout,
/// stderr).
fn weylq(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_weylq"))
        .args(args)
        .env_remove("ORE_SEED")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("stdout is UTF-8"),
        String::from_utf8(out.stderr).expect("stderr is UTF-8"),
    )
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("weylq-cli-tests");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join(name);
    std::fs::write(&path, contents).expect("write temp file");
    path
}

fn json_of(stdout: &str) -> Value {
    serde_json::from_str(stdout.trim()).expect("stdout is one JSON document")
}

#[test]
fn eval_prints_normal_forms() {
    let (code, out, _) = weylq(&["eval", "d1*x1", "--m", "1"]);
    assert_eq!((code, out.as_str()), (0, "x1*d1 + 1\n"));
    let (code, out, _) = weylq(&["eval", "(x1+d1)^2", "--m", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out, "x1^2 + 2*x1*d1 + d1^2 + 1\n");
    let (code, out, _) = weylq(&["eval", "x1^2 - 1/2", "--m", "1"]);
    assert_eq!((code, out.as_str()), (0, "x1^2 - 1/2\n"));
}

#[test]
fn eval_round_trips_its_own_output() {
    for src in ["d1^2*x1^2", "(1/3 + x2*d1)^3", "d2*d1*x2", "0", "2 - x1*d1"] {
        let (code, once, _) = weylq(&["eval", src, "--m", "2"]);
        assert_eq!(code, 0, "{src}");
        // "--" lets an expression that starts with '-' through flag parsing.
        let (code, twice, _) = weylq(&["eval", "--m", "2", "--", once.trim()]);
        assert_eq!(code, 0, "re-parsing {once:?}");
        assert_eq!(twice, once);
    }
}

#[test]
fn eval_and_mul_accept_operator_files() {
    let path = write_temp("ops.txt", "d1\n\nx1\n");
    let p = path.to_str().unwrap();
    let (code, out, _) = weylq(&["eval", "--m", "1", "--file", p]);
    assert_eq!((code, out.as_str()), (0, "d1\nx1\n"));
    let (code, out, _) = weylq(&["mul", "--m", "1", "--file", p]);
    assert_eq!((code, out.as_str()), (0, "x1*d1 + 1\n"));
}

#[test]
fn mul_is_left_to_right() {
    let (code, out, _) = weylq(&["mul", "--m", "2", "d1", "x1", "x2"]);
    assert_eq!((code, out.as_str()), (0, "x1*x2*d1 + x2\n"));
    // A product of one factor is that factor.
    let (code, out, _) = weylq(&["mul", "--m", "2", "x2^2"]);
    assert_eq!((code, out.as_str()), (0, "x2^2\n"));
}

#[test]
fn deg_reports_all_filtrations() {
    let (code, out, _) = weylq(&[
        "deg", "x1*d1^2 + x2", "--m", "2", "--k", "1", "--json",
    ]);
    assert_eq!(code, 0);
    let v = json_of(&out);
    assert_eq!(v["bernstein"], 3);
    assert_eq!(v["ord"], 2);
    assert_eq!(v["ord_outside"], 0);
    assert_eq!(v["deg_with"], 3);
    // Without --k the relative degrees are null; zero has degree -1.
    let v = json_of(&weylq(&["deg", "0", "--m", "1", "--json"]).1);
    assert_eq!(v["bernstein"], -1);
    assert_eq!(v["ord"], -1);
    assert!(v["ord_outside"].is_null());
}

#[test]
fn syz_finds_cofactors_and_certifies_absence() {
    let (code, out, _) = weylq(&["syz", "--m", "1", "--k", "", "x1", "x1^2", "--json"]);
    assert_eq!(code, 0);
    let v = json_of(&out);
    assert_eq!(v["status"], "OK");
    let cofs: Vec<String> = v["cofactors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap().to_string())
        .collect();
    assert_eq!(cofs.len(), 2);
    // sum b_i c_i = 0, checked through the binary itself.
    let lhs = format!("x1*({}) + x1^2*({})", cofs[0], cofs[1]);
    let (code, out, _) = weylq(&["eval", &lhs, "--m", "1"]);
    assert_eq!((code, out.as_str()), (0, "0\n"));
    // A single nonzero operator has no syzygy: certified, exit 2.
    let (code, out, _) = weylq(&["syz", "--m", "1", "x1"]);
    assert_eq!(code, 2);
    assert!(out.contains("NONE"));
    // Below the needed degree with a user cap: inconclusive, exit 3.
    let (code, out, _) = weylq(&["syz", "--m", "1", "--k", "", "--max-degree", "0", "x1", "x1^2"]);
    assert_eq!(code, 3);
    assert!(out.contains("UNDECIDED_AT_CAP"));
}

#[test]
fn clm_value_matches_both_products() {
    let (code, out, _) = weylq(&["clm", "--m", "1", "d1", "x1", "--json"]);
    assert_eq!(code, 0);
    let v = json_of(&out);
    assert_eq!(v["status"], "OK");
    assert_eq!(v["equation"], "value = b[i] * c[i]");
    let value = v["value"].as_str().unwrap();
    let bs = ["d1", "x1"];
    for (i, c) in v["cofactors"].as_array().unwrap().iter().enumerate() {
        let product = format!("({})*({})", bs[i], c.as_str().unwrap());
        let (_, normalized, _) = weylq(&["eval", &product, "--m", "1"]);
        assert_eq!(normalized.trim(), value, "component {i}");
    }
    assert_ne!(weylq(&["eval", value, "--m", "1"]).1.trim(), "0");
}

#[test]
fn qinv_diagonalizes_and_reports_singularity() {
    let path = write_temp(
        "qinv.json",
        r#"{"m":1,"field":"q","K_den":[1],"A":[["d1","1"],["x1","d1"]]}"#,
    );
    let (code, out, _) = weylq(&["qinv", "--file", path.to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    let v = json_of(&out);
    assert_eq!(v["status"], "OK");
    let c = v["quasi_inverse"].as_array().unwrap();
    let diag = v["diagonal"].as_array().unwrap();
    let b = [["d1", "1"], ["x1", "d1"]];
    // C * B is diagonal with the reported nonzero diagonal.
    for i in 0..2 {
        for j in 0..2 {
            let sum = format!(
                "({})*({}) + ({})*({})",
                c[i][0].as_str().unwrap(),
                b[0][j],
                c[i][1].as_str().unwrap(),
                b[1][j]
            );
            let (_, normalized, _) = weylq(&["eval", &sum, "--m", "1"]);
            if i == j {
                assert_eq!(normalized.trim(), diag[i].as_str().unwrap());
                assert_ne!(normalized.trim(), "0");
            } else {
                assert_eq!(normalized.trim(), "0", "entry ({i},{j})");
            }
        }
    }
    let singular = write_temp(
        "qinv-singular.json",
        r#"{"m":1,"field":"q","K_den":[1],"A":[["d1","d1"],["d1","d1"]]}"#,
    );
    let (code, out, _) = weylq(&["qinv", "--file", singular.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("SINGULAR"));
}

#[test]
fn solve_decides_the_three_contract_fixtures() {
    // x1 * V = 1 over polynomial denominators: solvable.
    let s1 = write_temp(
        "solve1.json",
        r#"{"m":1,"field":"q","K_den":[],"A":[["x1"]],"rhs":["1"]}"#,
    );
    let (code, out, _) = weylq(&["solve", "--file", s1.to_str().unwrap(), "--method", "elim"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("status: SOLVED"));
    assert!(out.contains("V1 = 1 * (x1)^-1"));

    // d1 * V = 1 with no derivations in denominators: certified unsolvable.
    let s2 = write_temp(
        "solve2.json",
        r#"{"m":1,"field":"q","K_den":[],"A":[["d1"]],"rhs":["1"]}"#,
    );
    let (code, out, _) = weylq(&["solve", "--file", s2.to_str().unwrap()]);
    assert_eq!(code, 2, "{out}");
    assert!(out.contains("status: UNSOLVABLE"));

    // Same equation, but d1 allowed in denominators: solvable.
    let s3 = write_temp(
        "solve3.json",
        r#"{"m":1,"field":"q","K_den":[1],"A":[["d1"]],"rhs":["1"]}"#,
    );
    let (code, out, _) = weylq(&["solve", "--file", s3.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("V1 = 1 * (d1)^-1"));
}

#[test]
fn solve_methods_agree_and_emit_stable_json() {
    let path = write_temp(
        "solve-both.json",
        r#"{"m":1,"field":"q","K_den":[],"A":[["x1"]],"rhs":["1"]}"#,
    );
    let p = path.to_str().unwrap();
    let (code, elim, _) = weylq(&["solve", "--file", p, "--method", "elim", "--json"]);
    assert_eq!(code, 0);
    let (code, ansatz, _) = weylq(&["solve", "--file", p, "--method", "ansatz", "--json"]);
    assert_eq!(code, 0);
    let (ve, va) = (json_of(&elim), json_of(&ansatz));
    for v in [&ve, &va] {
        assert_eq!(v["status"], "SOLVED");
        assert!(v["certificates"].is_array());
        assert_eq!(v["solution"][0], "1 * (x1)^-1");
    }
}

#[test]
fn solve_respects_max_degree_cap() {
    let path = write_temp(
        "solve-capped.json",
        r#"{"m":1,"field":"q","K_den":[],"A":[["x1"]],"rhs":["1"]}"#,
    );
    // A budget too small for even the input degree is inconclusive.
    let (code, out, _) = weylq(&[
        "solve",
        "--file",
        path.to_str().unwrap(),
        "--max-degree",
        "0",
    ]);
    assert_eq!(code, 3, "{out}");
    assert!(out.contains("UNDECIDED_AT_CAP"));
}

#[test]
fn hk_reports_the_line_module() {
    let path = write_temp("hk-line.json", r#"{"m":2,"field":"q","A":[["d1"]]}"#);
    let (code, out, _) = weylq(&["hk", "--file", path.to_str().unwrap(), "--zmax", "6", "--json"]);
    assert_eq!(code, 0, "{out}");
    let v = json_of(&out);
    assert_eq!(v["status"], "OK");
    assert_eq!(v["t"], 1);
    assert_eq!(v["l"], "1");
    assert_eq!(v["poly"], serde_json::json!(["1", "1"]));
    let hf = v["hf"].as_array().unwrap();
    assert_eq!(hf.len(), 7);
    for (z, pair) in hf.iter().enumerate() {
        assert_eq!(pair[0], z as u64);
        assert_eq!(pair[1], z as u64 + 1);
    }
    assert_eq!(v["monte_carlo"], true);
}

#[test]
fn hk_with_too_few_points_is_inconclusive() {
    let path = write_temp("hk-short.json", r#"{"m":1,"field":"q","A":[["d1"]]}"#);
    let (code, out, _) = weylq(&["hk", "--file", path.to_str().unwrap(), "--zmax", "1"]);
    assert_eq!(code, 3, "{out}");
    assert!(out.contains("NOT_STABILIZED"));
}

#[test]
fn bezout_reports_bounds_and_exit_codes() {
    let path = write_temp("bez-line.json", r#"{"m":2,"field":"q","A":[["d1"]]}"#);
    let (code, out, _) = weylq(&[
        "bezout", "--file", path.to_str().unwrap(), "--zmax", "6", "--json",
    ]);
    assert_eq!(code, 0, "{out}");
    let v = json_of(&out);
    assert_eq!(v["status"], "BOUND_SATISFIED");
    assert_eq!(v["bounds"]["bezout"], "256");
    assert_eq!(v["bounds"]["kolchin_sum"], 1);
    assert_eq!(v["bounds"]["satisfied"], true);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let path = write_temp("det.json", r#"{"m":2,"field":"q","A":[["d1","x2"]]}"#);
    let args = [
        "bezout",
        "--file",
        path.to_str().unwrap(),
        "--zmax",
        "5",
        "--seed",
        "42",
        "--json",
    ];
    let (c1, first, _) = weylq(&args);
    let (c2, second, _) = weylq(&args);
    assert_eq!(c1, c2);
    assert_eq!(first, second);
    let solve_args = [
        "solve",
        "--file",
        "/nonexistent-weylq.json",
    ];
    // Missing files are usage errors.
    assert_eq!(weylq(&solve_args).0, 1);
}

#[test]
fn parse_and_usage_failures_exit_1() {
    let (code, _, err) = weylq(&["eval", "x1 +", "--m", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("position"), "{err}");
    let (code, _, err) = weylq(&["eval", "x9", "--m", "2"]);
    assert_eq!(code, 1);
    assert!(err.contains("index out of range"), "{err}");
    assert_eq!(weylq(&["nonsense"]).0, 1);
    assert_eq!(weylq(&["eval", "--m", "1"]).0, 1);
    let (code, _, err) = weylq(&["eval", "1", "--m", "1", "--field", "fp:9"]);
    assert_eq!(code, 1);
    assert!(err.contains("field"), "{err}");
    // Help and version are successes.
    assert_eq!(weylq(&["--help"]).0, 0);
    assert_eq!(weylq(&["--version"]).0, 0);
}

#[test]
fn prime_fields_reduce_coefficients() {
    let (code, out, _) = weylq(&["eval", "7*x1 + 3", "--m", "1", "--field", "fp:5"]);
    assert_eq!((code, out.as_str()), (0, "2*x1 + 3\n"));
    let (code, _, err) = weylq(&["eval", "1/5", "--m", "1", "--field", "fp:5"]);
    assert_eq!(code, 1);
    assert!(err.contains("denominator"), "{err}");
}

#[test]
fn system_files_are_validated() {
    let bad_shape = write_temp(
        "bad-shape.json",
        r#"{"m":1,"field":"q","A":[["x1"],["d1","1"]]}"#,
    );
    let (code, _, err) = weylq(&["solve", "--file", bad_shape.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("row"), "{err}");
    let bad_k = write_temp("bad-k.json", r#"{"m":1,"field":"q","K_den":[2],"A":[["x1"]]}"#);
    let (code, _, err) = weylq(&["solve", "--file", bad_k.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("K_den"), "{err}");
    let bad_expr = write_temp("bad-expr.json", r#"{"m":1,"field":"q","A":[["x1*"]]}"#);
    let (code, _, err) = weylq(&["solve", "--file", bad_expr.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("A[0][0]"), "{err}");
}
