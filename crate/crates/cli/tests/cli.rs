use std::io::Write;
use std::process::{Command, Output, Stdio};

use num_bigint::BigInt;
use serde_json::Value;
use unimod::{matrix_file, IntMatrix};

fn unimod(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_unimod"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn matrix_from_json(v: &Value) -> IntMatrix {
    let rows: Vec<Vec<BigInt>> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            r.as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_str().unwrap().parse::<BigInt>().unwrap())
                .collect::<Vec<_>>()
        })
        .collect();
    IntMatrix::from_rows(rows).unwrap()
}

#[test]
fn analyze_unimodular_row() {
    let out = unimod(&["analyze", "-", "--mode", "unimodular"], "1 2\n2 3\n");
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["unimodular"], Value::Bool(true));
    assert_eq!(v["minor_gcd"], "1");
}

#[test]
fn analyze_hnf_of_single_row() {
    let out = unimod(&["analyze", "-", "--mode", "hnf"], "1 2\n4 6\n");
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let h = matrix_from_json(&v["H"]);
    let u = matrix_from_json(&v["U"]);
    assert_eq!(h, IntMatrix::from_i64(1, 2, &[0, 2]).unwrap());
    assert_eq!(h.mul(&u).unwrap(), IntMatrix::from_i64(1, 2, &[4, 6]).unwrap());
    assert_eq!(u.determinant().unwrap().to_string(), v["detU"].to_string());
}

#[test]
fn analyze_complete_reports_not_unimodular() {
    let out = unimod(&["analyze", "-", "--mode", "complete"], "1 2\n2 4\n");
    assert_eq!(code(&out), 3);
    let v = json(&out);
    assert_eq!(v["error"], "NotUnimodular");
    assert_eq!(v["gcd"], "2");
}

#[test]
fn analyze_complete_extends_the_rows() {
    let out = unimod(&["analyze", "-", "--mode", "complete"], "2 4\n1 2 3 4\n0 1 5 7\n");
    assert_eq!(code(&out), 0);
    let m = matrix_from_json(&json(&out)["M"]);
    assert_eq!(m.shape(), (4, 4));
    assert_eq!(m.determinant().unwrap().magnitude().to_string(), "1");
    assert_eq!(m.row(2), IntMatrix::from_i64(1, 4, &[1, 2, 3, 4]).unwrap().row(0));
    assert_eq!(m.row(3), IntMatrix::from_i64(1, 4, &[0, 1, 5, 7]).unwrap().row(0));
}

#[test]
fn parse_errors_carry_position() {
    let out = unimod(&["analyze", "-"], "1 2\n4 x\n");
    assert_eq!(code(&out), 2);
    let v = json(&out);
    assert_eq!(v["error"], "Parse");
    assert_eq!(v["line"], 2);
    assert_eq!(v["column"], 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2, column 3"));
}

#[test]
fn comments_and_blank_lines_are_skipped() {
    let out = unimod(&["analyze", "-"], "# fixture\n\n2 3\n\t1 0 0\n# middle\n0  1\t0\n\n");
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["unimodular"], Value::Bool(true));
}

#[test]
fn printed_matrices_reparse_identically() {
    let input = "3 4\n6 -4 10 3\n9 0 -7 12\n-3 8 1 5\n";
    for (mode, parts) in [("hnf", vec!["h", "u"]), ("snf", vec!["s", "l", "r"])] {
        let v = json(&unimod(&["analyze", "-", "--mode", mode], input));
        for part in parts {
            let out = unimod(&["analyze", "-", "--mode", mode, "--format", "matrix", "--part", part], input);
            assert_eq!(code(&out), 0);
            let parsed = matrix_file::parse(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
            assert_eq!(parsed, matrix_from_json(&v[part.to_uppercase()]), "{mode} {part}");
        }
    }
    let completion = unimod(&["analyze", "-", "--mode", "complete", "--format", "matrix"], "1 3\n2 3 5\n");
    let m = matrix_file::parse(std::str::from_utf8(&completion.stdout).unwrap()).unwrap();
    assert_eq!(m.to_string(), String::from_utf8(completion.stdout).unwrap());
}

#[test]
fn format_misuse_is_a_usage_error() {
    assert_eq!(code(&unimod(&["analyze", "-", "--format", "matrix"], "1 2\n1 1\n")), 2);
    assert_eq!(code(&unimod(&["analyze", "-", "--format", "csv"], "1 2\n1 1\n")), 2);
    assert_eq!(code(&unimod(&["analyze", "-", "--mode", "hnf", "--part", "h"], "1 2\n1 1\n")), 2);
    assert_eq!(code(&unimod(&["density", "--k", "1"], "")), 2);
    assert_eq!(code(&unimod(&["frobnicate"], "")), 2);
}

#[test]
fn density_limit_and_local_values() {
    let v = json(&unimod(&["density", "--k", "1", "--n", "2", "--tol", "1e-12"], ""));
    assert!(v["value"].as_str().unwrap().starts_with("0.607927101854"));
    assert!(v["abs_error_bound"].as_f64().unwrap() <= 1e-12);

    let v = json(&unimod(&["limit", "--d", "1", "--tol", "1e-10"], ""));
    assert!(v["value"].as_str().unwrap().starts_with("0.4357570767"));
    assert!(v["terms"]["product_cutoff"].as_u64().is_some());

    let v = json(&unimod(&["local", "--primes", "2,3", "--k", "1", "--n", "2"], ""));
    assert_eq!(v["value"], "2/3");

    let v = json(&unimod(&["zeta", "--j", "2"], ""));
    assert!(v["value"].as_str().unwrap().starts_with("1.644934066848"));
}

#[test]
fn domain_errors_exit_two() {
    for args in [
        vec!["estimate", "--k", "3", "--n", "2", "--bound", "10", "--samples", "1000", "--seed", "1"],
        vec!["density", "--k", "3", "--n", "2"],
        vec!["density", "--k", "1", "--n", "2", "--tol", "1e-40"],
        vec!["local", "--primes", "3,2", "--k", "1", "--n", "2"],
        vec!["zeta", "--j", "1"],
    ] {
        let out = unimod(&args, "");
        assert_eq!(code(&out), 2, "{args:?}");
        assert_eq!(json(&out)["error"], "Domain");
    }
    let out = unimod(&["estimate", "--k", "3", "--n", "2", "--bound", "10", "--samples", "1000", "--seed", "1"], "");
    assert!(json(&out)["message"].as_str().unwrap().contains("k must not exceed n"));
}

#[test]
fn exhaustive_value_and_budget_refusal() {
    let v = json(&unimod(&["exhaustive", "--k", "1", "--n", "2", "--bound", "2"], ""));
    assert_eq!(v["density"], "3/4");
    assert_eq!(v["total"], "16");

    let out = unimod(&["exhaustive", "--k", "2", "--n", "3", "--bound", "10", "--budget", "1000"], "");
    assert_eq!(code(&out), 4);
    assert_eq!(json(&out)["error"], "BudgetExceeded");
    assert_eq!(json(&out)["required"], "64000000");
}

#[test]
fn estimate_is_reproducible() {
    let args = ["estimate", "--k", "1", "--n", "2", "--bound", "1000000", "--samples", "100000", "--seed", "42"];
    let a = unimod(&args, "");
    let b = unimod(&args, "");
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert!(v["z_score"].as_f64().is_some());
    assert_eq!(v["seed"], "42");
}

#[test]
fn sweep_csv_has_one_row_per_bound() {
    let out = unimod(
        &["sweep", "--k", "1", "--n", "2", "--bounds", "2,10,100", "--samples", "1000", "--seed", "5", "--format", "csv"],
        "",
    );
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "B,samples,hits,estimate,std_error,theory,z");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("2,16,12,0.75,"));

    let v = json(&unimod(&["sweep", "--k", "1", "--n", "2", "--bounds", "2,10", "--samples", "1000", "--seed", "5"], ""));
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn verify_local_reports_agreement() {
    let v = json(&unimod(&["verify-local", "--p", "3", "--k", "2", "--n", "3"], ""));
    assert_eq!(v["equal"], Value::Bool(true));
    assert_eq!(v["full_rank"], v["formula_count"]);
}
