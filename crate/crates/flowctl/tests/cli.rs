use std::process::{Command, Output};

use serde_json::Value;

fn flowctl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flowctl"))
        .args(args)
        .env_remove("FLOWCTL_PRECISION")
        .output()
        .expect("run flowctl")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = flowctl(&all);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn num(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

fn re(v: &Value) -> f64 {
    num(&v[0])
}

fn im(v: &Value) -> f64 {
    num(&v[1])
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn iterate_json_schema() {
    let v = json(&["iterate", "--preset", "logistic", "--r", "4", "--order", "6", "--t", "0.5"]);
    for key in ["order", "t", "taylor", "monomial", "weights", "diagnostics"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["order"], 6);
    assert_eq!(v["taylor"].as_array().unwrap().len(), 6);
    assert!(close(re(&v["taylor"][0]), 2.0, 1e-14));
    assert!(close(re(&v["taylor"][1]), -4.0 / 3.0, 1e-14));
    assert!(close(re(&v["monomial"][1]), -2.0 / 3.0, 1e-14));
    assert!(num(&v["diagnostics"]["form_deviation"]) < 1e-6);
    assert!(v["timing_ms"].is_null());
}

#[test]
fn iterate_boundary_times() {
    let id = json(&["iterate", "--preset", "logistic", "--r", "4", "--t", "0"]);
    let taylor = id["taylor"].as_array().unwrap();
    assert!(close(re(&taylor[0]), 1.0, 1e-14));
    assert!(taylor[1..].iter().all(|c| re(c).abs() < 1e-12 && im(c).abs() < 1e-12));
    let one = json(&["iterate", "--coeffs", "3,-2,0.5", "--t", "1"]);
    let taylor = one["taylor"].as_array().unwrap();
    for (c, want) in taylor.iter().zip([3.0, -2.0, 0.5]) {
        assert!(close(re(c), want, 1e-12));
    }
}

#[test]
fn numbers_use_fixed_significant_digits() {
    let out = flowctl(&["iterate", "--preset", "logistic", "--r", "4", "--t", "0.5", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,taylor_re,taylor_im,monomial_re,monomial_im,weight_re,weight_im");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let mantissa = row[1].split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(mantissa.len(), 15);
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn output_is_deterministic() {
    let args = ["modes", "--preset", "logistic", "--r", "2.5", "--order", "5", "--format", "json"];
    assert_eq!(flowctl(&args).stdout, flowctl(&args).stdout);
}

#[test]
fn orbit_single_point() {
    let v = json(&["orbit", "--preset", "logistic", "--r", "4", "--x0", "0.01", "--t-start", "0", "--t-end", "0", "--steps", "1"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(re(&rows[0]["t"]), 0.0);
    assert!(close(re(&rows[0]["x"]), 0.01, 1e-14));
}

#[test]
fn orbit_matches_direct_iteration() {
    let v = json(&["orbit", "--preset", "logistic", "--r", "4", "--x0", "1e-3", "--t-end", "3", "--steps", "3"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let mut x: f64 = 1e-3;
    for row in rows {
        let direct = re(&row["direct"]);
        assert!(close(direct, x, 1e-15));
        assert!(close(re(&row["x"]), direct, 1e-8), "{} vs {direct}", re(&row["x"]));
        let modes: f64 = row["modes"].as_array().unwrap().iter().map(re).sum();
        assert!(close(modes, re(&row["x"]), 1e-10));
        x = 4.0 * x * (1.0 - x);
    }
}

#[test]
fn orbit_row_count() {
    let out = flowctl(&["orbit", "--preset", "expm1", "--c", "0.5", "--x0", "0.1", "--t-end", "2", "--steps", "8", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 9);
    assert!(text.starts_with("t_re,t_im,x_re,x_im,x1_re,x1_im,"));
    // integer rows carry the direct reference, fractional rows leave it empty
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert!(!rows[0].ends_with(",,"));
    assert!(rows[1].ends_with(",,"));
    assert!(!rows[4].ends_with(",,"));
}

#[test]
fn shifted_orbit_returns_to_user_coordinates() {
    // 4x(1-x) around its fixed point 3/4, where the multiplier is -2
    let base = ["--preset", "logistic", "--r", "4", "--shift", "0.75", "--order", "6"];
    let mut args = vec!["modes"];
    args.extend(base);
    assert!(close(re(&json(&args)["multiplier"]), -2.0, 1e-15));
    let mut args = vec!["orbit", "--x0", "0.7501", "--t-end", "2", "--steps", "4"];
    args.extend(base);
    let v = json(&args);
    let rows = v["rows"].as_array().unwrap();
    assert!(close(re(&rows[0]["x"]), 0.7501, 1e-14));
    let mut x: f64 = 0.7501;
    for step in [0, 2, 4] {
        assert!(close(re(&rows[step]["x"]), x, 1e-10));
        x = 4.0 * x * (1.0 - x);
    }
    // a negative multiplier makes fractional times complex
    assert!(im(&rows[1]["x"]).abs() > 1e-6);
}

#[test]
fn modes_of_linear_map() {
    let v = json(&["modes", "--preset", "linear", "--a", "3", "--order", "4"]);
    let modes = v["modes"].as_array().unwrap();
    assert_eq!(modes.len(), 4);
    for (k, m) in modes.iter().enumerate() {
        for (r, c) in m["taylor"].as_array().unwrap().iter().enumerate() {
            let want = if k == 0 && r == 0 { 1.0 } else { 0.0 };
            assert!((re(c) - want).abs() < 1e-14 && im(c).abs() < 1e-14);
        }
    }
    assert!(close(re(&modes[2]["factor"]), 27.0, 1e-15));
}

#[test]
fn modes_residuals_for_logistic() {
    let v = json(&["modes", "--preset", "logistic", "--r", "4", "--order", "5"]);
    let r = &v["residuals"];
    assert!(num(&r["identity"]) < 1e-8);
    assert!(num(&r["reconstruction"]) < 1e-8);
    assert_eq!(r["pass"], true);
    assert_eq!(v["composition"].as_array().unwrap().len(), 25);
}

#[test]
fn modes_table_lists_leading_coefficients() {
    let out = flowctl(&["modes", "--preset", "logistic", "--r", "4", "--order", "5", "--real-tol", "1e-12"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("k  a^k"));
    assert!(text.contains("1.02400e+3"));
    assert!(!text.contains("(4.00000e+0"));
}

#[test]
fn real_tol_only_affects_tables() {
    let v = json(&["iterate", "--preset", "linear", "--a", "-2", "--order", "3", "--t", "0.5", "--real-tol", "1"]);
    assert!(im(&v["taylor"][0]).abs() > 1.0);
    let table = flowctl(&["iterate", "--preset", "linear", "--a", "2", "--order", "2", "--t", "0.5", "--real-tol", "1e-12"]);
    let text = String::from_utf8(table.stdout).unwrap();
    assert!(text.contains("1.41421e+0"));
    assert!(!text.contains("(1.41421e+0"));
}

#[test]
fn verify_logistic_passes() {
    let v = json(&["verify", "--preset", "logistic", "--r", "4", "--order", "6", "--t", "0.25,0.5,1.5"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["exact_oracle"], true);
    let checks = v["checks"].as_array().unwrap();
    let names: Vec<&str> = checks.iter().map(|c| c["name"].as_str().unwrap()).collect();
    for want in ["projector_idempotence", "mode_evolution@0.5", "determinant@1.5", "semigroup@0.25,1.5", "exact_inverse"] {
        assert!(names.contains(&want), "missing {want}");
    }
    assert!(checks.iter().all(|c| c["pass"] == true));
}

#[test]
fn verify_without_exact_oracle() {
    let v = json(&["verify", "--coeffs", "0.5,0.3", "--order", "5", "--t", "0.5,-0.5"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["exact_oracle"], false);
}

#[test]
fn verify_identity_is_trivially_zero() {
    let v = json(&["verify", "--preset", "linear", "--a", "1", "--order", "5"]);
    assert_eq!(v["pass"], true);
    for c in v["checks"].as_array().unwrap() {
        assert_eq!(num(&c["residual"]), 0.0, "{}", c["name"]);
    }
}

#[test]
fn degenerate_spectrum_exit_code() {
    let out = flowctl(&["verify", "--preset", "logistic", "--r", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "degenerate_spectrum");
    assert_eq!(v["error"]["first"], 1);
    assert_eq!(v["error"]["second"], 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("collide"));
    let out = flowctl(&["iterate", "--preset", "logistic", "--r", "-1", "--t", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verification_failure_exit_code() {
    let out = flowctl(&["verify", "--preset", "logistic", "--r", "4", "--tol", "1e-40", "--format", "json"]);
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], false);
    assert!(!v["failed"].as_array().unwrap().is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("verification failed"));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["iterate", "--preset", "logistic", "--t", "0.5"],
        vec!["iterate", "--preset", "logistic", "--a", "2", "--t", "0.5"],
        vec!["iterate", "--t", "0.5"],
        vec!["iterate", "--coeffs", "1,x", "--t", "0.5"],
        vec!["iterate", "--coeffs", "0.5", "--constant", "1", "--t", "0.5"],
        vec!["iterate", "--preset", "logistic", "--r", "0", "--t", "0.5"],
        vec!["iterate", "--preset", "logistic", "--r", "4", "--order", "0", "--t", "0.5"],
        vec!["orbit", "--preset", "logistic", "--r", "4", "--x0", "0.1", "--t-end", "1", "--steps", "0"],
        vec!["frobnicate"],
    ] {
        let out = flowctl(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(flowctl(&["--help"]).status.code(), Some(0));
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_flowctl"))
        .args(["iterate", "--preset", "logistic", "--r", "4", "--order", "4", "--t", "0.5", "--format", "json"])
        .env("FLOWCTL_PRECISION", "double")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["input"]["precision"], "double");
    assert_eq!(json(&["iterate", "--preset", "logistic", "--r", "4", "--t", "0.5"])["input"]["precision"], "extended");
}

#[test]
fn constant_term_with_shift() {
    // 1 + x/2 has the fixed point 2 and multiplier 1/2; its flow is 2 + (x - 2) 2^-t
    let v = json(&["orbit", "--coeffs", "0.5", "--constant", "1", "--shift", "2", "--order", "3", "--x0", "3", "--t-end", "1", "--steps", "2"]);
    let rows = v["rows"].as_array().unwrap();
    assert!(close(re(&rows[1]["x"]), 2.0 + 0.5f64.sqrt(), 1e-14));
    assert!(close(re(&rows[2]["x"]), 2.5, 1e-14));
}

#[test]
fn timing_flag() {
    let v = json(&["iterate", "--preset", "logistic", "--r", "4", "--t", "0.5", "--timing"]);
    assert!(num(&v["timing_ms"]) >= 0.0);
}

#[test]
fn large_modes_raise_a_warning() {
    // multiplier 1.01 at N = 8: modes near 1e18 swamp the kernel accuracy
    let v = json(&["iterate", "--coeffs", "1.01,1", "--order", "8", "--t", "0.5"]);
    assert!(num(&v["diagnostics"]["conditioning"]["error_estimate"]) > 1.0);
    assert_eq!(v["diagnostics"]["warnings"].as_array().unwrap().len(), 1);
    let out = flowctl(&["verify", "--coeffs", "1.01,1", "--order", "8"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&["iterate", "--preset", "logistic", "--r", "4", "--t", "0.5"]);
    assert!(num(&v["diagnostics"]["conditioning"]["error_estimate"]) < 1e-15);
    assert!(v["diagnostics"]["warnings"].as_array().unwrap().is_empty());
}
