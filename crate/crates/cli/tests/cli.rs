use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_bivariate"));
    c.env_remove("BIVARIATE_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn convolve_and_inverse_values() {
    let o = run(&["convolve", "--f", "one", "--g", "one", "--n1", "4", "--n2", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "3\n");
    assert_eq!(stdout(&run(&["inverse", "--f", "gcd", "--n1", "1", "--n2", "1"])), "1\n");
    assert_eq!(stdout(&run(&["inverse", "--f", "gcd", "--n1", "4", "--n2", "4"])), "-2\n");
    assert_eq!(stdout(&run(&["convolve", "--f", "tau_k:2", "--g", "mu_k:2", "--n1", "12", "--n2", "18"])), "0\n");
    let real = stdout(&run(&["convolve", "--f", "phi_ratio", "--g", "one", "--n1", "1", "--n2", "1"]));
    assert_eq!(real, "1\n");
}

#[test]
fn unknown_names_are_usage_errors() {
    assert_eq!(run(&["inverse", "--f", "nosuch", "--n1", "1", "--n2", "1"]).status.code(), Some(2));
    assert_eq!(run(&["convolve", "--f", "one", "--g", "x", "--n1", "1", "--n2", "1"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--suite", "nosuch"]).status.code(), Some(2));
    assert_eq!(run(&["constant", "--example", "10"]).status.code(), Some(2));
    assert_eq!(run(&["constant", "--example", "5"]).status.code(), Some(2));
    assert_eq!(run(&["converge", "--function", "gcd", "--variant", "th9", "--xs", "10"]).status.code(), Some(2));
    assert_eq!(run(&["converge", "--function", "gcd", "--xs", "100,10"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["--threads", "0", "check", "--suite", "lemma7"]).status.code(), Some(2));
}

#[test]
fn check_reports_pass_lines_and_summary() {
    for suite in ["lemma10", "lemma7"] {
        let o = run(&["check", "--suite", suite]);
        assert_eq!(o.status.code(), Some(0), "{suite}");
        let text = stdout(&o);
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[..lines.len() - 1].iter().all(|l| l.starts_with("PASS ")));
        let summary: serde_json::Value = serde_json::from_str(lines.last().unwrap()).unwrap();
        assert_eq!(summary["pass"], true);
    }
}

#[test]
fn converge_csv_layout() {
    let o = run(&["converge", "--function", "gcd", "--variant", "th1", "--xs", "1000,10000"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,raw_sum,normalized,target,abs_err,rel_err");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("1000,4449880,"));
    let target: f64 = lines[1].split(',').nth(3).unwrap().parse().unwrap();
    assert!((target - 0.6079271019).abs() < 1e-10);
    assert!(lines[3].starts_with("# fit c0="));
}

#[test]
fn converge_delta_and_sigma_gcd() {
    let text = stdout(&run(&["converge", "--function", "delta", "--variant", "th1", "--xs", "100"]));
    let normalized: f64 = text.lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    let want = 1.0 / (100f64.powi(2) * 100f64.ln());
    assert!((normalized - want).abs() < 1e-13 * want);
    assert!(text.contains("# fit c0=nan c1=nan"));

    let o = run(&["converge", "--function", "sigma_gcd", "--variant", "th2ii", "--k", "1", "--xs", "1000000"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(text.lines().count(), 3);
    assert_eq!(row[3], "1");
}

#[test]
fn csv_is_byte_stable_across_runs_and_threads() {
    let args = ["converge", "--example", "7", "--xs", "1000,20000"];
    let a = bin().args(args).output().unwrap().stdout;
    let b = bin().args(args).output().unwrap().stdout;
    let c = bin().args(args).env("BIVARIATE_THREADS", "3").output().unwrap().stdout;
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn budget_abort_flushes_partial_csv() {
    let o = run(&["--point-budget", "50000", "converge", "--function", "lcm", "--variant", "th1", "--xs", "100,1000"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4, "{text}");
    assert!(lines[1].starts_with("100,"));
    assert_eq!(*lines.last().unwrap(), "# aborted");
}

#[test]
fn thread_flag_wins_over_environment_and_is_echoed() {
    let o = bin().args(["constant", "--example", "3", "--pmax", "1000"]).env("BIVARIATE_THREADS", "3").output().unwrap();
    assert_eq!(json(&o)["threads"], 3);
    let o = bin()
        .args(["--threads", "2", "constant", "--example", "3", "--pmax", "1000"])
        .env("BIVARIATE_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(json(&o)["threads"], 2);
    let o = bin().args(["converge", "--function", "gcd", "--xs", "10", "--format", "json", "--threads", "2"]).output().unwrap();
    let v = json(&o);
    assert_eq!(v["threads"], 2);
    assert!(v["fit"].is_null());
    assert_eq!(v["rows"][0]["raw_sum"], 189);
}

#[test]
fn constant_fields() {
    let v = json(&run(&["constant", "--example", "7"]));
    for f in ["example", "k", "product_value", "per_prime_tail", "pmax", "closed_form_value"] {
        assert!(!v[f].is_null(), "missing {f}");
    }
    assert_eq!(v["closed_form"], "2/pi^2");
    assert!((v["product_value"].as_f64().unwrap() - 0.2026423672).abs() < 1e-10);
    let v = json(&run(&["constant", "--example", "1", "--k", "1", "--pmax", "1000"]));
    assert_eq!(v["value"], 1.0);
    assert!((v["product_value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let v = json(&run(&["constant", "--example", "2", "--pmax", "1000"]));
    assert!(v["closed_form_value"].is_null());
    assert!(v["product_value"].as_f64().unwrap() > 0.0);
}

#[test]
fn output_file_receives_report() {
    let path = std::env::temp_dir().join(format!("bivariate-cli-test-{}.csv", std::process::id()));
    let o = run(&["converge", "--function", "one", "--xs", "10,20", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(text.starts_with("x,raw_sum,"));
    assert!(text.contains("\n10,100,"));
}
