use std::path::Path;
use std::process::{Command, Output};

fn wpvol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wpvol"))
        .args(args)
        .env_remove("WPVOL_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no `{key}` in {text}"))
        .to_string()
}

#[test]
fn eval_exact_forms() {
    let o = wpvol(&["eval", "--g", "1", "--n", "1", "--x", "0"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("V_(1,1)(0) = pi^2/6\n"));
    let o = wpvol(&["eval", "--g", "0", "--n", "4", "--x", "1,1,1,1"]);
    assert!(stdout(&o).starts_with("V_(0,4)(1,1,1,1) = 2*pi^2 + 2\n"));
    let o = wpvol(&["eval", "--g", "0", "--n", "3", "--x", "3/2,7,0.25"]);
    assert!(stdout(&o).starts_with("V_(0,3)(3/2,7,0.25) = 1\n"));
    let o = wpvol(&["--convention", "half", "eval", "--g", "1", "--n", "1"]);
    assert!(stdout(&o).starts_with("V_(1,1)(0) = pi^2/12\n"));
    let o = wpvol(&["eval", "--g", "1", "--n", "1", "--x", "2.5e-1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("~ 1.6"));
}

#[test]
fn eval_errors() {
    let o = wpvol(&["eval", "--g", "0", "--n", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid signature"));
    let o = wpvol(&["eval", "--g", "1", "--n", "1", "--x", "1,2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = wpvol(&["--precision", "32", "eval", "--g", "1", "--n", "1"]);
    assert!(!o.status.success());
}

#[test]
fn fill_counts_and_warm_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("table.txt");
    let c = cache.to_str().unwrap();
    let o = wpvol(&["--cache", c, "fill", "--chi-max", "1"]);
    assert_eq!(field(&stdout(&o), "signatures"), "2");
    let o = wpvol(&["--cache", c, "fill", "--chi-max", "2", "--n-max", "4"]);
    let text = stdout(&o);
    assert_eq!(field(&text, "signatures"), "4");
    assert_ne!(field(&text, "computed"), "0");
    let first = std::fs::read(&cache).unwrap();
    assert!(String::from_utf8_lossy(&first).contains("\n0 4 |"));
    assert!(String::from_utf8_lossy(&first).contains("\n1 2 |"));
    let o = wpvol(&["--cache", c, "fill", "--chi-max", "2", "--n-max", "4"]);
    assert_eq!(field(&stdout(&o), "computed"), "0");
    assert_eq!(std::fs::read(&cache).unwrap(), first);
}

#[test]
fn cache_from_environment_and_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("env.txt");
    let o = Command::new(env!("CARGO_BIN_EXE_wpvol"))
        .args(["fill", "--chi-max", "3", "--n-max", "2"])
        .env("WPVOL_CACHE", &cache)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(Path::new(&cache).exists());
    let c = cache.to_str().unwrap();
    let o = wpvol(&[
        "--cache",
        c,
        "--convention",
        "half",
        "eval",
        "--g",
        "1",
        "--n",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("convention mismatch"));
    let o = wpvol(&[
        "--cache",
        c,
        "--no-cache",
        "--convention",
        "half",
        "eval",
        "--g",
        "1",
        "--n",
        "1",
    ]);
    assert!(o.status.success());
}

#[test]
fn residual_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = |threads: &'static str, out: &str| {
        vec![
            "--threads".to_string(),
            threads.to_string(),
            "--out".to_string(),
            out.to_string(),
            "residuals".to_string(),
            "--g-min".to_string(),
            "2".to_string(),
            "--g-max".to_string(),
            "3".to_string(),
            "--n".to_string(),
            "2".to_string(),
            "--grid".to_string(),
            "0.5,4".to_string(),
        ]
    };
    let o1 = dir.path().join("a.csv");
    let o2 = dir.path().join("b.csv");
    let run = |a: Vec<String>| {
        let a: Vec<&str> = a.iter().map(|s| s.as_str()).collect();
        assert!(wpvol(&a).status.success());
    };
    run(args("1", o1.to_str().unwrap()));
    run(args("3", o2.to_str().unwrap()));
    let a = std::fs::read_to_string(&o1).unwrap();
    assert_eq!(a, std::fs::read_to_string(&o2).unwrap());
    let mut lines = a.lines();
    assert_eq!(lines.next(), Some("g,n,x,exact_ratio,F0,F1,FN,R0,R1,RN"));
    let zero: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&zero[..3], &["2", "2", "0;0"]);
    for v in &zero[3..=6] {
        assert_eq!(*v, "1.000000000000000e0");
    }
    assert_eq!(zero[7], "");
    // zero vector plus 2^2 grid points per genus
    assert_eq!(a.lines().count(), 1 + 2 * 5);
}

#[test]
fn lambda_output() {
    let o = wpvol(&["lambda", "--a", "1", "--b", "1"]);
    assert!(stdout(&o).starts_with("lambda(1, 1) = 0.0"));
    let lo = wpvol(&["lambda", "--a", "1", "--b", "2"]);
    let hi = wpvol(&["--precision", "256", "lambda", "--a", "1", "--b", "2"]);
    let value = |o: &Output| -> f64 {
        let t = stdout(o);
        t.lines()
            .next()
            .unwrap()
            .rsplit(' ')
            .next()
            .unwrap()
            .parse()
            .unwrap()
    };
    let bound: f64 = field(&stdout(&lo), "error bound").parse().unwrap();
    assert!(bound < 1e-12);
    assert!((value(&lo) - value(&hi)).abs() <= bound.max(f64::EPSILON));
    let o = wpvol(&["lambda", "--a", "0", "--b", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_exit_codes() {
    let o = wpvol(&[
        "check",
        "--suite",
        "exact",
        "--chi-max",
        "5",
        "--n-max",
        "3",
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("[PASS] exact: symmetry"));
    let o = wpvol(&[
        "check",
        "--suite",
        "ratios",
        "--chi-max",
        "5",
        "--n-max",
        "3",
    ]);
    assert!(o.status.success());
    // the window-max cap on the scaled u increments does not hold
    let o = wpvol(&["check", "--suite", "sequence"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("suite sequence: fail"));
    let o = wpvol(&[
        "check",
        "--suite",
        "residuals",
        "--g-min",
        "2",
        "--g-max",
        "4",
        "--gap-g-max",
        "6",
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("first-order gap decreasing"));
}
