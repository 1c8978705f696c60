use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selmer3"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn curve_reports() {
    let o = run(&["curve", "--a", "80"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("selmer bound: exactPair (0, 1)"), "{text}");
    assert!(text.contains("sel3 bound: <= 2"), "{text}");
    assert!(text.contains("S_a: {}"), "{text}");

    let text = stdout(&run(&["curve", "--a", "49"]));
    assert!(text.contains("selmer bound: squareCase (0, 4)"), "{text}");

    let text = stdout(&run(&["curve", "--a", "-7"]));
    assert!(text.contains("y^2 = x^3 - 7"), "{text}");

    let o = run(&["curve", "--a", "1", "--b", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("discriminant: -496"), "{text}");
    assert!(text.contains("y^2 = x^3 - 27(x - 31)^2"), "{text}");
}

#[test]
fn curve_rejects_bad_parameters() {
    assert_eq!(run(&["curve", "--a", "64"]).status.code(), Some(2));
    assert_eq!(run(&["curve", "--a", "0"]).status.code(), Some(2));
    assert_eq!(run(&["curve", "--a", "27", "--b", "-4"]).status.code(), Some(2));
    assert_eq!(run(&["curve"]).status.code(), Some(2));
}

#[test]
fn experiment_csv() {
    let o = run(&["experiment", "--kind", "sDensity", "--grid", "1e4,1e5,1e6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,observed,predicted,ratio");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("10000,"));
    assert!(!text.contains('\r'));

    let text = stdout(&run(&["experiment", "--kind", "h3AvgMinus", "--grid", "1e4"]));
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[2], "2");
}

#[test]
fn experiment_output_is_atomic_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |p: &std::path::Path, jobs: &'static str| {
        vec![
            "--jobs".to_string(),
            jobs.to_string(),
            "experiment".into(),
            "--kind".into(),
            "tPrime".into(),
            "--grid".into(),
            "1e3,2e4".into(),
            "--seed".into(),
            "7".into(),
            "--out".into(),
            p.display().to_string(),
        ]
    };
    let run_owned = |v: Vec<String>| {
        let refs: Vec<&str> = v.iter().map(String::as_str).collect();
        run(&refs)
    };
    assert_eq!(run_owned(args(&a, "1")).status.code(), Some(0));
    assert_eq!(run_owned(args(&b, "2")).status.code(), Some(0));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    // Overwrite in place.
    assert_eq!(run_owned(args(&a, "1")).status.code(), Some(0));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let bad = dir.path().join("bad.csv");
    let o = run(&["experiment", "--kind", "nope", "--grid", "1e3", "--out", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["experiment", "--kind", "sDensity", "--grid", "1e4,1e3", "--out", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let leftovers: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(leftovers.len(), 2, "{leftovers:?}");
}

#[test]
fn verify_suites() {
    let o = run(&["verify", "--suite", "isogeny"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
    assert_eq!(run(&["verify", "--suite", "everything"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "identities", "--seed", "11"]).status.code(), Some(0));
    assert_eq!(run(&["--jobs", "0", "verify", "--suite", "selmer"]).status.code(), Some(2));
}
