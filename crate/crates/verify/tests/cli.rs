use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn identical_config_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.txt", "seed = 11\nsamples = 1\n");
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let o = verify(&["--suite", "all", "--config", s(&cfg), "--format", "json", "--out", s(out)]);
        assert!(o.status.code().is_some());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn csv_rows_match_json_records() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.txt", "samples = 2\n");
    let json = verify(&["--suite", "torsion", "--config", s(&cfg), "--format", "json"]);
    let csv = verify(&["--suite", "torsion", "--config", s(&cfg), "--format", "csv"]);
    let value: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    let records = value["records"].as_array().unwrap().len();
    assert!(records > 0);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), records + 1);
    assert_eq!(value["summary"]["total"], records);
}

#[test]
fn text_summary_and_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.txt", "dims = 2\nsamples = 1\n");
    let o = verify(&["--suite", "algebra", "--config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("summary: PASS"), "{last}");
    assert!(last.contains("0 failed"));
    // the lone nonzero supertrace in two dimensions
    let table = text.lines().find(|l| l.contains("supertrace_table/n=2")).unwrap();
    assert!(table.contains("observed=c{1,2}chat{1,2}=-4"), "{table}");
}

#[test]
fn sphere_rotation_trace_is_constant() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.txt",
        "geometry = sphere\naction = rotation 1.0\nt_grid = 0.05, 0.2, 1, 2\ntrace_csv = trace.csv\n",
    );
    let o = verify(&["--suite", "spectral", "--config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(0));
    let mut reader = csv::Reader::from_path(dir.path().join("trace.csv")).unwrap();
    let mut rows = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        let value: f64 = rec[2].parse().unwrap();
        let tail: f64 = rec[3].parse().unwrap();
        assert!((value - 2.0).abs() < 1e-8);
        assert!(tail < 1e-12);
        rows += 1;
    }
    assert_eq!(rows, 4);
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let empty_grid = write(dir.path(), "a.txt", "t_grid =\n");
    assert_eq!(verify(&["--suite", "spectral", "--config", s(&empty_grid)]).status.code(), Some(2));
    let ok = write(dir.path(), "b.txt", "");
    assert_eq!(verify(&["--suite", "nope", "--config", s(&ok)]).status.code(), Some(2));
    let missing = dir.path().join("missing.txt");
    assert_eq!(verify(&["--suite", "all", "--config", s(&missing)]).status.code(), Some(2));
    let bad_tol = write(dir.path(), "c.txt", "tol.spectral = 0\n");
    assert_eq!(verify(&["--suite", "spectral", "--config", s(&bad_tol)]).status.code(), Some(2));
}

#[test]
fn failing_check_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    // too few modes for the requested tail tolerance
    let cfg = write(dir.path(), "c.txt", "geometry = torus\naction = negation\ncutoff = 2\nt_grid = 0.05\n");
    let o = verify(&["--suite", "spectral", "--config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stdout).unwrap().contains("heat trace tail bound"));
}

#[test]
fn curvature_scenario_is_checked() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "s2.txt", "n = 2\na = 0\nangles = 0.7\nR 1 2 1 2 -1\n");
    let cfg = write(dir.path(), "c.txt", "curvature = s2.txt\nsamples = 1\nt_grid = 0.1, 1\n");
    let o = verify(&["--suite", "fixed-point", "--config", s(&cfg), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let names: Vec<&str> =
        value["records"].as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"fixed-point/scenario/density_vs_euler"));
    assert!(names.contains(&"fixed-point/scenario/fiber/t=0.1"));
}

#[test]
fn seed_flag_changes_digests_only_through_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.txt", "samples = 1\n");
    let a = verify(&["--suite", "getzler", "--config", s(&cfg), "--format", "csv", "--seed", "1"]);
    let b = verify(&["--suite", "getzler", "--config", s(&cfg), "--format", "csv", "--seed", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn suite_may_come_from_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let with = write(dir.path(), "with.txt", "suite = torsion\nsamples = 1\n");
    let o = verify(&["--config", s(&with)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("suite torsion"));
    let without = write(dir.path(), "without.txt", "samples = 1\n");
    assert_eq!(verify(&["--config", s(&without)]).status.code(), Some(2));
}
