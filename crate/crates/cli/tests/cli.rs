use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const INTERVAL: &str = "vertices = [0, 1]\n\n[[edges]]\na = 0\nb = 1\nlen = 1.0\n";
const PATH3: &str =
    "discrete = true\nvertices = [0, 1, 2]\n\n[[edges]]\na = 0\nb = 1\n\n[[edges]]\na = 1\nb = 2\n";

fn qgap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn record(o: &Output) -> Value {
    serde_json::from_str(stdout(o).trim()).unwrap()
}

#[test]
fn spectrum_of_the_unit_interval() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "interval.graph", INTERVAL);
    let o = qgap(&["spectrum", s(&g), "--kmax", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<Vec<f64>> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    for (n, row) in rows.iter().enumerate().skip(1) {
        assert!((row[1] - n as f64 * PI).abs() < 1e-8);
        assert_eq!(row[3], 1.0);
    }
}

#[test]
fn join_on_the_interval_holds() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "interval.graph", INTERVAL);
    let o = qgap(&[
        "verify",
        "--theorem",
        "join",
        "--v1",
        "0",
        "--v2",
        "1",
        s(&g),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = record(&o);
    assert!((r["lambda1_before"].as_f64().unwrap() - PI * PI).abs() < 1e-8);
    assert!((r["lambda1_after"].as_f64().unwrap() - 4.0 * PI * PI).abs() < 1e-7);
    assert_eq!(r["verdict"], "inequality holds");
}

#[test]
fn unmet_hypothesis_exits_two() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "interval.graph", INTERVAL);
    let o = qgap(&[
        "verify",
        "--theorem",
        "long-edge",
        "--v1",
        "0",
        "--v2",
        "1",
        "--len",
        "0.5",
        s(&g),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(record(&o)["verdict"], "hypothesis unmet - no claim");
    // deleting the only edge is not applicable
    let o = qgap(&["verify", "--theorem", "delete", "--edge", "0", s(&g)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.graph");
    let o = qgap(&["verify", "--theorem", "delete", "--edge", "5", s(&missing)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.graph"));

    let bad = write(
        &dir,
        "bad.graph",
        "vertices = [0, 1]\n\n[[edges]]\na = 0\nb = 1\nlen = -1.0\n",
    );
    assert_eq!(qgap(&["spectrum", s(&bad)]).status.code(), Some(1));

    let g = write(&dir, "interval.graph", INTERVAL);
    assert_eq!(
        qgap(&["verify", "--theorem", "join", s(&g)]).status.code(),
        Some(1)
    );
    assert_eq!(
        qgap(&["surgery", s(&g), "--op", "twist:0"]).status.code(),
        Some(1)
    );
    assert_eq!(qgap(&["suite", "--n", "0"]).status.code(), Some(1));
    assert_eq!(qgap(&["nonsense"]).status.code(), Some(1));
}

#[test]
fn surgery_output_parses_back() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "interval.graph", INTERVAL);
    let out = dir.path().join("circle.graph");
    let o = qgap(&["surgery", s(&g), "--op", "add:0,1,1", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let o = qgap(&["spectrum", s(&out), "--kmax", "4"]);
    let last = stdout(&o).lines().last().unwrap().to_string();
    let cols: Vec<&str> = last.split(',').collect();
    assert!((cols[1].parse::<f64>().unwrap() - PI).abs() < 1e-8);
    assert_eq!(cols[3], "2");
}

#[test]
fn discrete_pendant_at_the_centre_keeps_the_gap() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "p3.graph", PATH3);
    let o = qgap(&["verify", "--theorem", "discrete-pendant", "--v", "1", s(&g)]);
    assert_eq!(o.status.code(), Some(0));
    let r = record(&o);
    assert!((r["lambda1_before"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((r["lambda1_after"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    let o = qgap(&["gap", s(&g)]);
    let text = stdout(&o);
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert!((row[0] - 1.0).abs() < 1e-9);
    assert_eq!(row[1], 1.0);
}

#[test]
fn oracle_reports_second_order() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "interval.graph", INTERVAL);
    let o = qgap(&["oracle", s(&g), "--h", "0.015625", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row: Vec<f64> = text
        .lines()
        .nth(3)
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert!(row[3] > 0.0 && row[3] < 5e-3);
    let order: f64 = text
        .lines()
        .last()
        .unwrap()
        .rsplit(' ')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((1.7..=2.3).contains(&order));
}

#[test]
fn suite_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.jsonl"), dir.path().join("b.jsonl"));
    let oa = qgap(&["suite", "--seed", "3", "--n", "4", "--out", s(&a)]);
    let ob = qgap(&["suite", "--seed", "3", "--n", "4", "--out", s(&b)]);
    assert_eq!(oa.status.code(), Some(0));
    assert_eq!(ob.status.code(), Some(0));
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert!(text.lines().all(|l| l.contains("\"seed\":3")));
    assert!(text.lines().last().unwrap().starts_with("{\"summary\""));
}
