use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cgo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cgo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().display().to_string();
                files.push((rel, fs::read(&p).unwrap()));
            }
        }
    }
    files.sort();
    files
}

#[test]
fn bench_is_byte_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = tmp.path().join(name);
        let o = cgo(&[
            "bench",
            "--problem",
            "shifted_sphere,composition_1",
            "--runs",
            "3",
            "--seed",
            "7",
            "--iters",
            "20",
            "--dim",
            "5",
            "--emit-traces",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        read_tree(&out)
    };
    let a = run("a");
    assert_eq!(a, run("b"));
    let names: Vec<&str> = a.iter().map(|(n, _)| n.as_str()).collect();
    for f in ["summary.json", "summary.csv", "pvalues.csv", "runs.csv"] {
        assert!(names.contains(&f), "{f} missing from {names:?}");
    }
    // 2 problems x 3 algorithms x 3 runs
    assert_eq!(names.iter().filter(|n| n.starts_with("traces")).count(), 18);
}

#[test]
fn usage_errors_exit_2() {
    let o = cgo(&["bench", "--algo", "nosuch"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cgo, pso, random"));
    assert_eq!(cgo(&["bench", "--problem", "nope"]).status.code(), Some(2));
    assert_eq!(cgo(&["bench", "--pop", "1"]).status.code(), Some(2));
    assert_eq!(cgo(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cgo(&["--help"]).status.code(), Some(0));
}

#[test]
fn ingestion_errors_exit_3() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.toml");
    fs::write(&bad, "name = \"x\"\nwaypoints = [\n").unwrap();
    let o = cgo(&["uav", "--scenario", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":2:"));

    let offsets = tmp.path().join("offsets.txt");
    fs::write(&offsets, "1 2\n3 4 5\n").unwrap();
    let o = cgo(&[
        "bench",
        "--dim",
        "2",
        "--offsets",
        offsets.to_str().unwrap(),
        "--out",
        tmp.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn io_errors_exit_4() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "").unwrap();
    let o = cgo(&[
        "engineering",
        "--problem",
        "spring",
        "--runs",
        "1",
        "--iters",
        "2",
        "--out",
        blocker.join("sub").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn uav_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("uav");
    let o = cgo(&[
        "uav",
        "--scenario",
        "one",
        "--algo",
        "cgo",
        "--runs",
        "2",
        "--iters",
        "60",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let svg = fs::read_to_string(out.join("path_cgo.svg")).unwrap();
    assert_eq!(svg.matches("class=\"obstacle\"").count(), 7);
    let csv = fs::read_to_string(out.join("path_cgo.csv")).unwrap();
    assert_eq!(csv.lines().count(), 51);
    let costs: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("costs.json")).unwrap()).unwrap();
    let c = &costs[0]["costs"];
    let total = c["total"].as_f64().unwrap();
    let parts = 0.5 * c["length"].as_f64().unwrap()
        + 0.3 * c["obstacle"].as_f64().unwrap()
        + 0.2 * c["height"].as_f64().unwrap();
    assert!((total - parts).abs() < 1e-9 * total);

    // A scenario exported to TOML loads back and runs.
    let file = tmp.path().join("two.toml");
    assert!(cgo(&["uav", "--scenario", "two", "--export", file.to_str().unwrap()])
        .status
        .success());
    let o = cgo(&[
        "uav",
        "--scenario",
        file.to_str().unwrap(),
        "--algo",
        "pso",
        "--runs",
        "1",
        "--iters",
        "5",
        "--out",
        tmp.path().join("u2").to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let svg = fs::read_to_string(tmp.path().join("u2/path_pso.svg")).unwrap();
    assert_eq!(svg.matches("class=\"obstacle\"").count(), 4);
}

#[test]
fn engineering_reports_infeasible_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("eng");
    let o = cgo(&[
        "engineering",
        "--problem",
        "gear_train,three_bar_truss",
        "--algo",
        "cgo",
        "--runs",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    let counts = json["infeasible_runs"].as_array().unwrap();
    assert_eq!(counts.len(), 2);
    assert!(counts.iter().all(|c| c["runs"] == 5));
    let designs = fs::read_to_string(out.join("designs.csv")).unwrap();
    assert_eq!(designs.lines().count(), 3);
}

#[test]
fn cgo_separates_from_random_search() {
    use cgo_cli::{cmd_bench, Algorithm, BenchConfig, ExperimentConfig};
    let tmp = tempfile::tempdir().unwrap();
    let cfg = BenchConfig {
        experiment: ExperimentConfig {
            problems: vec![],
            algorithms: vec![Algorithm::Cgo, Algorithm::Random],
            runs: 10,
            population: 30,
            iterations: 100,
            seed: 1,
            out: tmp.path().to_path_buf(),
            emit_traces: false,
        },
        dim: 10,
        offsets: None,
    };
    let table = cmd_bench(&cfg).unwrap();
    let below = table.p_values.iter().filter(|p| p.p_value < 0.05).count();
    assert_eq!(table.p_values.len(), 12);
    assert!(below * 2 > table.p_values.len(), "{below} of 12 below 0.05");
}
