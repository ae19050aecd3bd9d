//! The `vandermonde` binary: output contract, determinism, config precedence and exit codes.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vandermonde")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let o = run(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn data_lines(csv: &str) -> Vec<Vec<String>> {
    csv.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn moments_table_row() {
    let out = stdout(&["moments", "--n-max", "7", "--d", "1", "--c", "1", "--dist", "uniform"]);
    assert!(out.starts_with("# vandermonde "));
    assert!(out.contains("# seed: 0\n"));
    assert!(out.contains("\nn,catalan,lower,moment,bell,err_bound\n"));
    let rows = data_lines(&out);
    assert_eq!(rows.len(), 7);
    assert_eq!(rows[3][..5], ["4", "14", "14.666666666666666", "14.666666666666666", "15"]);
}

#[test]
fn coeff_four_points() {
    let out = stdout(&["coeff", "--n", "4", "--methods", "all"]);
    let rows = data_lines(&out);
    assert_eq!(rows.len(), 15);
    let below: Vec<_> = rows.iter().filter(|r| r[5].parse::<f64>().unwrap() < 1.0).collect();
    assert_eq!(below.len(), 1);
    assert_eq!(below[0][0], "0101");
    assert!((below[0][5].parse::<f64>().unwrap() - 2.0 / 3.0).abs() < 1e-15);
    assert!(rows.iter().all(|r| r[8] == "false"));
}

#[test]
fn identical_config_identical_bytes() {
    let args = ["spectrum", "--n", "24", "--trials", "6", "--seed", "17", "--dist", "power:alpha=0.5"];
    let a = stdout(&args);
    let b = stdout(&args);
    assert_eq!(a, b);
    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "1"]);
    assert_eq!(a, stdout(&threaded));
    assert_ne!(a, stdout(&["spectrum", "--n", "24", "--trials", "6", "--seed", "18", "--dist", "power:alpha=0.5"]));
}

#[test]
fn json_and_csv_carry_the_same_numbers() {
    let base = ["capacity", "--n", "16", "--trials", "5", "--gammas", "0:4:0.5", "--seed", "3", "--bits"];
    let csv = stdout(&base);
    let mut j = base.to_vec();
    j.extend(["--format", "json"]);
    let json: Value = serde_json::from_str(&stdout(&j)).unwrap();
    let cols: Vec<&str> = json["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(cols, ["gamma", "vandermonde", "stderr", "jensen", "gaussian"]);
    let rows = data_lines(&csv);
    let jrows = json["rows"].as_array().unwrap();
    assert_eq!(rows.len(), jrows.len());
    for (r, jr) in rows.iter().zip(jrows) {
        for (cell, col) in r.iter().zip(&cols) {
            assert_eq!(cell.parse::<f64>().unwrap(), jr[col].as_f64().unwrap(), "{col}");
        }
    }
    assert_eq!(json["seed"], 3);
    assert_eq!(json["config"]["bits"], "true");
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# ballsurns defaults\nballs = 50\ntrials=20\nseed=9\n").unwrap();
    let c = cfg.to_str().unwrap();
    let from_file = stdout(&["ballsurns", "--config", c]);
    assert!(from_file.contains("# balls=50\n") && from_file.contains("# trials=20\n") && from_file.contains("# seed: 9\n"));
    let overridden = stdout(&["ballsurns", "--config", c, "--trials", "30"]);
    assert!(overridden.contains("# trials=30\n") && overridden.contains("# balls=50\n"));
    let counts: u64 = data_lines(&overridden).iter().map(|r| r[1].parse::<u64>().unwrap()).sum();
    assert_eq!(counts, 30);

    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    assert_eq!(run(&["ballsurns", "--config", c]).status.code(), Some(2));
}

#[test]
fn output_files_and_samples() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("maxeig.csv");
    let o = run(&["maxeig", "--n", "8,16", "--trials", "5", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("N,mean,std,upper,lower,samples_file\n"));
    let samples = dir.path().join("maxeig.samples.csv");
    assert!(Path::new(&samples).exists());
    assert_eq!(data_lines(&std::fs::read_to_string(&samples).unwrap()).len(), 10);

    let dump = dir.path().join("eig.txt");
    stdout(&["spectrum", "--n", "10", "--trials", "2", "--dump", dump.to_str().unwrap()]);
    let d = std::fs::read_to_string(&dump).unwrap();
    assert!(d.starts_with("# N=10,L=10,dist=uniform,seed=0\n"));
    assert_eq!(d.lines().count(), 21);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["moments", "--dist", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["moments", "--n-max", "x"]).status.code(), Some(2));
    assert_eq!(run(&["moments", "--d", "2", "--dist", "log"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["coeff", "--n", "9"]).status.code(), Some(3));
    assert_eq!(run(&["moments", "--n-max", "9"]).status.code(), Some(3));
    assert_eq!(run(&["ballsurns", "--balls", "5", "--out", "/nonexistent-dir/x.csv"]).status.code(), Some(5));
    assert_eq!(run(&["verify", "--quick", "--only", "1,5"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "--quick", "--only", "9"]).status.code(), Some(4));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
