use std::path::PathBuf;
use std::process::{Command, Output};

use pushtasep_core::combinatorics::{sector_basis, SectorSpec};
use pushtasep_core::export::{import_matrix, import_poly_matrix, PolyExport, RationalExport};
use pushtasep_core::processes::{pushtasep_markov, ModelParams};
use pushtasep_core::scalar::rat;
use pushtasep_core::transfer::{transfer_poly, TransferSpec};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pushtasep")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pushtasep-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn markov_column_and_listing() {
    let o = run(&["build", "markov", "--kind", "push", "--n", "2", "--L", "4", "--m", "1,2,1", "--t", "1/2", "--x", "1,1,1,1"]);
    assert!(o.status.success());
    let e: RationalExport = serde_json::from_str(stdout(&o).trim()).unwrap();
    let col = e.labels.iter().position(|l| l == "0121").unwrap();
    let row = |s: &str| e.labels.iter().position(|l| l == s).unwrap();
    let get = |r: usize| e.entries.iter().find(|(a, b, _)| *a == r && *b == col).map(|x| x.2.clone());
    assert_eq!(get(row("1021")).as_deref(), Some("1"));
    assert_eq!(get(row("1102")).as_deref(), Some("4/7"));
    assert_eq!(get(row("2101")).as_deref(), Some("2/7"));
    assert_eq!(get(row("1201")).as_deref(), Some("1/7"));
    assert_eq!(get(row("1120")).as_deref(), Some("1"));
    assert_eq!(get(col).as_deref(), Some("-3"));

    let listing = String::from_utf8(o.stderr).unwrap();
    assert!(listing.contains("0121 → 1102 : 4/7"));
}

#[test]
fn markov_export_round_trips() {
    let out = scratch("markov.json");
    let o = run(&["build", "markov", "--n", "2", "--L", "4", "--m", "1,2,1", "--x", "1,2,3/2,5", "-o", out.to_str().unwrap()]);
    assert!(o.status.success());
    let e: RationalExport = serde_json::from_str(std::fs::read_to_string(&out).unwrap().trim()).unwrap();
    let p = ModelParams::new(2, 4, rat(1, 2), vec![rat(1, 1), rat(2, 1), rat(3, 2), rat(5, 1)]).unwrap();
    let spec = SectorSpec::new(2, 4, vec![1, 2, 1]).unwrap();
    assert_eq!(import_matrix(&e).unwrap(), pushtasep_markov(&p, &spec).unwrap());
    assert_eq!(e.labels[0], sector_basis(&spec).unwrap().state(0).encode(2));
    assert!(out.with_extension("rates.txt").exists());
}

#[test]
fn transfer_poly_round_trips() {
    let o = run(&["build", "transfer", "--kind", "antisym", "--k", "2", "--poly", "--n", "2", "--L", "4", "--m", "1,2,1", "--t", "1/3"]);
    assert!(o.status.success());
    let e: PolyExport = serde_json::from_str(stdout(&o).trim()).unwrap();
    let p = ModelParams::homogeneous(2, 4, rat(1, 3)).unwrap();
    let spec = SectorSpec::new(2, 4, vec![1, 2, 1]).unwrap();
    let expected = transfer_poly(&TransferSpec::antisymmetric(2, &p, &spec).unwrap()).unwrap();
    assert_eq!(import_poly_matrix(&e).unwrap(), expected);
}

#[test]
fn rmatrix_builds_for_each_construction() {
    let mut outputs = Vec::new();
    for c in ["closed", "fused", "threed"] {
        let o = run(&["build", "rmatrix", "--construction", c, "--k", "1", "--n", "2", "--z", "2/5", "--t", "1/3"]);
        assert!(o.status.success(), "{c}: {}", String::from_utf8_lossy(&o.stderr));
        let e: RationalExport = serde_json::from_str(stdout(&o).trim()).unwrap();
        outputs.push((e.rows, e.entries));
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn stationary_vector_is_normalized() {
    let o = run(&["stationary", "--n", "2", "--L", "3", "--m", "1,1,1"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["vector"][0], "1");
    let entries = v["distribution"].as_array().unwrap();
    assert_eq!(entries.len(), 6);
    let total = entries
        .iter()
        .map(|e| pushtasep_core::scalar::parse_rational(e.as_str().unwrap()).unwrap())
        .fold(rat(0, 1), |a, b| a + b);
    assert_eq!(total, rat(1, 1));
    assert!(!v["eigenvalues"].as_array().unwrap().is_empty());
}

#[test]
fn verify_example_passes_and_is_reproducible() {
    let args = ["verify", "main-theorem", "--n", "2", "--L", "4", "--m", "1,2,1", "--t", "1/3", "--x", "1,2/3,5,7/2", "--no-timing"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("\"status\":\"pass\""));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = ["verify", "commutativity", "--n", "1", "--L", "3", "--seed", "7", "--no-timing"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let s = ["stationary", "--n", "1", "--L", "3", "--seed", "7"];
    assert_eq!(run(&s).stdout, run(&s).stdout);
}

#[test]
fn perturbed_suite_exits_nonzero() {
    let o = run(&["verify", "main-theorem", "--n", "2", "--L", "4", "--m", "1,2,1", "--perturb"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("\"status\":\"fail\""));
}

#[test]
fn malformed_rational_names_the_field() {
    let o = run(&["build", "markov", "--n", "2", "--L", "4", "--t", "1/x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--t"));
    let o = run(&["build", "markov", "--n", "1", "--L", "3", "--x", "1,1/0,2"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("--x entry 2"));
}

#[test]
fn config_file_mirrors_flags() {
    let cfg = scratch("config.json");
    std::fs::write(&cfg, r#"{"n": 2, "L": 4, "m": [1, 2, 1], "t": "1/3", "x": ["1", "2/3", "5", "7/2"]}"#).unwrap();
    let from_file = run(&["--config", cfg.to_str().unwrap(), "verify", "main-theorem", "--no-timing"]);
    let from_flags = run(&["verify", "main-theorem", "--n", "2", "--L", "4", "--m", "1,2,1", "--t", "1/3", "--x", "1,2/3,5,7/2", "--no-timing"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, from_flags.stdout);
}
