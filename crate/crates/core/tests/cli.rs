use std::process::{Command, Output};

use clap::Parser;
use mckay_core::cli::{run, Cli, NuFilter, RunConfig, MAX_ORDER_ENV};
use mckay_core::lattice::CharacterIndex;
use serde_json::Value;

fn mckay(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mckay"))
        .args(args)
        .env_remove(MAX_ORDER_ENV)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn count_borel_reports_totals() {
    let out = mckay(&["count-borel", "--type", "C2", "-p", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["total"], 18);
    let t = mckay(&["count-borel", "--type", "A1", "-p", "5", "--brute-force", "--format", "tsv"]);
    assert_eq!(t.status.code(), Some(0));
    assert!(String::from_utf8(t.stdout).unwrap().contains('8'));
}

#[test]
fn exit_codes() {
    assert_eq!(mckay(&["check", "--type", "A1", "-p", "3"]).status.code(), Some(0));
    assert_eq!(mckay(&["count-borel", "--type", "G2", "-p", "2"]).status.code(), Some(2));
    assert_eq!(mckay(&["check", "--type", "C2", "-p", "2"]).status.code(), Some(2));
    assert_eq!(mckay(&["count-borel", "--type", "Q3", "-p", "3"]).status.code(), Some(2));
    assert_eq!(mckay(&["count-borel", "--type", "A1", "-p", "4"]).status.code(), Some(2));
    assert_eq!(mckay(&["count-borel", "--type", "A1"]).status.code(), Some(2));
    assert_eq!(mckay(&["table", "--type", "C3", "-p", "3"]).status.code(), Some(3));
    assert_eq!(mckay(&["check", "--type", "A1", "-p", "7", "--max-order", "100"]).status.code(), Some(3));
}

#[test]
fn output_file_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = mckay(&["check", "--type", "A1", "-p", "5", "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let first = std::fs::read(&a).unwrap();
    assert_eq!(first, std::fs::read(&b).unwrap());
    let v: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn environment_bound_applies_and_flag_wins() {
    let out = Command::new(env!("CARGO_BIN_EXE_mckay"))
        .args(["check", "--type", "A1", "-p", "5"])
        .env(MAX_ORDER_ENV, "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_mckay"))
        .args(["check", "--type", "A1", "-p", "5", "--max-order", "1000"])
        .env(MAX_ORDER_ENV, "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    let cli = Cli::try_parse_from(["mckay", "table", "--type", "A1", "-p", "3"]).unwrap();
    assert_eq!(RunConfig::from_cli(cli, Some("77")).unwrap().max_order, 77);
    let cli = Cli::try_parse_from(["mckay", "table", "--type", "A1", "-p", "3"]).unwrap();
    assert!(RunConfig::from_cli(cli, Some("many")).is_err());
}

#[test]
fn nu_filter_restricts_output() {
    assert_eq!(NuFilter::parse("(1)").unwrap(), NuFilter::Index(CharacterIndex(vec![1])));
    assert!(NuFilter::parse("x").is_err());
    let cli = Cli::try_parse_from(["mckay", "count-borel", "--type", "A1", "-p", "3", "--nu", "nontrivial"]).unwrap();
    let o = run(&RunConfig::from_cli(cli, None).unwrap()).unwrap();
    assert!(o.pass);
    let v: Value = serde_json::from_str(&o.output).unwrap();
    let rows = v["per_nu"].as_object().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows["(1)"], 3);
}

#[test]
fn bijection_is_certified() {
    let out = mckay(&["bijection", "--type", "A1", "-p", "3", "-n", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let table = mckay(&["table", "--type", "A1", "-p", "3", "--format", "tsv"]);
    assert_eq!(table.status.code(), Some(0));
    assert!(!table.stdout.is_empty());
}
