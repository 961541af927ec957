//! End-to-end runs of the `shalika` binary and the library entry points.

use serde_json::{json, Value};
use shalika_cli::{run, Command, GridSpec, Output, RunConfig, RunReport};
use shalika_core::arith::cyclo::Root;
use shalika_core::strata::family::{FamilyParams, FamilySpec};
use std::io::Write;
use std::process::Command as Process;

fn write_config(value: &Value) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(value.to_string().as_bytes()).unwrap();
    f
}

/// Runs the binary; returns the exit code, stdout and stderr.
fn shalika(args: &[&str], env: &[(&str, &str)]) -> (i32, String, String) {
    let mut cmd = Process::new(env!("CARGO_BIN_EXE_shalika"));
    cmd.args(args).env_remove("SHALIKA_JOBS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn without_timing(report: &str) -> Value {
    let mut v: Value = serde_json::from_str(report).unwrap();
    v.as_object_mut().unwrap().remove("timing");
    v
}

fn middle(chi: u64, zeta: Root) -> FamilySpec {
    FamilySpec { p: 2, params: FamilyParams::Middle { c: 1, d: 1, chi, zeta }, twist: None }
}

fn simple(zeta: Root) -> FamilySpec {
    FamilySpec { p: 3, params: FamilyParams::Simple { v: 1, phi: 0, zeta }, twist: None }
}

fn grid_config(base: FamilySpec, chi: Option<Vec<u64>>, zeta_roots: Option<u64>) -> RunConfig {
    RunConfig {
        family: None,
        grid: Some(GridSpec { base, chi, zeta: None, zeta_roots, twists: None }),
        ..RunConfig::new(Command::Grid, middle(0, Root::one()))
    }
}

fn grid_output(report: &RunReport) -> &shalika_cli::GridOutput {
    match &report.output {
        Output::Grid(g) => g,
        other => panic!("expected a grid output, got {other:?}"),
    }
}

#[test]
fn reports_are_deterministic_across_runs_and_workers() {
    let cfg = write_config(&json!({
        "family": serde_json::to_value(middle(0, Root::one())).unwrap(),
    }));
    let path = cfg.path().to_str().unwrap();
    let (c1, a, _) = shalika(&["verdict", "--config", path], &[]);
    let (c2, b, _) = shalika(&["verdict", "--config", path, "--jobs", "2"], &[]);
    let (c3, c, _) = shalika(&["verdict", "--config", path, "--jobs", "1"], &[]);
    assert_eq!((c1, c2, c3), (0, 0, 0));
    assert_eq!(without_timing(&a), without_timing(&b));
    assert_eq!(without_timing(&a), without_timing(&c));
}

#[test]
fn grid_results_do_not_depend_on_the_worker_count() {
    let cfg = grid_config(simple(Root::one()), None, Some(4));
    let one = run(&cfg, Some(1)).unwrap();
    let two = run(&cfg, Some(2)).unwrap();
    assert_eq!(one.output, two.output);
}

#[test]
fn configuration_round_trips() {
    let mut cfg = RunConfig::new(Command::Lambda0, middle(1, Root::new(1, 3)));
    cfg.level = Some(3);
    cfg.r_window = Some((-5, 2));
    cfg.seed = Some(17);
    let text = serde_json::to_string(&cfg).unwrap();
    assert_eq!(RunConfig::parse(&text, Some(Command::Lambda0)).unwrap(), cfg);
    assert!(RunConfig::parse(&text, Some(Command::Scan)).is_err());
}

#[test]
fn unknown_fields_are_rejected() {
    let text = json!({ "command": "verdict", "family": serde_json::to_value(middle(0, Root::one())).unwrap(), "levle": 3 });
    assert!(RunConfig::parse(&text.to_string(), None).is_err());
}

#[test]
fn malformed_json_exits_with_one_and_a_position() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(b"{\"family\": {\"p\": 2,\n").unwrap();
    let (code, out, err) = shalika(&["verdict", "--config", f.path().to_str().unwrap()], &[]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.starts_with("error: "), "{err}");
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn invalid_parameters_exit_with_one() {
    let biq = FamilySpec { p: 2, params: FamilyParams::Biquadratic { a: 1, b: 1, chi: 0, zeta: Root::one() }, twist: None };
    let cfg = write_config(&json!({ "family": serde_json::to_value(biq).unwrap() }));
    let (code, _, err) = shalika(&["verdict", "--config", cfg.path().to_str().unwrap()], &[]);
    assert_eq!(code, 1);
    assert!(err.contains("p odd"), "{err}");
}

#[test]
fn invalid_worker_count_in_the_environment_exits_with_one() {
    let cfg = write_config(&json!({ "family": serde_json::to_value(middle(0, Root::one())).unwrap() }));
    let (code, _, err) = shalika(&["central-char", "--config", cfg.path().to_str().unwrap()], &[("SHALIKA_JOBS", "many")]);
    assert_eq!(code, 1);
    assert!(err.contains("SHALIKA_JOBS"), "{err}");
}

#[test]
fn discrepancy_exits_with_two() {
    // χ nontrivial with ζ² = χ(σ_f): trivial central character, yet Λ₀ = 0.
    let cfg = write_config(&json!({ "family": serde_json::to_value(middle(1, Root::new(2, 3))).unwrap() }));
    let out = tempfile::NamedTempFile::new().unwrap();
    let (code, stdout, _) = shalika(
        &["verdict", "--config", cfg.path().to_str().unwrap(), "--out", out.path().to_str().unwrap()],
        &[],
    );
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    let report: RunReport = serde_json::from_str(&std::fs::read_to_string(out.path()).unwrap()).unwrap();
    assert!(report.discrepancy);
    let Output::Verdict(v) = &report.output else { panic!("expected a verdict") };
    assert!(v.central_trivial && !v.lambda0_nonzero && !v.criterion_match);
}

#[test]
fn empty_grid_is_an_empty_sequence() {
    let report = run(&grid_config(middle(0, Root::one()), Some(vec![]), None), None).unwrap();
    let g = grid_output(&report);
    assert!(g.points.is_empty());
    assert_eq!(g.summary.points, 0);
    assert_eq!(report.exit_code(), 0);
}

#[test]
fn middle_grid_over_mu8_matches_everywhere() {
    let report = run(&grid_config(middle(0, Root::one()), Some(vec![0, 1, 2]), Some(8)), None).unwrap();
    let g = grid_output(&report);
    assert_eq!(g.summary.points, 24);
    assert_eq!(g.summary.matches, 24);
    assert_eq!(g.summary.errors, 0);
    // Only χ trivial with ζ = ±1 has trivial central character in μ_8.
    assert_eq!(g.summary.transfers, 2);
    assert_eq!(report.exit_code(), 0);
}

#[test]
fn simple_grid_transfers_exactly_at_plus_minus_one() {
    let report = run(&grid_config(simple(Root::one()), None, Some(8)), None).unwrap();
    let g = grid_output(&report);
    let transfers: Vec<Root> = g
        .points
        .iter()
        .filter(|pt| pt.verdict.as_ref().unwrap().transfer)
        .map(|pt| pt.family.zeta())
        .collect();
    assert_eq!(transfers, vec![Root::one(), Root::minus_one()]);
    assert_eq!(g.summary.mismatches, 0);
}

#[test]
fn scan_and_lfactor_outputs() {
    let cfg = write_config(&json!({ "family": serde_json::to_value(middle(0, Root::one())).unwrap() }));
    let path = cfg.path().to_str().unwrap();
    let (code, out, _) = shalika(&["scan", "--config", path], &[]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["output"]["kind"], "scan");
    assert_eq!(v["output"]["value"]["within_allowed"], true);
    let (code, out, _) = shalika(&["lfactor", "--config", path], &[]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["output"]["kind"], "lfactor");
}
