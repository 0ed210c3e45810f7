use std::path::Path;
use std::process::{Command, Output};

use rankdec::channel::SeededRng;
use rankdec::ffield::FieldTower;
use rankdec::gabidulin::GabidulinCode;
use rankdec::instance::Instance;
use rankdec_cli::record::{read_csv, SimulationRecord};
use serde_json::Value;

fn rankdec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rankdec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(m: usize, n: usize, k: usize) -> GabidulinCode {
    GabidulinCode::standard(FieldTower::new(2, m).unwrap(), n, k).unwrap()
}

fn write_instance(dir: &Path, name: &str, inst: &Instance) -> String {
    let path = dir.join(name);
    std::fs::write(&path, inst.to_file().to_json()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn analyze_json_is_machine_readable() {
    let out = rankdec(&["analyze", "--m", "24", "--n", "24", "--k", "16", "--w", "6", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let r = &v[0];
    assert_eq!(r["params"]["k"], 16);
    assert_eq!(r["log2"]["delta_star"], 4);
    for key in ["W_RD", "W_Key", "W_Comb_over_N", "W_Alg", "N"] {
        assert!(r["log2"][key].is_f64(), "{key}");
    }
}

#[test]
fn analyze_rejects_invalid_parameters() {
    for args in [
        &["analyze", "--m", "24", "--n", "24", "--k", "25", "--w", "6"][..],
        &["analyze", "--q", "6", "--m", "24", "--n", "24", "--k", "16", "--w", "6"],
        &["analyze", "--m", "24", "--n", "24", "--k", "16"],
        &["analyze", "--m", "24", "--n", "24", "--k", "16", "--w", "6", "--format", "xml"],
    ] {
        let out = rankdec(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn decode_error_free_instance() {
    let dir = tempfile::tempdir().unwrap();
    let inst = Instance::random(&code(16, 16, 8), 0, &mut SeededRng::new(1, 0)).unwrap();
    let path = write_instance(dir.path(), "zero.json", &inst);
    let out = rankdec(&["decode", &path]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "decoded");
    assert_eq!(v["residual_rank"], 0);
    assert_eq!(v["message"], serde_json::to_value(inst.to_file().msg).unwrap());
}

#[test]
fn decode_beyond_unique_radius_instance() {
    let dir = tempfile::tempdir().unwrap();
    let inst = Instance::random(&code(24, 24, 16), 6, &mut SeededRng::new(2, 0)).unwrap();
    let path = write_instance(dir.path(), "row1.json", &inst);
    let out = rankdec(&["decode", &path, "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["delta"], 4);
    assert!(v["residual_rank"].as_u64().unwrap() <= 6);
    assert!(v["iterations_used"].as_u64().unwrap() <= v["max_iter"].as_u64().unwrap());
}

#[test]
fn decode_failure_and_contract_violations() {
    let dir = tempfile::tempdir().unwrap();
    let inst = Instance::random(&code(12, 12, 4), 7, &mut SeededRng::new(3, 0)).unwrap();
    let path = write_instance(dir.path(), "hard.json", &inst);
    let out = rankdec(&["decode", &path, "--delta", "0", "--max-iter", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "failure");

    assert_eq!(rankdec(&["decode", &path, "--w", "9"]).status.code(), Some(2));
    assert_eq!(rankdec(&["decode", &path, "--delta", "9"]).status.code(), Some(2));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"q\": 2}").unwrap();
    assert_eq!(rankdec(&["decode", bad.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(rankdec(&["decode", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn simulate_is_deterministic_across_runs_and_workers() {
    let args = |workers: &'static str| {
        [
            "simulate", "--m", "12", "--n", "12", "--k", "4", "--w", "5", "--delta", "2", "--trials", "3000",
            "--seed", "11", "--workers", workers,
        ]
    };
    let run = |workers| {
        let out = rankdec(&args(workers));
        assert_eq!(out.status.code(), Some(0));
        SimulationRecord::from_json(std::str::from_utf8(&out.stdout).unwrap().trim()).unwrap()
    };
    let a = run("3");
    let b = run("3");
    let c = run("1");
    assert_eq!(a.without_timing().to_json(), b.without_timing().to_json());
    assert_eq!((a.total_trials, a.successes), (c.total_trials, c.successes));
    assert!(a.successes > 0);
}

#[test]
fn simulate_within_radius_succeeds_every_time() {
    let out = rankdec(&[
        "simulate", "--m", "24", "--n", "24", "--k", "16", "--w", "4", "--trials", "500",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rec = SimulationRecord::from_json(std::str::from_utf8(&out.stdout).unwrap().trim()).unwrap();
    assert_eq!(rec.delta, 0);
    assert_eq!(rec.successes, 500);
    assert_eq!(rec.empirical_success_rate, 1.0);
}

#[test]
fn simulate_appends_csv_rows_under_one_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("runs.csv");
    let p = path.to_str().unwrap();
    for seed in ["1", "2"] {
        let out = rankdec(&[
            "simulate", "--m", "10", "--n", "10", "--k", "4", "--w", "4", "--trials", "200", "--seed", seed,
            "--format", "csv", "--out", p,
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let records = read_csv(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(records.len(), 2);
    assert_eq!((records[0].seed, records[1].seed), (1, 2));
}

#[test]
fn simulate_geometric_mode() {
    let out = rankdec(&[
        "simulate", "--m", "12", "--n", "12", "--k", "4", "--w", "5", "--trials", "20", "--mode", "geometric",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rec = SimulationRecord::from_json(std::str::from_utf8(&out.stdout).unwrap().trim()).unwrap();
    assert_eq!(rec.instances, 20);
    assert!(rec.total_trials >= rec.successes);
}

#[test]
fn simulate_rejects_unsupported_regimes() {
    for extra in [["--delta", "9"], ["--trials", "0"], ["--workers", "0"]] {
        let mut args = vec!["simulate", "--m", "12", "--n", "12", "--k", "4", "--w", "5"];
        args.extend(extra);
        assert_eq!(rankdec(&args).status.code(), Some(2), "{extra:?}");
    }
    let out = rankdec(&["simulate", "--m", "12", "--n", "12", "--k", "4", "--w", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn selftest_exit_codes() {
    let ok = rankdec(&["selftest"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert!(text.lines().filter(|l| l.starts_with("[PASS]")).count() >= 7);
    assert!(text.contains("tolerance"));
    let bad = rankdec(&["selftest", "--inject-fault"]);
    assert_ne!(bad.status.code(), Some(0));
    assert!(String::from_utf8(bad.stdout).unwrap().contains("[FAIL]"));
}

#[test]
fn in_process_entry_point_matches_binary() {
    assert_eq!(rankdec_cli::run_from(["rankdec", "selftest"]).unwrap(), 0);
    assert!(rankdec_cli::run_from(["rankdec", "analyze", "--bogus"]).is_err());
    assert!(rankdec_cli::run_from(["rankdec", "analyze", "--m", "8", "--n", "8", "--k", "9", "--w", "1"]).is_err());
}
