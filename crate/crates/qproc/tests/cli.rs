use std::path::Path;
use std::process::{Command, Output};

use qproc::records::SampleReport;

fn qproc(args: &[&str], out_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qproc"))
        .args(args)
        .env("QPROC_OUT_DIR", out_dir)
        .output()
        .expect("failed to run qproc")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("terminated by signal")
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let verify = qproc(&["verify"], d);
    assert_eq!(code(&verify), 0);
    let table = String::from_utf8(verify.stdout).unwrap();
    assert_eq!(table.matches("resolved (oracle)").count(), 2);
    assert!(!table.contains("FAIL "));

    assert_eq!(code(&qproc(&["verify", "--inject-fault"], d)), 1);
    assert_eq!(code(&qproc(&["reproduce", "nope"], d)), 2);
    assert_eq!(code(&qproc(&["frobnicate"], d)), 2);
    assert_eq!(code(&qproc(&["sample"], d)), 2);
    assert_eq!(code(&qproc(&["sample", "--experiment", "nope"], d)), 2);
    assert_eq!(code(&qproc(&["sample", "--experiment", "u1", "--trials", "0"], d)), 2);
    assert_eq!(code(&qproc(&["sample", "--experiment", "vmc3", "--rounds", "3"], d)), 2);
    assert_eq!(code(&qproc(&["sweep", "--config", "missing.json"], d)), 1);
    assert_eq!(code(&qproc(&["list"], d)), 0);
    assert_eq!(code(&qproc(&["--help"], d)), 0);
}

#[test]
fn reproduce_writes_to_env_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    for table in qproc::experiments::TABLES {
        let o = qproc(&["reproduce", table], dir.path());
        assert_eq!(code(&o), 0, "{table}: {}", String::from_utf8_lossy(&o.stderr));
        let text = std::fs::read_to_string(dir.path().join(format!("reproduce_{table}.csv"))).unwrap();
        assert!(text.starts_with("quantity,params,computed,paper_value,deviation,flag,note\n"));
        assert!(text.lines().count() > 1);
    }
    // Explicit --out wins over the directory.
    let out = dir.path().join("sub/bz.csv");
    assert_eq!(code(&qproc(&["reproduce", "bz", "--out", out.to_str().unwrap()], dir.path())), 0);
    let first = std::fs::read(&out).unwrap();
    assert_eq!(first, std::fs::read(dir.path().join("reproduce_bz.csv")).unwrap());
}

#[test]
fn sweep_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("empty.json");
    std::fs::write(&cfg, r#"{"family": "qid2", "rounds": {"start": 1, "end": 0}}"#).unwrap();
    assert_eq!(code(&qproc(&["sweep", "--config", cfg.to_str().unwrap()], dir.path())), 0);
    let text = std::fs::read_to_string(dir.path().join("sweep_empty.csv")).unwrap();
    assert_eq!(text, "experiment,params,exact,empirical,paper_value,deviation\n");

    let cfg = dir.path().join("qid2.json");
    std::fs::write(&cfg, r#"{"family": "qid2", "rounds": {"start": 1, "end": 30}}"#).unwrap();
    assert_eq!(code(&qproc(&["sweep", "--config", cfg.to_str().unwrap(), "--trials", "200"], dir.path())), 0);
    let mut reader = csv::Reader::from_path(dir.path().join("sweep_qid2.csv")).unwrap();
    let rows: Vec<qproc::ResultRow> = reader.deserialize().collect::<Result<_, _>>().unwrap();
    assert_eq!(rows.len(), 30);
    for (i, r) in rows.iter().enumerate() {
        assert!((r.exact - (1.0 - 0.75f64.powi(i as i32 + 1))).abs() < 1e-12);
        assert!(r.empirical.is_some());
    }

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"family": "qid2", "rounds": {"start": 0, "end": 3}}"#).unwrap();
    assert_eq!(code(&qproc(&["sweep", "--config", bad.to_str().unwrap()], dir.path())), 2);
    std::fs::write(&bad, r#"{"family": "warp", "rounds": {"start": 1, "end": 3}}"#).unwrap();
    assert_eq!(code(&qproc(&["sweep", "--config", bad.to_str().unwrap()], dir.path())), 2);
}

#[test]
fn sample_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = qproc(&["sample", "--experiment", "qidN-loop", "--trials", "50", "--seed", "7"], dir.path());
    assert_eq!(code(&o), 0);
    let bytes = std::fs::read(dir.path().join("sample_qidN-loop.json")).unwrap();
    let report: SampleReport = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(report.traces.len(), 50);
    assert_eq!(report.config.seed, 7);
    assert_eq!(report.to_json_bytes().unwrap(), bytes);
}

#[test]
fn single_trial_keeps_full_trace() {
    let dir = tempfile::tempdir().unwrap();
    let o = qproc(&["sample", "--experiment", "u1-loop", "--trials", "1", "--out", "-"], dir.path());
    assert_eq!(code(&o), 0);
    let report: SampleReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report.traces.len(), 1);
    let t = &report.traces[0];
    assert_eq!(t.rounds.len(), t.rounds_used);
    assert!(t.rounds_used >= 1 && t.rounds_used <= 3);
    assert_eq!(t.succeeded, t.rounds.last().unwrap().outcome == "0");
}

#[test]
fn sample_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.json");
    std::fs::write(
        &cfg,
        r#"{"id": "qidN", "family": {"kind": "qid_n", "dim": 3, "target": {"weyl": {"m": 1, "n": 2}}},
            "rounds": 4, "trials": 300, "data": {"fixed": {"amplitudes": [[1, 0], [0, 1], [0, 0]]}},
            "max_traces": 2}"#,
    )
    .unwrap();
    let o = qproc(&["sample", "--config", cfg.to_str().unwrap(), "--out", "-"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: SampleReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report.traces.len(), 2);
    assert_eq!(report.summary.trials, 300);
    assert!((report.summary.exact - (1.0 - (8.0f64 / 9.0).powi(4))).abs() < 1e-12);

    std::fs::write(&cfg, r#"{"id": "qidN", "colour": "blue"}"#).unwrap();
    assert_eq!(code(&qproc(&["sample", "--config", cfg.to_str().unwrap()], dir.path())), 2);
}
