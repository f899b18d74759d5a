use std::path::Path;
use std::process::{Command, Output};

fn mtm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mtm")).args(args).output().unwrap()
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn writes_timeseries_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = mtm(&["--scenario", "herding", "--seeds", "2", "--steps", "1000", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let summary: serde_json::Value = serde_json::from_str(&read(&dir.path().join("summary.json"))).unwrap();
    let runs = summary["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 2);
    for run in runs {
        let seed = run["seed"].as_u64().unwrap();
        let csv = read(&dir.path().join(format!("timeseries_{seed}.csv")));
        assert_eq!(csv.lines().count(), 1001);
        assert_eq!(
            csv.lines().next().unwrap(),
            "step,eta,price,emh_price,sentiment,n_switches"
        );
    }
    // nothing but the three outputs
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 3);
}

#[test]
fn full_length_run_has_header_plus_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = mtm(&["--scenario", "emh_baseline", "--seeds", "1", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_str(&read(&dir.path().join("summary.json"))).unwrap();
    let seed = summary["runs"][0]["seed"].as_u64().unwrap();
    assert_eq!(
        read(&dir.path().join(format!("timeseries_{seed}.csv"))).lines().count(),
        10_001
    );
}

#[test]
fn uncoupled_price_columns_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = mtm(&[
        "--scenario",
        "herding",
        "--kappa",
        "0",
        "--feedback",
        "false",
        "--seeds",
        "1",
        "--steps",
        "2000",
        "--out",
        out,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv_path = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|e| e == "csv"))
        .unwrap();
    for line in read(&csv_path).lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[2], cols[3]);
    }
}

#[test]
fn config_file_is_applied() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# short custom run\nscenario = custom\nsteps = 600\nseeds = 1\nmax_lag = 20\np0 = 2.5\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = mtm(&["--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value = serde_json::from_str(&read(&out.join("summary.json"))).unwrap();
    assert_eq!(summary["scenario"], "custom");
    assert_eq!(summary["n_steps"], 600);
    assert_eq!(summary["params"]["p0"], 2.5);
    assert_eq!(summary["runs"][0]["acf_returns"].as_array().unwrap().len(), 20);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["--scenario", "bogus"],
        vec!["--nonsense"],
        vec!["--steps", "ten"],
        vec!["--agents", "0"],
    ] {
        let o = mtm(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn help_exits_0() {
    let o = mtm(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("--scenario"));
}

#[test]
fn io_errors_exit_3_without_partial_files() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("not-a-dir");
    std::fs::write(&blocker, "x").unwrap();
    let out = blocker.join("out");
    let o = mtm(&[
        "--seeds",
        "1",
        "--steps",
        "500",
        "--max-lag",
        "10",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}
