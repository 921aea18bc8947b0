use std::path::PathBuf;
use std::process::{Command, Output};

fn qcausal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcausal")).args(args).env_remove("QCAUSAL_SEED").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("qcausal-cli-{}-{name}", std::process::id()))
}

#[test]
fn simulate_random_scenarios_in_exact_mode() {
    let o = qcausal(&["simulate", "--kind", "causal", "--mode", "exact", "--seed", "7"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("verdict CAUSALITY correct true"));
    let o = qcausal(&["simulate", "--kind", "common", "--mode", "exact", "--seed", "7"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("verdict COMMON_CAUSE correct true"));
}

#[test]
fn simulate_corner_fixtures_show_the_apex_branches() {
    let o = qcausal(&["simulate", "--state", "corner-mix"]);
    let out = stdout(&o);
    assert!(o.status.success());
    assert!(out.contains("apply V0"), "{out}");
    assert!(out.contains("apply transfer pair"), "{out}");
    assert!(out.contains("truth common verdict COMMON_CAUSE correct true"));

    let o = qcausal(&["simulate", "--state", "corner-twin"]);
    assert!(stdout(&o).contains("truth causal verdict CAUSALITY correct true"));
}

#[test]
fn simulate_replays_an_experiment_row() {
    let dir = scratch("replay");
    let o = qcausal(&[
        "experiment",
        "--n-common",
        "5",
        "--n-causal",
        "5",
        "--repeats",
        "2",
        "--seed",
        "3",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.join("rows.csv")).unwrap();
    let row: Vec<&str> = csv.lines().nth(18).unwrap().split(',').collect();
    let (id, repeat, kind, verdict, branch) = (row[0], row[1], row[2], row[3], row[5]);
    let o = qcausal(&["simulate", "--kind", kind, "--mode", "sampled", "--seed", "3", "--repeat", repeat, "--id", id]);
    let last = stdout(&o).lines().last().unwrap().to_string();
    assert!(last.contains(&format!("verdict {verdict} ")) && last.ends_with(&format!("branch {branch}")), "{last}");
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn simulate_rejects_bad_flags() {
    let o = qcausal(&["simulate", "--gap", "2.0"]);
    assert_eq!(o.status.code(), Some(1));
    let o = qcausal(&["simulate", "--kind", "neither"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn experiment_writes_consistent_reports() {
    let dir = scratch("report");
    let o = qcausal(&[
        "experiment",
        "--n-common",
        "30",
        "--n-causal",
        "30",
        "--repeats",
        "2",
        "--seed",
        "5",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let summary: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.join("summary.json")).unwrap()).unwrap();
    let csv = std::fs::read_to_string(dir.join("rows.csv")).unwrap();
    assert!(csv.starts_with("scenario_id,repeat,kind,verdict,correct,branch,rule,shots,p11,p22,p33\n"));
    assert!(!csv.contains('\r'));
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 120);
    for rep in summary["repeats"].as_array().unwrap() {
        let r = rep["repeat"].as_u64().unwrap().to_string();
        let failures = rows.iter().filter(|l| {
            let f: Vec<&str> = l.split(',').collect();
            f[1] == r && f[4] == "false"
        });
        assert_eq!(failures.count() as u64, rep["failures"].as_u64().unwrap());
    }
    assert_eq!(stdout(&o), std::fs::read_to_string(dir.join("summary.json")).unwrap());
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn experiment_reads_config_files_and_flags_override() {
    let dir = scratch("config");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    std::fs::write(&cfg, r#"{"n_common": 4, "n_causal": 4, "repeats": 1, "mode": "exact", "seed": 11}"#).unwrap();
    let o = qcausal(&["experiment", "--config", cfg.to_str().unwrap(), "--n-causal", "6"]);
    assert!(o.status.success());
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(summary["scenarios_per_repeat"], 10);
    assert_eq!(summary["mean_failures"], 0.0);
    assert_eq!(summary["config"]["seed"], 11);

    std::fs::write(&cfg, r#"{"n_common": 4, "bogus": 1}"#).unwrap();
    assert_eq!(qcausal(&["experiment", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn experiment_reports_unwritable_output() {
    let blocker = scratch("blocker");
    std::fs::write(&blocker, b"x").unwrap();
    let out = blocker.join("sub");
    let o = qcausal(&[
        "experiment",
        "--n-common",
        "1",
        "--n-causal",
        "1",
        "--repeats",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let _ = std::fs::remove_file(blocker);
}

#[test]
fn verify_runs_all_claims_or_one() {
    let o = qcausal(&["verify", "--samples", "50"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().count() >= 16);
    assert!(out.lines().all(|l| l.contains("passed=true")), "{out}");

    let o = qcausal(&["verify", "plane-constant-agreement", "--samples", "100"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn verify_rejects_unknown_claims() {
    let o = qcausal(&["verify", "bogus"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));
}

#[test]
fn design_v_tables() {
    let o = qcausal(&["design-v", "--p", "0,0,1"]);
    let out = stdout(&o);
    assert!(o.status.success());
    assert!(out.contains("target P_V = (+0.0000, +0.0000, +1.0000)"));
    assert_eq!(out.lines().count(), 7);

    let o = qcausal(&["design-v", "--p", "1,1,1"]);
    let out = stdout(&o);
    for row in out.lines().skip(3) {
        let nums: Vec<f64> = row.split_whitespace().skip(1).map(|x| x.parse().unwrap()).collect();
        assert!(nums.iter().all(|x| *x == 0.0), "{row}");
    }

    let o = qcausal(&["design-v", "--mixture", "0.25,0.25,0.25,0.25"]);
    assert!(stdout(&o).contains("target P_V = (-0.5000, -0.5000, +1.0000)"));
}

#[test]
fn design_v_rejects_points_outside_the_causal_tetrahedron() {
    let o = qcausal(&["design-v", "--p", "-1,-1,-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("outside"));
    assert_eq!(qcausal(&["design-v", "--p", "1,2"]).status.code(), Some(1));
}
