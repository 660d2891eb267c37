use std::process::{Command, Output};

fn recip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_recip"))
        .args(args)
        .env_remove("RECIP_WORKERS")
        .env_remove("RECIP_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn xyz_prints_count() {
    let o = recip(&["xyz", "--H", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("6"));
    let o = recip(&["xyz", "--H", "64"]);
    assert!(stdout(&o).contains("ratio"));
}

#[test]
fn groups_lists_six_classes() {
    let o = recip(&["groups", "--n", "3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["classes"].as_array().unwrap().len(), 6);
    assert!(v.get("containment").is_none());
    let o = recip(&["groups", "--n", "3", "--all-overgroups"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!v["containment"].as_array().unwrap().is_empty());
}

#[test]
fn verify_disc_passes() {
    let o = recip(&["verify", "--suite", "disc"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().all(|l| l.starts_with("PASS")), "{out}");
}

#[test]
fn classify_outputs_flags() {
    let o = recip(&["classify", "--poly", "1,0,-3,0,1", "--budget", "200"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["in_g1"], true);
    assert_eq!(v["fingerprint"]["best_tag"].as_str().map(|t| t != "FULL"), Some(true));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(recip(&["classify", "--poly", "1,2,2,2,1"]).status.code(), Some(2));
    assert_eq!(recip(&["classify", "--poly", "1,x"]).status.code(), Some(2));
    assert_eq!(recip(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(recip(&["fourier", "--p", "3", "--n", "2", "--sigma", "1,1", "--pointed", "+3"]).status.code(), Some(2));
}

#[test]
fn resource_errors_exit_1() {
    assert_eq!(recip(&["census", "--n", "9", "--H", "50"]).status.code(), Some(1));
}

#[test]
fn census_formats_are_stable() {
    let a = recip(&["census", "--n", "2", "--H", "3", "--format", "csv", "--workers", "1"]);
    let b = recip(&["census", "--n", "2", "--H", "3", "--format", "csv", "--workers", "3"]);
    let strip = |o: &Output| stdout(o).lines().map(|l| l.rsplit_once(',').unwrap().0.to_string()).collect::<Vec<_>>();
    assert_eq!(strip(&a), strip(&b));
    assert!(stdout(&a).starts_with("n,H,monic,total"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rec.jsonl");
    let o = recip(&["census", "--n", "1", "--H", "2", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(std::fs::read_to_string(&path).unwrap().trim()).unwrap();
    assert_eq!(v["total"], 25);
}

#[test]
fn environment_sets_defaults() {
    let o = Command::new(env!("CARGO_BIN_EXE_recip"))
        .args(["census", "--n", "1", "--H", "1"])
        .env("RECIP_SEED", "17")
        .env("RECIP_WORKERS", "2")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!((v["seed"].as_u64(), v["worker_count"].as_u64()), (Some(17), Some(2)));
    let o = Command::new(env!("CARGO_BIN_EXE_recip"))
        .args(["census", "--n", "1", "--H", "1", "--seed", "3"])
        .env("RECIP_SEED", "17")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["seed"].as_u64(), Some(3));
}

#[test]
fn fourier_table() {
    let o = recip(&["fourier", "--p", "5", "--n", "2", "--sigma", "1^2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["p", "n", "sigma", "pointed", "monic", "zero_value", "max_off_support", "envelope_constant"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let o = recip(&["fourier", "--p", "3", "--n", "2", "--sigma", "1^2", "--pointed", "+2", "--lambda-delta"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["a_p_at_most_one"], true);
}
