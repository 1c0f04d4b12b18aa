use std::path::Path;
use std::process::{Command, Output};

fn procqa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_procqa"))
        .args(args)
        .output()
        .unwrap()
}

fn ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(dir: &Path) -> std::path::PathBuf {
    let data = dir.join("data.json");
    ok(&procqa(&[
        "generate", "--videos", "6", "--test-videos", "2", "--qa-per-video", "4", "--seed", "3",
        "--out", s(&data),
    ]));
    data
}

#[test]
fn generate_train_eval_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let data = generate(dir.path());
    let manifest = procqa::world::load_dataset(&data).unwrap();
    assert_eq!(manifest.videos.len(), 8);

    let run = dir.path().join("run");
    let stdout = ok(&procqa(&[
        "train", "--model", "rgcn_sa", "--modalities", "V+D", "--epochs", "2", "--hidden", "8",
        "--embed", "4", "--data", s(&data), "--out", s(&run),
    ]));
    assert!(stdout.contains("epoch"));
    let metrics: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(run.join("metrics.json")).unwrap()).unwrap();
    assert_eq!(metrics["config"]["hidden"], 8);

    let json = dir.path().join("eval.json");
    ok(&procqa(&[
        "eval", "--checkpoint", s(&run.join("checkpoint.json")), "--data", s(&data),
        "--json", s(&json),
    ]));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(report["overall"], metrics["overall"]);

    let wrong = procqa(&[
        "eval", "--checkpoint", s(&run.join("checkpoint.json")), "--data", s(&data),
        "--head", "kspace",
    ]);
    assert!(!wrong.status.success());
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let data = generate(dir.path());
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"model": "gcn", "head": "kspace", "hidden": 8, "embed": 4, "epochs": 5}"#)
        .unwrap();
    let run = dir.path().join("run");
    ok(&procqa(&[
        "train", "--config", s(&cfg), "--epochs", "1", "--data", s(&data), "--out", s(&run),
    ]));
    let metrics: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(run.join("metrics.json")).unwrap()).unwrap();
    assert_eq!(metrics["config"]["model"], "gcn");
    assert_eq!(metrics["head"], "kspace");
    assert_eq!(metrics["history"].as_array().unwrap().len(), 1);
}

#[test]
fn bad_configs_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"model": "gcn", "hiden": 8}"#).unwrap();
    let out = procqa(&["train", "--config", s(&cfg)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("hiden"));

    let out = procqa(&["train", "--model", "bare_qa", "--modalities", "D", "--epochs", "0"]);
    assert!(!out.status.success());
    let out = procqa(&["train", "--hidden", "0"]);
    assert!(!out.status.success());
    let out = procqa(&["train", "--model", "lstm9000"]);
    assert!(!out.status.success());
}

#[test]
fn gradcheck_passes_and_catches_a_fault() {
    let out = ok(&procqa(&["gradcheck", "--scope", "ops"]));
    assert!(out.contains("op/"));
    let out = procqa(&["gradcheck", "--scope", "ops", "--fault", "matmul"]);
    assert!(!out.status.success());
}

#[test]
fn grid_from_a_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let data = generate(dir.path());
    let spec = dir.path().join("grid.json");
    let body = serde_json::json!({
        "base": {"hidden": 8, "embed": 4, "epochs": 1, "data": data},
        "layout": "variants",
        "variants": ["bare_qa", "gcn", "rgcn_sa"],
    });
    std::fs::write(&spec, body.to_string()).unwrap();
    let out_dir = dir.path().join("grid");
    let stdout = ok(&procqa(&["grid", "--spec", s(&spec), "--out", s(&out_dir)]));
    assert!(stdout.contains("RGCN-SA"));
    assert_eq!(stdout.lines().count(), 4);
    assert!(out_dir.join("grid.json").exists());
    let runs = std::fs::read_dir(&out_dir).unwrap().count();
    assert_eq!(runs, 4);
}
