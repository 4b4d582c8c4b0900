use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn instance(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("instances")
        .join(name)
}

fn qfs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfs"))
        .args(args)
        .env_remove("QFS_CACHE_DIR")
        .output()
        .expect("qfs runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn analyze_summarizes_vee() {
    let out = qfs(&["analyze", path(&instance("vee.json"))]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("covers: a < c, b < c"), "{text}");
    assert!(text.contains("qfs witness: found"));

    let out = qfs(&["analyze", path(&instance("vee.json")), "--json"]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["opens"], 5);
    assert_eq!(json["d_quasicontinuous"], true);
}

#[test]
fn qfs_check_passes_identity_and_rejects_a_constant_family() {
    let out = qfs(&["qfs", "check", path(&instance("vee.json"))]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"name":"vee","carrier":["a","b","c"],"order":[["a","c"],["b","c"]],
            "families":{"top":[{"values":[["c"],["c"],["c"]]}]}}"#,
    )
    .unwrap();
    let out = qfs(&["qfs", "check", path(&bad)]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
}

#[test]
fn witness_output_checks_clean() {
    let dir = tempfile::tempdir().unwrap();
    let out = qfs(&["qfs", "witness", path(&instance("sierpinski.json"))]);
    assert!(out.status.success());
    let file = dir.path().join("w.json");
    std::fs::write(&file, &out.stdout).unwrap();
    let out = qfs(&["qfs", "check", path(&file), "--family", "witness"]);
    assert!(out.status.success(), "{}", stdout(&out));
}

#[test]
fn tensor_construction_transports_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let s = instance("sierpinski.json");
    let out = qfs(&["construct", "--op", "tensor", path(&s), "--other", path(&s)]);
    assert!(out.status.success());
    let file = dir.path().join("t.json");
    std::fs::write(&file, &out.stdout).unwrap();
    let inst: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(inst["carrier"].as_array().unwrap().len(), 4);
    let out = qfs(&["qfs", "check", path(&file), "--family", "transported"]);
    assert!(out.status.success(), "{}", stdout(&out));
}

#[test]
fn powerspace_of_the_diamond() {
    let out = qfs(&["powerspace", path(&instance("diamond.json")), "--json"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["elements"].as_array().unwrap().len(), 5);
    assert_eq!(json["equals_upper_vietoris"], true);
}

#[test]
fn probe_refutes_top_and_stays_unknown_below() {
    let out = qfs(&[
        "probe",
        "--space",
        "omega-top",
        "--claim",
        "waybelow top top",
    ]);
    assert!(stdout(&out).contains("Refuted { witness: Chain { lag: 0 }, depth: 64 }"));
    let out = qfs(&[
        "probe",
        "--instance",
        path(&instance("omega-top.json")),
        "--claim",
        "waybelow 3 top",
        "--stage-depth",
        "5",
    ]);
    let text = stdout(&out);
    assert!(text.contains("UnknownAtDepth(64)"), "{text}");
    assert!(text.contains("stages 3:true 4:true 5:true"), "{text}");
}

#[test]
fn generate_writes_every_class() {
    let dir = tempfile::tempdir().unwrap();
    let out = qfs(&["generate", "--exhaustive", "4", "--out", path(dir.path())]);
    assert!(out.status.success());
    let files = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(files, 1 + 2 + 5 + 16);
}

#[test]
fn verify_writes_json_and_replays_a_failure_file() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = qfs(&[
        "verify",
        "--suite",
        "prelims",
        "--max-size",
        "3",
        "--jobs",
        "2",
        "--json",
        path(&report),
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["corpus"]["instances"], 1 + 2 + 5);

    let out = qfs(&["verify", "--replay", path(&report)]);
    assert!(stdout(&out).contains("no failures recorded"));

    let failure = dir.path().join("failure.json");
    std::fs::write(
        &failure,
        r#"{"check":"prelims/way-below-is-order","instance_name":"vee","detail":"",
            "instance":{"name":"vee","carrier":["a","b","c"],"order":[["a","c"],["b","c"]]}}"#,
    )
    .unwrap();
    let out = qfs(&["verify", "--replay", path(&failure)]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("now passes"));
}

#[test]
fn config_caps_the_carrier() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("qfs.toml");
    std::fs::write(&config, "max-carrier = 2\n").unwrap();
    let out = qfs(&[
        "--config",
        path(&config),
        "analyze",
        path(&instance("vee.json")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("above the cap of 2"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(qfs(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(qfs(&["analyze", "missing.json"]).status.code(), Some(2));
}

#[test]
fn dot_export_lists_cover_edges() {
    let out = qfs(&["export", "--dot", path(&instance("diamond.json"))]);
    let text = stdout(&out);
    assert!(text.starts_with("digraph \"diamond\""));
    assert_eq!(text.matches(" -> ").count(), 4);
}
