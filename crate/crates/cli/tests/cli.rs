use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_string_lossy().into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadforms")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn ring_info_reports_residue_fields() {
    let out = run(&["ring", "info", &data("f3xf5.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["cardinality"], 15);
    assert_eq!(v["residue_fields"], serde_json::json!([3, 5]));
    assert_eq!(v["is_field"], false);
}

#[test]
fn witt_index_of_hyperbolic_space() {
    let out = run(&["form", "witt", &data("h2.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["index"], 2);
    assert_eq!(v["kernel_rank"], 0);
}

#[test]
fn isotropy_of_anisotropic_plane() {
    let out = run(&["form", "isotropy", &data("one_one_f3.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["isotropic"], false);
}

#[test]
fn malformed_input_exits_2() {
    assert_eq!(run(&["form", "witt", &data("malformed.json")]).status.code(), Some(2));
    assert_eq!(run(&["form", "witt", &data("missing.json")]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn descend_then_verify_trace() {
    let trace = scratch("trace.json");
    let trace_s = trace.to_str().unwrap();
    let out = run(&["--seed", "3", "--out", trace_s, "descend", &data("three_ones_f3.json"), &data("f27.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["verify-trace", &data("three_ones_f3.json"), &data("f27.json"), trace_s]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["valid"], true);

    let mut t: Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    let last = t.as_array_mut().unwrap().last_mut().unwrap();
    last["vector"] = serde_json::json!([1, 0, 0]);
    let tampered = scratch("tampered.json");
    std::fs::write(&tampered, t.to_string()).unwrap();
    let out = run(&["verify-trace", &data("three_ones_f3.json"), &data("f27.json"), tampered.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["valid"], false);
}

#[test]
fn descend_rejects_even_degree_and_anisotropic_forms() {
    assert_eq!(run(&["descend", &data("three_ones_f3.json"), &data("f9.json")]).status.code(), Some(3));
    let out = run(&["descend", &data("one_one_f3.json"), &data("f27.json")]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json(&out)["anisotropic"], true);
}

#[test]
fn extension_output_feeds_transfer() {
    let ext = scratch("ext.json");
    let out = run(&["--seed", "1", "--out", ext.to_str().unwrap(), "extend", &data("f3.json")]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["transfer", ext.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rank"], 3);
    assert_eq!(v["kernel_rank"], 1);
}

#[test]
fn empty_campaign_passes() {
    let out = run(&["verify", &data("empty_campaign.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["summary"]["pass"], 0);
    assert_eq!(v["summary"]["fail"], 0);
}

#[test]
fn campaign_is_reproducible() {
    let a = scratch("campaign_a.json");
    let b = scratch("campaign_b.json");
    for p in [&a, &b] {
        let out = run(&["--out", p.to_str().unwrap(), "verify", &data("small_campaign.json")]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let first = std::fs::read(&a).unwrap();
    assert_eq!(first, std::fs::read(&b).unwrap());
    let v: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["summary"]["pass"], 8);
    assert_eq!(v["summary"]["fail"], 0);
    assert_eq!(v["summary"]["negative_controls"], 8);
}

#[test]
fn unknown_campaign_field_is_rejected() {
    let cfg = scratch("bad_campaign.json");
    std::fs::write(&cfg, r#"{"rings":[],"ranks":[1,2],"degrees":[3],"samples":1,"seed":1,"colour":1}"#).unwrap();
    assert_eq!(run(&["verify", cfg.to_str().unwrap()]).status.code(), Some(2));
}
