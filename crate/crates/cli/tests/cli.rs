use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn expander(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expander"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn solve(rays: &str, extra: &[&str], dir: &Path) -> Output {
    let dir = dir.to_str().unwrap();
    let mut args = vec!["solve", "--rays", rays, "--out-dir", dir];
    args.extend_from_slice(extra);
    expander(&args)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn triod_writes_one_document_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = solve("0.3,1.9,4.0", &[], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest = read_json(&dir.path().join("manifest.json"));
    assert_eq!(manifest["connected_solutions"], 1);
    assert_eq!(manifest["files"].as_array().unwrap().len(), 1);
    assert_eq!(manifest["config_hash"].as_str().unwrap().len(), 64);
    let doc = read_json(&dir.path().join("solution_00.json"));
    assert_eq!(doc["status"], "regular");
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 1);
}

#[test]
fn cross_has_two_solutions_in_both_modes() {
    let dir = tempfile::tempdir().unwrap();
    let rays = "0,1.5707963267948966,3.141592653589793,4.71238898038469";
    assert!(solve(rays, &[], dir.path()).status.success());
    assert_eq!(read_json(&dir.path().join("manifest.json"))["connected_solutions"], 2);
    let m = tempfile::tempdir().unwrap();
    assert!(solve(rays, &["--mode", "matchings"], m.path()).status.success());
    assert_eq!(read_json(&m.path().join("manifest.json"))["solutions"], 2);
}

#[test]
fn repeated_rays_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = solve("0,0", &[], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(!dir.path().join("manifest.json").exists());
}

#[test]
fn flow_render_and_tampering() {
    let dir = tempfile::tempdir().unwrap();
    assert!(solve("0.3,1.9,4.0", &[], dir.path()).status.success());
    let doc_path = dir.path().join("solution_00.json");
    let doc = doc_path.to_str().unwrap();

    let frames = dir.path().join("frames");
    let out = expander(&["flow", doc, "--t", "0.5,2", "--out-dir", frames.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let base = read_json(&doc_path)["vertices"][0].clone();
    let frame = read_json(&frames.join("frame_01.json"))["vertices"][0].clone();
    for axis in ["x", "y"] {
        let (b, f) = (base[axis].as_f64().unwrap(), frame[axis].as_f64().unwrap());
        assert!((f - 2.0 * b).abs() <= 1e-12 * (1.0 + b.abs()));
    }

    let svg_a = dir.path().join("a.svg");
    let svg_b = dir.path().join("b.svg");
    for (chart, path) in [("blowup", &svg_a), ("blowup", &svg_b)] {
        let out = expander(&["render", doc, "--chart", chart, "--out", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(fs::read(&svg_a).unwrap(), fs::read(&svg_b).unwrap());
    assert_eq!(expander(&["render", doc, "--chart", "mercator"]).status.code(), Some(1));

    let mut tampered = read_json(&doc_path);
    let x = tampered["vertices"][0]["x"].as_f64().unwrap();
    tampered["vertices"][0]["x"] = (x + 0.1).into();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, serde_json::to_string(&tampered).unwrap()).unwrap();
    let out = expander(&["render", bad.to_str().unwrap(), "--chart", "plane"]);
    assert_eq!(out.status.code(), Some(1));
}
