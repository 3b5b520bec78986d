/*
  Copyright 2026 The canonhand Authors

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

  Unless required by applicable law or agreed to in writing, software
  distributed under the License is distributed on an "AS IS" BASIS,
  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
  See the License for the specific language governing permissions and
  limitations under the License.
*/
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn fixture(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

fn canonhand(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_canonhand"))
        .args(args)
        .env_remove("CANONHAND_ASSET_ROOT")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn inspect_reports_shadow_dof() {
    let v = json(&canonhand(&["inspect", &fixture("shadow.urdf"), "--json"]));
    assert_eq!(v["revolute_joints"], 22);
    assert_eq!(v["root"], "forearm");
    let palm = v["links"].as_array().unwrap().iter().find(|l| l["name"] == "palm").unwrap();
    let max = palm["aabb"]["max"].as_array().unwrap();
    assert!((max[2].as_f64().unwrap() - 0.1).abs() < 1e-6);
}

#[test]
fn generate_rejects_inverted_limits() {
    let out = canonhand(&["generate", &fixture("bad.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("slot 3"), "{}", stderr(&out));
}

#[test]
fn missing_or_malformed_input_exits_2() {
    let out = canonhand(&["generate", "/nonexistent/params.json"]);
    assert_eq!(out.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.urdf");
    std::fs::write(&junk, "<robot name=\"x\"><link name=\"a\"></robot>").unwrap();
    let out = canonhand(&["inspect", junk.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn roundtrip_fixture_params() {
    let out = canonhand(&["roundtrip", &fixture("params.json"), "--json"]);
    let v = json(&out);
    assert!(v["continuous"].as_f64().unwrap() < 1e-6);
    assert_eq!(v["limits_exact"], true);
    assert_eq!(v["axes_exact"], true);
}

#[test]
fn extract_then_generate() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("allegro.json");
    let urdf = dir.path().join("allegro_canonical.urdf");
    let v = json(&canonhand(&[
        "extract",
        &fixture("allegro.urdf"),
        "--annotation",
        &fixture("allegro.annotation.json"),
        "--out",
        params.to_str().unwrap(),
        "--json",
    ]));
    assert_eq!(v["active_dof"], 16);
    let v = json(&canonhand(&[
        "generate",
        params.to_str().unwrap(),
        "--out",
        urdf.to_str().unwrap(),
        "--capsule-tag",
        "--json",
    ]));
    assert_eq!(v["revolute_joints"], 16);
    assert!(std::fs::read_to_string(&urdf).unwrap().contains("<capsule"));
}

#[test]
fn map_round_trips_through_csv() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("q.csv");
    let c = dir.path().join("c.csv");
    let back = dir.path().join("back.csv");
    let rows = "0.1,-0.2,0.3,0.4,0.5,0.6,0.7,0.8\n-1.5,0,0,0.25,1e-7,3,-3,0.125\n";
    std::fs::write(&q, rows).unwrap();
    let ann = fixture("barrett.annotation.json");
    for (dir_flag, input, output) in [("to-canonical", &q, &c), ("to-original", &c, &back)] {
        let out = canonhand(&[
            "map",
            "--annotation",
            &ann,
            "--direction",
            dir_flag,
            "--in",
            input.to_str().unwrap(),
            "--out",
            output.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let canonical = std::fs::read_to_string(&c).unwrap();
    assert_eq!(canonical.lines().next().unwrap().split(',').count(), 22);
    let parse = |t: &str| -> Vec<f64> {
        t.split([',', '\n']).filter(|s| !s.is_empty()).map(|s| s.parse().unwrap()).collect()
    };
    assert_eq!(parse(&std::fs::read_to_string(&back).unwrap()), parse(rows));
    let out = canonhand(&["map", "--annotation", &ann, "--direction", "to-canonical", "--in", c.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fk_prints_fingertips() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("q.csv");
    std::fs::write(&q, format!("{}\n", vec!["0"; 22].join(","))).unwrap();
    let v = json(&canonhand(&["fk", &fixture("params.json"), "--config", q.to_str().unwrap(), "--json"]));
    let tips = &v["fingertips"][0];
    let index = tips["index"].as_array().unwrap();
    assert!((index[2].as_f64().unwrap() - (0.095 + 0.045 + 0.025 + 0.026)).abs() < 1e-12);
}

#[test]
fn audit_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("shadow.json");
    let report = dir.path().join("report.json");
    let out = canonhand(&[
        "extract",
        &fixture("shadow.urdf"),
        "--annotation",
        &fixture("shadow.annotation.json"),
        "--out",
        params.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let args = |extra: &[&str]| {
        let mut a = vec![
            "audit".to_string(),
            fixture("shadow.urdf"),
            "--annotation".into(),
            fixture("shadow.annotation.json"),
            "--params".into(),
            params.display().to_string(),
            "--n".into(),
            "20".into(),
            "--seed".into(),
            "7".into(),
        ];
        a.extend(extra.iter().map(|s| s.to_string()));
        a
    };
    let a = args(&["--out", report.to_str().unwrap()]);
    let out = canonhand(&a.iter().map(String::as_str).collect::<Vec<_>>());
    assert!(out.status.success(), "{}", stderr(&out));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["n_configs"], 20);
    assert!(v["max"].as_f64().unwrap() < 1e-9);
    let a = args(&["--json"]);
    let again = json(&canonhand(&a.iter().map(String::as_str).collect::<Vec<_>>()));
    assert_eq!(again, v);
}

#[test]
fn sample_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.f32");
    let b = dir.path().join("b.f32");
    let run = |p: &Path| json(&canonhand(&["sample", "--n", "256", "--seed", "3", "--out", p.to_str().unwrap(), "--json"]));
    let (ma, mb) = (run(&a), run(&b));
    assert_eq!(ma, mb);
    assert_eq!(ma["dim"], 66);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(std::fs::metadata(&a).unwrap().len(), 256 * 66 * 4);
}

#[test]
fn leap_variants_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&canonhand(&[
        "leap-variants",
        "--base",
        &fixture("leap_extended.json"),
        "--min-total",
        "8",
        "--out-dir",
        dir.path().to_str().unwrap(),
        "--json",
    ]));
    assert_eq!(v["count"], 66);
    let variants = v["variants"].as_array().unwrap();
    let full = variants.iter().find(|e| e["id"] == "leap_3333").unwrap();
    assert_eq!(full["dof"], 16);
    assert!(dir.path().join("leap_3333.urdf").exists());
    assert!(dir.path().join("manifest.json").exists());
    let urdfs = std::fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "urdf"))
        .count();
    assert_eq!(urdfs, 66);
}

#[test]
fn asset_root_from_flag_env_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let copy = dir.path().join("shadow.urdf");
    std::fs::copy(fixtures().join("shadow.urdf"), &copy).unwrap();
    let path = copy.to_str().unwrap();
    assert_eq!(canonhand(&["inspect", path]).status.code(), Some(2));
    let root = fixtures().display().to_string();
    assert!(canonhand(&["inspect", path, "--asset-root", &root]).status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_canonhand"))
        .args(["inspect", path])
        .env("CANONHAND_ASSET_ROOT", &root)
        .output()
        .unwrap();
    assert!(out.status.success());
    let cfg = dir.path().join("canonhand.toml");
    std::fs::write(&cfg, format!("asset_root = {root:?}\n")).unwrap();
    let out = canonhand(&["inspect", path, "--config-file", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
}
