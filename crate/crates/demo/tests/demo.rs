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
use canonhand_demo::{leap_variant_ids, pose_leap_variant, pose_params, sample_params};
use serde_json::Value;

#[test]
fn sampled_hand_poses() {
    let params = sample_params(4).unwrap();
    assert_eq!(sample_params(4).unwrap(), params);
    let v: Value = serde_json::from_str(&pose_params(&params, 0.5, 0.0).unwrap()).unwrap();
    assert!(v["urdf"].as_str().unwrap().starts_with("<?xml"));
    let fingers = v["fingers"].as_array().unwrap();
    assert!(fingers.iter().all(|f| f["points"].as_array().unwrap().len() >= 2));
}

#[test]
fn curl_moves_fingertips() {
    let params = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/params.json")).unwrap();
    let tip = |curl: f64| {
        let v: Value = serde_json::from_str(&pose_params(&params, curl, 0.0).unwrap()).unwrap();
        let index = v["fingers"].as_array().unwrap().iter().find(|f| f["name"] == "index").unwrap().clone();
        index["points"].as_array().unwrap().last().unwrap()[2].as_f64().unwrap()
    };
    assert!(tip(1.0) < tip(0.0));
}

#[test]
fn leap_variants_have_expected_dof() {
    assert_eq!(leap_variant_ids().len(), 256);
    let v: Value = serde_json::from_str(&pose_leap_variant("leap_3333", 0.0, 0.0).unwrap()).unwrap();
    assert_eq!(v["dof"], 16);
    let v: Value = serde_json::from_str(&pose_leap_variant("leap_1021", 0.3, 0.2).unwrap()).unwrap();
    assert_eq!(v["dof"], 2 + 0 + 3 + 2);
    assert_eq!(v["fingers"].as_array().unwrap().len(), 3);
    assert!(pose_leap_variant("leap_9999", 0.0, 0.0).is_err());
    assert!(pose_params("{}", 0.0, 0.0).is_err());
}
