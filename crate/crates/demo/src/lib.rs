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
//! Browser bindings: sample a hand, pose it, and browse LEAP variants.
//!
//! Every export returns JSON text. The plain functions are usable natively.

use std::collections::HashMap;

use canonhand::generate::{
    generate_extended_model, generate_model, link_name, make_leap_variant, tip_link_name,
};
use canonhand::hand_model::CanonicalJointSlot;
use canonhand::morpho::sample_morphology;
use canonhand::urdf::UrdfModel;
use canonhand::{
    fk_urdf, CanonicalHandParams, ExtendedHandParams, Finger, GenerateOptions, LeapVariantId,
    RangeConfig, NUM_SLOTS,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const LEAP_BASE: &str = include_str!("../../core/fixtures/leap_extended.json");

#[derive(Serialize)]
struct FingerLine {
    name: &'static str,
    points: Vec<[f64; 3]>,
}

#[derive(Serialize)]
struct View {
    name: String,
    dof: usize,
    palm_radius: f64,
    fingers: Vec<FingerLine>,
    urdf: String,
}

/// Joint value for `slot` at curl and spread fractions in [0, 1] and [-1, 1].
fn pose_value(slot: usize, lo: f64, hi: f64, curl: f64, spread: f64) -> f64 {
    if CanonicalJointSlot::get(slot).is_abduction() {
        let mid = 0.5 * (lo + hi);
        mid + spread.clamp(-1.0, 1.0) * 0.5 * (hi - lo)
    } else {
        lo + curl.clamp(0.0, 1.0) * (hi - lo)
    }
}

fn view(
    model: UrdfModel,
    limits: (&[f64; NUM_SLOTS], &[f64; NUM_SLOTS]),
    palm_radius: f64,
    curl: f64,
    spread: f64,
) -> Result<String, String> {
    let mut values = HashMap::new();
    for s in CanonicalJointSlot::all() {
        let (lo, hi) = (limits.0[s.index], limits.1[s.index]);
        if lo < hi {
            let name = canonhand::generate::joint_name(s.finger, s.rank);
            values.insert(name, pose_value(s.index, lo, hi, curl, spread));
        }
    }
    let poses = fk_urdf(&model, &values).map_err(|e| e.to_string())?;
    let mut fingers = Vec::new();
    for f in Finger::ALL {
        let mut points: Vec<[f64; 3]> = Vec::new();
        let links = (1..=f.slot_count())
            .map(|r| link_name(f, r))
            .chain(std::iter::once(tip_link_name(f)));
        for link in links {
            if let Some(t) = poses.get(&link) {
                let p = [t.translation.x, t.translation.y, t.translation.z];
                if points.last() != Some(&p) {
                    points.push(p);
                }
            }
        }
        if points.len() > 1 {
            fingers.push(FingerLine {
                name: f.name(),
                points,
            });
        }
    }
    let out = View {
        name: model.name.clone(),
        dof: model.revolute_count(),
        palm_radius,
        fingers,
        urdf: model.to_xml(),
    };
    Ok(serde_json::to_string(&out).expect("view serializes"))
}

/// Canonical parameters of the hand drawn from `seed` with default ranges.
pub fn sample_params(seed: u64) -> Result<String, String> {
    let s = sample_morphology(seed, &RangeConfig::default()).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string_pretty(&s.params).expect("params serialize"))
}

/// Skeleton of a canonical hand posed by `curl` and `spread`.
pub fn pose_params(params_json: &str, curl: f64, spread: f64) -> Result<String, String> {
    let p: CanonicalHandParams = serde_json::from_str(params_json).map_err(|e| e.to_string())?;
    let model = generate_model(&p, &GenerateOptions::default()).map_err(|e| e.to_string())?;
    view(model, (&p.joint_lowers, &p.joint_uppers), p.palm_radius, curl, spread)
}

/// Skeleton of a `leap_xyzw` variant of the bundled LEAP hand.
pub fn pose_leap_variant(id: &str, curl: f64, spread: f64) -> Result<String, String> {
    let id: LeapVariantId = id.parse().map_err(|e: canonhand::GenerateError| e.to_string())?;
    let base: ExtendedHandParams = serde_json::from_str(LEAP_BASE).map_err(|e| e.to_string())?;
    let e = make_leap_variant(&base, id);
    let opts = GenerateOptions {
        capsule_tag: false,
        name: Some(id.name()),
    };
    let model = generate_extended_model(&e, &opts).map_err(|e| e.to_string())?;
    view(model, (&e.joint_lowers, &e.joint_uppers), e.palm_radius, curl, spread)
}

/// Names of all 256 LEAP variants.
pub fn leap_variant_ids() -> Vec<String> {
    canonhand::enumerate_variants(0).iter().map(|id| id.name()).collect()
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = sampleHand)]
pub fn sample_hand(seed: u32) -> Result<String, JsValue> {
    js(sample_params(u64::from(seed)))
}

#[wasm_bindgen(js_name = poseHand)]
pub fn pose_hand(params_json: &str, curl: f64, spread: f64) -> Result<String, JsValue> {
    js(pose_params(params_json, curl, spread))
}

#[wasm_bindgen(js_name = poseLeap)]
pub fn pose_leap(id: &str, curl: f64, spread: f64) -> Result<String, JsValue> {
    js(pose_leap_variant(id, curl, spread))
}

#[wasm_bindgen(js_name = leapIds)]
pub fn leap_ids() -> String {
    serde_json::to_string(&leap_variant_ids()).expect("ids serialize")
}

