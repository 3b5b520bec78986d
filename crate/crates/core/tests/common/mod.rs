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
#![allow(dead_code)]

use canonhand::hand_model::{Axis6, CanonicalHandParams, Finger, NUM_SLOTS};
use canonhand::kinematics::unit_f64;
use canonhand::morpho::{RangeConfig, Sampler};
use canonhand::transform::matrix_to_rpy;
use canonhand::urdf::{load_urdf, UrdfModel};
use canonhand::HandAnnotation;
use nalgebra::{Matrix3, Vector3};
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use std::path::PathBuf;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn load_fixture(name: &str) -> (UrdfModel, HandAnnotation) {
    let dir = fixtures();
    let model = load_urdf(&dir.join(format!("{name}.urdf")), None).expect("fixture parses");
    let annotation =
        HandAnnotation::load(&dir.join(format!("{name}.annotation.json"))).expect("annotation");
    (model, annotation)
}

pub const FIXTURES: [(&str, usize); 4] =
    [("shadow", 22), ("allegro", 16), ("leap", 16), ("barrett", 8)];

/// Random right-handed parameters that generate→parse→extract recovers.
///
/// Topology is proximal-run per finger (as sampled by the morphology
/// sampler), thumb axes are any of the six directions except a short
/// thumb's first axis along z, and the extra little-finger frame keeps its
/// z axis in the palm plane.
pub fn recoverable_params(seed: u64) -> CanonicalHandParams {
    let ranges = RangeConfig {
        finger_presence: [0.85; 5],
        little_extra_presence: 0.6,
        ..RangeConfig::default()
    };
    let mut p = Sampler::new(seed, ranges).unwrap().next_sample().params;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut u = || unit_f64(&mut rng);
    let long_thumb = p.deepest_active_rank(Finger::Thumb).is_some_and(|r| r >= 3);
    // a short thumb cannot turn about its own direction first
    let first = if long_thumb { 6.0 } else { 4.0 };
    p.thumb_axes[0] = Axis6::ALL[(u() * first) as usize].vector();
    p.thumb_axes[1] = Axis6::ALL[(u() * 6.0) as usize % 6].vector();
    for s in 0..NUM_SLOTS {
        if p.is_active(s) {
            p.joint_lowers[s] = -u();
            p.joint_uppers[s] = 0.05 + 1.5 * u();
        }
    }
    p.thumb_rpy = [
        -1.5 + 1.2 * u(),
        -0.6 + 1.2 * u(),
        -0.6 + 1.2 * u(),
    ];
    // extra frame: +y along a random axis away from the palm normal
    let y = loop {
        let v = Vector3::new(u() - 0.5, u() - 0.5, u() - 0.5);
        if v.norm() > 0.1 && v.normalize().x.abs() < 0.9 {
            break v.normalize();
        }
    };
    let x = (Vector3::x() - y * y.x).normalize();
    let z = x.cross(&y);
    let rpy = matrix_to_rpy(&Matrix3::from_columns(&[x, y, z]));
    p.little_extra_origin[3..].copy_from_slice(&rpy);
    p
}

pub use canonhand::hand_model::ParamDeviation as Deviation;

pub fn compare(want: &CanonicalHandParams, got: &CanonicalHandParams) -> Deviation {
    want.deviation(got)
}
