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
//! Forward kinematics over URDF trees and canonical parameters, and the
//! fingertip fidelity report comparing a hand with its canonical model.

use nalgebra::Vector3;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;
use std::collections::{HashMap, VecDeque};
use thiserror::Error;

use crate::action_map::{to_canonical, ActionMapError};
use crate::extract::HandAnnotation;
use crate::generate::COINCIDENT_TOL;
use crate::hand_model::{CanonicalHandParams, Finger, ValidationReport, NUM_SLOTS};
use crate::transform::{axis_angle, rot_x, rot_y, rpy_to_matrix, Transform};
use crate::urdf::{JointKind, UrdfModel};

#[derive(Debug, Error)]
pub enum KinematicsError {
    #[error("unknown joint `{0}`")]
    UnknownJointName(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(ValidationReport),
    #[error(transparent)]
    ActionMap(#[from] ActionMapError),
}

/// World pose of every link. Joints missing from `joint_values` sit at 0.
pub fn fk_urdf(
    model: &UrdfModel,
    joint_values: &HashMap<String, f64>,
) -> Result<HashMap<String, Transform>, KinematicsError> {
    for name in joint_values.keys() {
        if model.joint(name).is_none() {
            return Err(KinematicsError::UnknownJointName(name.clone()));
        }
    }
    let mut poses = HashMap::with_capacity(model.links.len());
    poses.insert(model.root_link.clone(), Transform::identity());
    let mut queue = VecDeque::from([model.root_link.as_str()]);
    while let Some(link) = queue.pop_front() {
        let parent = poses[link];
        for j in model.child_joints(link) {
            let q = joint_values.get(&j.name).copied().unwrap_or(0.0);
            let motion = match j.kind {
                JointKind::Revolute | JointKind::Continuous => {
                    Transform::from_rotation(axis_angle(&j.axis_vector(), q))
                }
                JointKind::Prismatic => Transform::from_translation(j.axis_vector() * q),
                JointKind::Fixed => Transform::identity(),
            };
            poses.insert(j.child.clone(), parent * j.origin.to_transform() * motion);
            queue.push_back(&j.child);
        }
    }
    Ok(poses)
}

/// Frames of the canonical hand at one configuration, in the palm frame.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalPose {
    /// Frame of each slot after its own rotation (the pose of
    /// `{finger}_link{rank}` when the slot is active).
    pub slot_frames: [Transform; NUM_SLOTS],
    /// Fingertip of each present finger.
    pub fingertips: [Option<Vector3<f64>>; 5],
}

fn tz(l: f64) -> Transform {
    Transform::from_translation(Vector3::new(0.0, 0.0, l))
}

fn rx(q: f64) -> Transform {
    Transform::from_rotation(rot_x(q))
}

fn ry(q: f64) -> Transform {
    Transform::from_rotation(rot_y(q))
}

/// Analytic forward kinematics of the canonical hand.
///
/// Values in inactive slots are ignored.
pub fn fk_canonical(
    p: &CanonicalHandParams,
    c: &[f64; NUM_SLOTS],
) -> Result<CanonicalPose, KinematicsError> {
    let report = p.validate();
    if !report.is_valid() {
        return Err(KinematicsError::InvalidParams(report));
    }
    let q = |s: usize| if p.is_active(s) { c[s] } else { 0.0 };
    let mut slot_frames = [Transform::identity(); NUM_SLOTS];
    let mut fingertips = [None; 5];
    for f in Finger::ALL {
        let [l1, l2, l3] = p.lengths_of(f);
        let s0 = f.first_slot();
        let xyz = Vector3::from(p.finger_xyz[f.index()]);
        // joint frames before rotation, then the end of the distal link
        let mut joints: Vec<Transform> = Vec::with_capacity(6);
        let mut frames: Vec<Transform> = Vec::with_capacity(5);
        match f {
            Finger::Thumb => {
                let base = Transform::from_translation(xyz)
                    * Transform::from_rotation(rpy_to_matrix(p.thumb_rpy));
                let a0 = Vector3::from(p.thumb_axes[0]);
                let a1 = Vector3::from(p.thumb_axes[1]);
                let j1 = base;
                let f1 = j1 * Transform::from_rotation(axis_angle(&a0, q(0)));
                let j2 = f1;
                let f2 = j2 * Transform::from_rotation(axis_angle(&a1, q(1)));
                let j3 = f2 * tz(l1);
                let f3 = j3 * rx(q(2));
                let j4 = f3;
                let f4 = j4 * ry(q(3));
                let j5 = f4 * tz(l2);
                let f5 = j5 * ry(q(4));
                joints.extend([j1, j2, j3, j4, j5, f5 * tz(l3)]);
                frames.extend([f1, f2, f3, f4, f5]);
            }
            Finger::Little => {
                let extra = p.extra_origin().to_transform();
                let j1 = extra;
                let f1 = j1 * ry(q(s0));
                // knuckle: palm-aligned at finger_xyz when the extra joint is at 0
                let j2 = f1 * extra.inverse() * Transform::from_translation(xyz);
                let f2 = j2 * rx(q(s0 + 1));
                let j3 = f2;
                let f3 = j3 * ry(q(s0 + 2));
                let j4 = f3 * tz(l1);
                let f4 = j4 * ry(q(s0 + 3));
                let j5 = f4 * tz(l2);
                let f5 = j5 * ry(q(s0 + 4));
                joints.extend([j1, j2, j3, j4, j5, f5 * tz(l3)]);
                frames.extend([f1, f2, f3, f4, f5]);
            }
            _ => {
                let j1 = Transform::from_translation(xyz);
                let f1 = j1 * rx(q(s0));
                let j2 = f1;
                let f2 = j2 * ry(q(s0 + 1));
                let j3 = f2 * tz(l1);
                let f3 = j3 * ry(q(s0 + 2));
                let j4 = f3 * tz(l2);
                let f4 = j4 * ry(q(s0 + 3));
                joints.extend([j1, j2, j3, j4, f4 * tz(l3)]);
                frames.extend([f1, f2, f3, f4]);
            }
        }
        for (k, fr) in frames.iter().enumerate() {
            slot_frames[s0 + k] = *fr;
        }
        if let Some(deepest) = p.deepest_active_rank(f) {
            let d = deepest - 1;
            let origin = joints[d].translation;
            let tip = joints[d + 1..]
                .iter()
                .map(|t| t.translation)
                .find(|t| (t - origin).norm() > COINCIDENT_TOL)
                .unwrap_or(joints[joints.len() - 1].translation);
            fingertips[f.index()] = Some(tip);
        }
    }
    Ok(CanonicalPose {
        slot_frames,
        fingertips,
    })
}

/// Fingertip discrepancies between an original hand and its canonical model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FidelityReport {
    pub n_configs: usize,
    /// Fingers compared, by name.
    pub fingers: Vec<String>,
    /// `distances[config][finger]`, metres, aligned with `fingers`.
    pub distances: Vec<Vec<f64>>,
    pub per_finger_mean: Vec<f64>,
    pub per_finger_max: Vec<f64>,
    pub mean: f64,
    pub max: f64,
}

/// Probe points compared per finger: the annotated fingertip link when
/// given, otherwise the frame of the deepest mapped joint.
fn probes(a: &HandAnnotation) -> Vec<(Finger, Option<String>, usize)> {
    let mut out = Vec::new();
    for f in Finger::ALL {
        let deepest = a
            .joint_map
            .iter()
            .filter(|m| f.slots().contains(&m.slot))
            .max_by_key(|m| m.slot);
        if let Some(m) = deepest {
            out.push((f, a.fingertip_links.get(&f).cloned(), m.slot));
        }
    }
    out
}

pub fn fidelity_report(
    model: &UrdfModel,
    a: &HandAnnotation,
    p: &CanonicalHandParams,
    configs: &[Vec<f64>],
) -> Result<FidelityReport, KinematicsError> {
    let palm_inv = a.palm_origin.to_transform().inverse();
    let fingers = probes(a);
    let mut distances = Vec::with_capacity(configs.len());
    for q in configs {
        let c = to_canonical(q, a)?;
        let values: HashMap<String, f64> = a
            .joint_map
            .iter()
            .zip(q)
            .map(|(m, v)| (m.joint.clone(), *v))
            .collect();
        let poses = fk_urdf(model, &values)?;
        let canon = fk_canonical(p, &c)?;
        let mut row = Vec::with_capacity(fingers.len());
        for (f, tip_link, slot) in &fingers {
            let (orig, ours) = match tip_link {
                Some(link) => (
                    poses.get(link).map(|t| t.translation),
                    canon.fingertips[f.index()],
                ),
                None => {
                    let joint = a
                        .joint_map
                        .iter()
                        .find(|m| m.slot == *slot)
                        .and_then(|m| model.joint(&m.joint));
                    (
                        joint.and_then(|j| poses.get(&j.child)).map(|t| t.translation),
                        Some(canon.slot_frames[*slot].translation),
                    )
                }
            };
            let d = match (orig, ours) {
                (Some(o), Some(c)) => (palm_inv.apply_point(&o) - c).norm(),
                _ => f64::NAN,
            };
            row.push(d);
        }
        distances.push(row);
    }
    let n = distances.len();
    let k = fingers.len();
    let mut per_finger_mean = vec![0.0; k];
    let mut per_finger_max = vec![0.0f64; k];
    for row in &distances {
        for (i, d) in row.iter().enumerate() {
            per_finger_mean[i] += d / n as f64;
            per_finger_max[i] = per_finger_max[i].max(*d);
            if d.is_nan() {
                per_finger_max[i] = f64::NAN;
            }
        }
    }
    let all: Vec<f64> = distances.iter().flatten().copied().collect();
    let mean = if all.is_empty() {
        0.0
    } else {
        all.iter().sum::<f64>() / all.len() as f64
    };
    let max = all.iter().copied().fold(0.0f64, |m, d| if d.is_nan() { d } else { m.max(d) });
    Ok(FidelityReport {
        n_configs: n,
        fingers: fingers.iter().map(|f| f.0.name().to_string()).collect(),
        distances,
        per_finger_mean,
        per_finger_max,
        mean,
        max,
    })
}

/// `n` original joint vectors drawn uniformly within the mapped joints'
/// limits, seeded deterministically.
pub fn random_configs(model: &UrdfModel, a: &HandAnnotation, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ranges: Vec<(f64, f64)> = a
        .joint_map
        .iter()
        .map(|m| model.joint(&m.joint).map(|j| j.range()).unwrap_or((0.0, 0.0)))
        .collect();
    (0..n)
        .map(|_| {
            ranges
                .iter()
                .map(|(lo, hi)| lo + (hi - lo) * unit_f64(&mut rng))
                .collect()
        })
        .collect()
}

/// Uniform draw in `[0, 1)` from the top 53 bits of one `u64`.
pub fn unit_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
