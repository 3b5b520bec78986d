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
//! Conversion between an original hand's joint vector and the 22-slot
//! canonical joint vector.
//!
//! Original vectors follow the order of the annotation's `joint_map`.
//! Canonical slots that no original joint maps to hold 0.0.

use thiserror::Error;

use crate::extract::HandAnnotation;
use crate::hand_model::{CanonicalHandParams, NUM_SLOTS};

#[derive(Debug, Error, PartialEq)]
pub enum ActionMapError {
    #[error("expected {expected} joint values, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

pub type CanonicalJointVector = [f64; NUM_SLOTS];

/// `c[slot] = sign * q[i] + offset` for every mapped joint; 0.0 elsewhere.
pub fn to_canonical(q: &[f64], a: &HandAnnotation) -> Result<CanonicalJointVector, ActionMapError> {
    if q.len() != a.joint_map.len() {
        return Err(ActionMapError::DimensionMismatch {
            expected: a.joint_map.len(),
            got: q.len(),
        });
    }
    let mut c = [0.0; NUM_SLOTS];
    for (m, v) in a.joint_map.iter().zip(q) {
        let s = f64::from(m.sign) * v;
        c[m.slot] = if m.offset == 0.0 { s } else { s + m.offset };
    }
    Ok(c)
}

/// Inverse of [`to_canonical`] on mapped slots; other slots are ignored.
pub fn to_original(c: &CanonicalJointVector, a: &HandAnnotation) -> Vec<f64> {
    a.joint_map
        .iter()
        .map(|m| {
            let v = if m.offset == 0.0 {
                c[m.slot]
            } else {
                c[m.slot] - m.offset
            };
            f64::from(m.sign) * v
        })
        .collect()
}

/// Clamp into each slot's limits; inactive slots become 0.0.
pub fn clamp_to_limits(c: &CanonicalJointVector, p: &CanonicalHandParams) -> CanonicalJointVector {
    std::array::from_fn(|s| {
        if p.is_active(s) {
            c[s].clamp(p.joint_lowers[s], p.joint_uppers[s])
        } else {
            0.0
        }
    })
}

/// Which canonical slots the annotation populates.
pub fn mapped_mask(a: &HandAnnotation) -> [bool; NUM_SLOTS] {
    let mut mask = [false; NUM_SLOTS];
    for m in &a.joint_map {
        mask[m.slot] = true;
    }
    mask
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::JointMapping;

    fn annotation() -> HandAnnotation {
        HandAnnotation {
            joint_map: vec![
                JointMapping::new("a", 5, 1),
                JointMapping::new("b", 6, -1),
                JointMapping::new("c", 0, 1),
            ],
            ..HandAnnotation::default()
        }
    }

    #[test]
    fn sign_and_dummies() {
        let a = annotation();
        let c = to_canonical(&[0.1, 0.3, -0.2], &a).unwrap();
        assert_eq!(c[5], 0.1);
        assert_eq!(c[6], -0.3);
        assert_eq!(c[0], -0.2);
        assert_eq!(c.iter().filter(|v| **v != 0.0).count(), 3);
        assert_eq!(to_canonical(&[0.0; 3], &a).unwrap(), [0.0; NUM_SLOTS]);
        assert_eq!(to_original(&c, &a), vec![0.1, 0.3, -0.2]);
        assert_eq!(
            to_canonical(&[0.0; 2], &a),
            Err(ActionMapError::DimensionMismatch {
                expected: 3,
                got: 2
            })
        );
    }

    #[test]
    fn unmapped_noise_is_ignored() {
        let a = annotation();
        let mut c = to_canonical(&[0.1, 0.3, -0.2], &a).unwrap();
        let clean = to_original(&c, &a);
        c[14] = 0.7;
        c[20] = -1.1;
        assert_eq!(to_original(&c, &a), clean);
    }

    #[test]
    fn clamp_behaviour() {
        let mut p = CanonicalHandParams::palm_only(0.05, 0.01);
        p.joint_lowers[5] = -1.0;
        p.joint_uppers[5] = 1.0;
        let mut c = [0.0; NUM_SLOTS];
        c[5] = 2.0;
        c[7] = 0.4;
        let once = clamp_to_limits(&c, &p);
        assert_eq!(once[5], 1.0);
        assert_eq!(once[7], 0.0);
        assert_eq!(clamp_to_limits(&once, &p), once);
    }
}
