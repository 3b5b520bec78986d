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
//! Canonical hand data model.
//!
//! The canonical hand has up to five fingers and 22 revolute joint slots.
//! The palm frame has the palm normal along +x, the (right-hand) thumb
//! along +y and the remaining fingers along +z. Joint slots are ordered
//! thumb → little and base → tip:
//!
//! | finger | slots  | ranks |
//! |--------|--------|-------|
//! | thumb  | 0..=4  | 1..=5 |
//! | index  | 5..=8  | 1..=4 |
//! | middle | 9..=12 | 1..=4 |
//! | ring   | 13..=16| 1..=4 |
//! | little | 17..=21| 1..=5 |
//!
//! Little rank 1 is the extra metacarpal joint placed by
//! `little_extra_origin`.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::transform::{matrix_to_rpy, rot_z, rotation_distance, rpy_to_matrix, Origin};

/// Number of canonical joint slots.
pub const NUM_SLOTS: usize = 22;
/// Scalar count of [`CanonicalHandParams`] (handedness excluded).
pub const CANONICAL_PARAM_COUNT: usize = 82;
/// Scalar count of [`ExtendedHandParams`] (handedness excluded).
pub const EXTENDED_PARAM_COUNT: usize = 173;
/// Palm cylinder thickness as a multiple of the finger radius.
pub const PALM_THICKNESS_RATIO: f64 = 2.0;
/// Tolerance on the unit norm of joint axes.
pub const AXIS_NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Finger {
    Thumb,
    Index,
    Middle,
    Ring,
    Little,
}

impl Finger {
    pub const ALL: [Finger; 5] = [
        Finger::Thumb,
        Finger::Index,
        Finger::Middle,
        Finger::Ring,
        Finger::Little,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Finger::Thumb => "thumb",
            Finger::Index => "index",
            Finger::Middle => "middle",
            Finger::Ring => "ring",
            Finger::Little => "little",
        }
    }

    pub fn from_name(name: &str) -> Option<Finger> {
        Finger::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn slot_count(self) -> usize {
        match self {
            Finger::Thumb | Finger::Little => 5,
            _ => 4,
        }
    }

    pub fn first_slot(self) -> usize {
        match self {
            Finger::Thumb => 0,
            Finger::Index => 5,
            Finger::Middle => 9,
            Finger::Ring => 13,
            Finger::Little => 17,
        }
    }

    pub fn slots(self) -> std::ops::Range<usize> {
        self.first_slot()..self.first_slot() + self.slot_count()
    }

    /// Slot index of `rank` (1-based).
    pub fn slot(self, rank: usize) -> usize {
        debug_assert!(rank >= 1 && rank <= self.slot_count());
        self.first_slot() + rank - 1
    }

    /// Position of each rank along the finger, counted in link lengths.
    ///
    /// Joints sharing a station share an origin. The fingertip of a finger
    /// whose deepest active joint sits at station `s` lies at station `s + 1`.
    /// The little finger's extra joint is at station 0 and its knuckle at 1.
    pub fn stations(self) -> &'static [usize] {
        match self {
            Finger::Thumb => &[0, 0, 1, 1, 2],
            Finger::Little => &[0, 1, 1, 2, 3],
            _ => &[0, 0, 1, 2],
        }
    }

    /// Station at which the finger's first link length starts.
    pub fn first_length_station(self) -> usize {
        match self {
            Finger::Little => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for Finger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Handedness {
    Left,
    #[default]
    Right,
}

impl Handedness {
    pub fn flipped(self) -> Self {
        match self {
            Handedness::Left => Handedness::Right,
            Handedness::Right => Handedness::Left,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Handedness::Left => "left",
            Handedness::Right => "right",
        }
    }
}

/// One of the six signed coordinate directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis6 {
    #[serde(rename = "+x")]
    PosX,
    #[serde(rename = "-x")]
    NegX,
    #[serde(rename = "+y")]
    PosY,
    #[serde(rename = "-y")]
    NegY,
    #[serde(rename = "+z")]
    PosZ,
    #[serde(rename = "-z")]
    NegZ,
}

impl Axis6 {
    /// One-hot order used by the morphology vector.
    pub const ALL: [Axis6; 6] = [
        Axis6::PosX,
        Axis6::NegX,
        Axis6::PosY,
        Axis6::NegY,
        Axis6::PosZ,
        Axis6::NegZ,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Axis6> {
        Axis6::ALL.get(i).copied()
    }

    pub fn vector(self) -> [f64; 3] {
        match self {
            Axis6::PosX => [1.0, 0.0, 0.0],
            Axis6::NegX => [-1.0, 0.0, 0.0],
            Axis6::PosY => [0.0, 1.0, 0.0],
            Axis6::NegY => [0.0, -1.0, 0.0],
            Axis6::PosZ => [0.0, 0.0, 1.0],
            Axis6::NegZ => [0.0, 0.0, -1.0],
        }
    }

    /// Exact match against a signed coordinate direction.
    pub fn from_vector(v: [f64; 3]) -> Option<Axis6> {
        Axis6::ALL.into_iter().find(|a| a.vector() == v)
    }
}

pub const AXIS_X: [f64; 3] = [1.0, 0.0, 0.0];
pub const AXIS_Y: [f64; 3] = [0.0, 1.0, 0.0];

/// Static description of one of the 22 joint slots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalJointSlot {
    pub index: usize,
    pub finger: Finger,
    pub rank: usize,
    /// `None` for the two proximal thumb joints, whose axes are parameters.
    pub default_axis: Option<[f64; 3]>,
}

impl CanonicalJointSlot {
    /// Slot `index` (0..22).
    pub fn get(index: usize) -> CanonicalJointSlot {
        assert!(index < NUM_SLOTS, "slot index {index} out of range");
        let finger = Finger::ALL
            .into_iter()
            .rev()
            .find(|f| f.first_slot() <= index)
            .expect("slot table is total");
        let rank = index - finger.first_slot() + 1;
        let default_axis = match (finger, rank) {
            (Finger::Thumb, 1 | 2) => None,
            (Finger::Thumb, 3) => Some(AXIS_X),
            (Finger::Little, 1) => Some(AXIS_Y),
            (Finger::Little, 2) => Some(AXIS_X),
            (Finger::Index | Finger::Middle | Finger::Ring, 1) => Some(AXIS_X),
            _ => Some(AXIS_Y),
        };
        CanonicalJointSlot {
            index,
            finger,
            rank,
            default_axis,
        }
    }

    pub fn all() -> impl Iterator<Item = CanonicalJointSlot> {
        (0..NUM_SLOTS).map(CanonicalJointSlot::get)
    }

    /// Whether this slot is the abduction/adduction joint of its finger.
    pub fn is_abduction(&self) -> bool {
        self.default_axis == Some(AXIS_X)
    }

    pub fn station(&self) -> usize {
        self.finger.stations()[self.rank - 1]
    }
}

/// Default thumb axes used when the corresponding thumb joint is absent.
pub const DEFAULT_THUMB_AXES: [[f64; 3]; 2] = [AXIS_Y, AXIS_X];

/// The 82-scalar canonical hand parameterization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CanonicalParamsFile", into = "CanonicalParamsFile")]
pub struct CanonicalHandParams {
    pub palm_radius: f64,
    pub finger_radius: f64,
    /// Thumb L1..L3 followed by the shared non-thumb L1..L3.
    pub finger_lengths: [f64; 6],
    /// Knuckle origin of each finger in the palm frame.
    pub finger_xyz: [[f64; 3]; 5],
    /// xyz + rpy of the little finger's extra joint in the palm frame.
    pub little_extra_origin: [f64; 6],
    pub thumb_rpy: [f64; 3],
    pub thumb_axes: [[f64; 3]; 2],
    pub joint_lowers: [f64; NUM_SLOTS],
    pub joint_uppers: [f64; NUM_SLOTS],
    pub handedness: Handedness,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CanonicalParamsFile {
    palm_radius: f64,
    finger_radius: f64,
    finger_lengths: Vec<f64>,
    finger_xyz: Vec<f64>,
    little_extra_origin: Vec<f64>,
    thumb_rpy: Vec<f64>,
    thumb_axes: Vec<f64>,
    joint_lowers: Vec<f64>,
    joint_uppers: Vec<f64>,
    #[serde(default)]
    handedness: Handedness,
}

fn fixed<const N: usize>(name: &str, v: &[f64]) -> Result<[f64; N], String> {
    v.try_into()
        .map_err(|_| format!("`{name}` must have {N} entries, found {}", v.len()))
}

fn triples<const N: usize>(name: &str, v: &[f64]) -> Result<[[f64; 3]; N], String> {
    if v.len() != 3 * N {
        return Err(format!(
            "`{name}` must have {} entries, found {}",
            3 * N,
            v.len()
        ));
    }
    let mut out = [[0.0; 3]; N];
    for (i, c) in v.chunks_exact(3).enumerate() {
        out[i] = [c[0], c[1], c[2]];
    }
    Ok(out)
}

impl TryFrom<CanonicalParamsFile> for CanonicalHandParams {
    type Error = String;
    fn try_from(f: CanonicalParamsFile) -> Result<Self, String> {
        Ok(Self {
            palm_radius: f.palm_radius,
            finger_radius: f.finger_radius,
            finger_lengths: fixed("finger_lengths", &f.finger_lengths)?,
            finger_xyz: triples("finger_xyz", &f.finger_xyz)?,
            little_extra_origin: fixed("little_extra_origin", &f.little_extra_origin)?,
            thumb_rpy: fixed("thumb_rpy", &f.thumb_rpy)?,
            thumb_axes: triples("thumb_axes", &f.thumb_axes)?,
            joint_lowers: fixed("joint_lowers", &f.joint_lowers)?,
            joint_uppers: fixed("joint_uppers", &f.joint_uppers)?,
            handedness: f.handedness,
        })
    }
}

impl From<CanonicalHandParams> for CanonicalParamsFile {
    fn from(p: CanonicalHandParams) -> Self {
        Self {
            palm_radius: p.palm_radius,
            finger_radius: p.finger_radius,
            finger_lengths: p.finger_lengths.to_vec(),
            finger_xyz: p.finger_xyz.concat(),
            little_extra_origin: p.little_extra_origin.to_vec(),
            thumb_rpy: p.thumb_rpy.to_vec(),
            thumb_axes: p.thumb_axes.concat(),
            joint_lowers: p.joint_lowers.to_vec(),
            joint_uppers: p.joint_uppers.to_vec(),
            handedness: p.handedness,
        }
    }
}

/// One violated invariant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            field: field.into(),
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        let msgs: Vec<_> = self.violations.iter().map(|v| v.message.as_str()).collect();
        f.write_str(&msgs.join("; "))
    }
}

fn check_axis(report: &mut ValidationReport, field: &str, a: &[f64; 3]) {
    if a.iter().any(|c| !c.is_finite()) {
        report.push(field, format!("{field} has non-finite components"));
        return;
    }
    let n = Vector3::from(*a).norm();
    if (n - 1.0).abs() > AXIS_NORM_TOL {
        report.push(field, format!("{field} is not unit norm (|a| = {n})"));
    }
}

fn check_limits(report: &mut ValidationReport, lowers: &[f64], uppers: &[f64]) {
    for (i, (lo, hi)) in lowers.iter().zip(uppers).enumerate() {
        if !lo.is_finite() || !hi.is_finite() {
            report.push("joint_limits", format!("non-finite limit at slot {i}"));
        } else if lo > hi {
            report.push("joint_limits", format!("limit ordering at slot {i}"));
        }
    }
}

fn active_from_limits(lowers: &[f64; NUM_SLOTS], uppers: &[f64; NUM_SLOTS]) -> [bool; NUM_SLOTS] {
    std::array::from_fn(|i| lowers[i] < uppers[i])
}

impl CanonicalHandParams {
    /// Degenerate hand: palm only, every slot zero-range.
    pub fn palm_only(palm_radius: f64, finger_radius: f64) -> Self {
        Self {
            palm_radius,
            finger_radius,
            finger_lengths: [0.0; 6],
            finger_xyz: [[0.0; 3]; 5],
            little_extra_origin: [0.0; 6],
            thumb_rpy: [0.0; 3],
            thumb_axes: DEFAULT_THUMB_AXES,
            joint_lowers: [0.0; NUM_SLOTS],
            joint_uppers: [0.0; NUM_SLOTS],
            handedness: Handedness::Right,
        }
    }

    /// Flatten to the 82 scalars in table order.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(CANONICAL_PARAM_COUNT);
        v.push(self.palm_radius);
        v.push(self.finger_radius);
        v.extend_from_slice(&self.finger_lengths);
        v.extend(self.finger_xyz.iter().flatten());
        v.extend_from_slice(&self.little_extra_origin);
        v.extend_from_slice(&self.thumb_rpy);
        v.extend(self.thumb_axes.iter().flatten());
        v.extend_from_slice(&self.joint_lowers);
        v.extend_from_slice(&self.joint_uppers);
        v
    }

    /// Inverse of [`Self::to_vec`].
    pub fn from_slice(v: &[f64], handedness: Handedness) -> Option<Self> {
        if v.len() != CANONICAL_PARAM_COUNT {
            return None;
        }
        let mut it = v.iter().copied();
        let mut take = |n: usize| -> Vec<f64> { it.by_ref().take(n).collect() };
        let palm_radius = take(1)[0];
        let finger_radius = take(1)[0];
        let finger_lengths = fixed::<6>("", &take(6)).ok()?;
        let finger_xyz = triples::<5>("", &take(15)).ok()?;
        let little_extra_origin = fixed::<6>("", &take(6)).ok()?;
        let thumb_rpy = fixed::<3>("", &take(3)).ok()?;
        let thumb_axes = triples::<2>("", &take(6)).ok()?;
        let joint_lowers = fixed::<NUM_SLOTS>("", &take(22)).ok()?;
        let joint_uppers = fixed::<NUM_SLOTS>("", &take(22)).ok()?;
        Some(Self {
            palm_radius,
            finger_radius,
            finger_lengths,
            finger_xyz,
            little_extra_origin,
            thumb_rpy,
            thumb_axes,
            joint_lowers,
            joint_uppers,
            handedness,
        })
    }

    pub fn active_mask(&self) -> [bool; NUM_SLOTS] {
        active_from_limits(&self.joint_lowers, &self.joint_uppers)
    }

    pub fn is_active(&self, slot: usize) -> bool {
        self.joint_lowers[slot] < self.joint_uppers[slot]
    }

    pub fn finger_present(&self, finger: Finger) -> bool {
        finger.slots().any(|s| self.is_active(s))
    }

    /// Deepest active rank of `finger`, if any.
    pub fn deepest_active_rank(&self, finger: Finger) -> Option<usize> {
        (1..=finger.slot_count())
            .rev()
            .find(|&r| self.is_active(finger.slot(r)))
    }

    /// Link lengths (L1, L2, L3) used by `finger`.
    pub fn lengths_of(&self, finger: Finger) -> [f64; 3] {
        let l = &self.finger_lengths;
        match finger {
            Finger::Thumb => [l[0], l[1], l[2]],
            _ => [l[3], l[4], l[5]],
        }
    }

    pub fn extra_origin(&self) -> Origin {
        let e = &self.little_extra_origin;
        Origin {
            xyz: [e[0], e[1], e[2]],
            rpy: [e[3], e[4], e[5]],
        }
    }

    /// Report violated invariants; never fails.
    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        let n = self.to_vec().len();
        if n != CANONICAL_PARAM_COUNT {
            r.push("count", format!("expected {CANONICAL_PARAM_COUNT} scalars, found {n}"));
        }
        if !(self.palm_radius.is_finite() && self.palm_radius > 0.0) {
            r.push("palm_radius", "palm_radius must be positive");
        }
        if !(self.finger_radius.is_finite() && self.finger_radius > 0.0) {
            r.push("finger_radius", "finger_radius must be positive");
        }
        for (i, l) in self.finger_lengths.iter().enumerate() {
            if !(l.is_finite() && *l >= 0.0) {
                r.push("finger_lengths", format!("finger_lengths[{i}] must be non-negative"));
            }
        }
        let geometric = self
            .finger_xyz
            .iter()
            .flatten()
            .chain(&self.little_extra_origin)
            .chain(&self.thumb_rpy);
        if geometric.into_iter().any(|v| !v.is_finite()) {
            r.push("origins", "non-finite finger origin or thumb frame value");
        }
        for (i, a) in self.thumb_axes.iter().enumerate() {
            check_axis(&mut r, &format!("thumb_axes[{i}]"), a);
        }
        check_limits(&mut r, &self.joint_lowers, &self.joint_uppers);
        r
    }

    /// Opposite-handed copy, reflected across the palm xz-plane.
    ///
    /// Exact involution: only sign flips are applied.
    pub fn mirrored(&self) -> Self {
        let mut m = self.clone();
        for xyz in m.finger_xyz.iter_mut() {
            xyz[1] = -xyz[1];
        }
        // M Rz(y) Ry(p) Rx(r) M = Rz(-y) Ry(p) Rx(-r) with M = diag(1, -1, 1)
        m.thumb_rpy = [-self.thumb_rpy[0], self.thumb_rpy[1], -self.thumb_rpy[2]];
        for axis in m.thumb_axes.iter_mut() {
            axis[1] = -axis[1];
        }
        let e = &self.little_extra_origin;
        m.little_extra_origin = [e[0], -e[1], e[2], -e[3], e[4], -e[5]];
        m.handedness = self.handedness.flipped();
        m
    }

    /// Which of the finger's three lengths are fixed by the geometry a
    /// generated URDF exposes (joint positions plus fingertip frame).
    pub fn observed_lengths(&self, finger: Finger) -> [bool; 3] {
        let mut seen = [false; 3];
        let Some(deepest) = self.deepest_active_rank(finger) else {
            return seen;
        };
        let stations = finger.stations();
        let tip = stations[deepest - 1] + 1;
        let first = finger.first_length_station();
        for (k, s) in seen.iter_mut().enumerate() {
            *s = first + k < tip;
        }
        seen
    }

    /// The representative that extraction recovers from `generate_urdf(self)`.
    ///
    /// Fields that leave no trace in the generated URDF are reset: origins of
    /// absent fingers, axes of absent thumb joints, the extra little-finger
    /// origin when that joint is absent, and link lengths no finger reaches
    /// (a missing third length falls back to the mean of the first two).
    ///
    /// A thumb with no joint past rank 2 is turned about its z axis so its
    /// first axis reads +y.
    ///
    /// Exact recovery additionally needs each present finger's active slots
    /// to cover consecutive stations from its base, a short thumb's first
    /// axis to lie off the thumb z axis, and the extra little-finger frame to
    /// keep its z axis in the palm plane.
    pub fn normalized(&self) -> Self {
        let mut p = self.clone();
        for f in Finger::ALL {
            if !self.finger_present(f) {
                p.finger_xyz[f.index()] = [0.0; 3];
            }
        }
        if !self.finger_present(Finger::Thumb) {
            p.thumb_rpy = [0.0; 3];
        }
        for k in 0..2 {
            if !self.is_active(Finger::Thumb.slot(k + 1)) {
                p.thumb_axes[k] = DEFAULT_THUMB_AXES[k];
            }
        }
        if matches!(self.deepest_active_rank(Finger::Thumb), Some(1 | 2)) {
            // only the proximal axis fixes the roll; turn it onto +y
            let turn = match Axis6::from_vector(p.thumb_axes[0]) {
                Some(Axis6::PosX) => Some(-FRAC_PI_2),
                Some(Axis6::NegX) => Some(FRAC_PI_2),
                Some(Axis6::NegY) => Some(PI),
                _ => None,
            };
            if let Some(t) = turn {
                let q = rot_z(t);
                let r = rpy_to_matrix(p.thumb_rpy) * q;
                p.thumb_rpy = matrix_to_rpy(&r);
                for k in 0..2 {
                    if self.is_active(Finger::Thumb.slot(k + 1)) {
                        let v = q.transpose() * Vector3::from(p.thumb_axes[k]);
                        p.thumb_axes[k] = v.map(f64::round).into();
                    }
                }
            }
        }
        if !self.is_active(Finger::Little.slot(1)) {
            p.little_extra_origin = [0.0; 6];
        }
        let thumb_seen = self.observed_lengths(Finger::Thumb);
        let mut shared_seen = [false; 3];
        for f in &Finger::ALL[1..] {
            for (s, o) in shared_seen.iter_mut().zip(self.observed_lengths(*f)) {
                *s |= o;
            }
        }
        let fix = |lengths: &mut [f64], seen: [bool; 3]| {
            for k in 0..2 {
                if !seen[k] {
                    lengths[k] = 0.0;
                }
            }
            if !seen[2] {
                lengths[2] = if seen[0] && seen[1] {
                    0.5 * (lengths[0] + lengths[1])
                } else {
                    0.0
                };
            }
        };
        fix(&mut p.finger_lengths[0..3], thumb_seen);
        fix(&mut p.finger_lengths[3..6], shared_seen);
        p
    }
}

/// Largest differences between two parameter sets.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ParamDeviation {
    /// Over radii, lengths, finger bases and the extra joint position.
    pub continuous: f64,
    /// Frobenius distance over the thumb and extra-joint rotations.
    pub rotation: f64,
    pub limits_exact: bool,
    pub axes_exact: bool,
}

impl ParamDeviation {
    pub fn within(&self, tol: f64) -> bool {
        self.continuous <= tol && self.rotation <= tol && self.limits_exact && self.axes_exact
    }
}

impl CanonicalHandParams {
    pub fn deviation(&self, other: &CanonicalHandParams) -> ParamDeviation {
        let mut pairs: Vec<(f64, f64)> = vec![
            (self.palm_radius, other.palm_radius),
            (self.finger_radius, other.finger_radius),
        ];
        pairs.extend(self.finger_lengths.into_iter().zip(other.finger_lengths));
        pairs.extend(
            self.finger_xyz
                .iter()
                .flatten()
                .copied()
                .zip(other.finger_xyz.iter().flatten().copied()),
        );
        pairs.extend(
            self.little_extra_origin[..3]
                .iter()
                .copied()
                .zip(other.little_extra_origin[..3].iter().copied()),
        );
        let continuous = pairs.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let rot = |a: &[f64], b: &[f64]| {
            rotation_distance(
                &rpy_to_matrix([a[0], a[1], a[2]]),
                &rpy_to_matrix([b[0], b[1], b[2]]),
            )
        };
        let rotation = rot(&self.thumb_rpy, &other.thumb_rpy).max(rot(
            &self.little_extra_origin[3..],
            &other.little_extra_origin[3..],
        ));
        ParamDeviation {
            continuous,
            rotation,
            limits_exact: self.joint_lowers == other.joint_lowers
                && self.joint_uppers == other.joint_uppers,
            axes_exact: self.thumb_axes == other.thumb_axes,
        }
    }
}

/// Number of active slots and the active mask.
pub fn active_dof(p: &CanonicalHandParams) -> (usize, [bool; NUM_SLOTS]) {
    let mask = p.active_mask();
    (mask.iter().filter(|a| **a).count(), mask)
}

pub fn validate_params(p: &CanonicalHandParams) -> ValidationReport {
    p.validate()
}

pub fn mirror_handedness(p: &CanonicalHandParams) -> CanonicalHandParams {
    p.mirrored()
}

/// Extended slots carrying an explicit origin and axis, in storage order:
/// thumb ranks 1-3, index/middle/ring ranks 1-2, little ranks 1-3.
pub const PARAMETERIZED_SLOTS: [usize; 12] = [0, 1, 2, 5, 6, 9, 10, 13, 14, 17, 18, 19];

/// Position of `slot` within [`PARAMETERIZED_SLOTS`].
pub fn parameterized_index(slot: usize) -> Option<usize> {
    PARAMETERIZED_SLOTS.iter().position(|&s| s == slot)
}

/// The 173-scalar extended parameterization.
///
/// Each parameterized joint's origin is relative to the frame of the
/// previous joint in its finger (the palm for rank 1). The two distal joints
/// of every finger sit at `(0, 0, L)` along the preceding link with
/// `rpy = 0` and axis +y, where the finger's three lengths are the links
/// after its last parameterized joint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExtendedParamsFile", into = "ExtendedParamsFile")]
pub struct ExtendedHandParams {
    pub palm_radius: f64,
    pub finger_radii: [f64; 5],
    pub finger_lengths: [[f64; 3]; 5],
    pub joint_origins: [Origin; 12],
    pub joint_axes: [[f64; 3]; 12],
    pub joint_lowers: [f64; NUM_SLOTS],
    pub joint_uppers: [f64; NUM_SLOTS],
    pub handedness: Handedness,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ExtendedParamsFile {
    palm_radius: f64,
    finger_radii: Vec<f64>,
    finger_lengths: Vec<f64>,
    joint_origins: Vec<f64>,
    joint_axes: Vec<f64>,
    joint_lowers: Vec<f64>,
    joint_uppers: Vec<f64>,
    #[serde(default)]
    handedness: Handedness,
}

impl TryFrom<ExtendedParamsFile> for ExtendedHandParams {
    type Error = String;
    fn try_from(f: ExtendedParamsFile) -> Result<Self, String> {
        if f.joint_origins.len() != 72 {
            return Err(format!(
                "`joint_origins` must have 72 entries, found {}",
                f.joint_origins.len()
            ));
        }
        let mut joint_origins = [Origin::default(); 12];
        for (o, c) in joint_origins.iter_mut().zip(f.joint_origins.chunks_exact(6)) {
            *o = Origin {
                xyz: [c[0], c[1], c[2]],
                rpy: [c[3], c[4], c[5]],
            };
        }
        Ok(Self {
            palm_radius: f.palm_radius,
            finger_radii: fixed("finger_radii", &f.finger_radii)?,
            finger_lengths: triples("finger_lengths", &f.finger_lengths)?,
            joint_origins,
            joint_axes: triples("joint_axes", &f.joint_axes)?,
            joint_lowers: fixed("joint_lowers", &f.joint_lowers)?,
            joint_uppers: fixed("joint_uppers", &f.joint_uppers)?,
            handedness: f.handedness,
        })
    }
}

impl From<ExtendedHandParams> for ExtendedParamsFile {
    fn from(p: ExtendedHandParams) -> Self {
        Self {
            palm_radius: p.palm_radius,
            finger_radii: p.finger_radii.to_vec(),
            finger_lengths: p.finger_lengths.concat(),
            joint_origins: p
                .joint_origins
                .iter()
                .flat_map(|o| o.xyz.into_iter().chain(o.rpy))
                .collect(),
            joint_axes: p.joint_axes.concat(),
            joint_lowers: p.joint_lowers.to_vec(),
            joint_uppers: p.joint_uppers.to_vec(),
            handedness: p.handedness,
        }
    }
}

impl ExtendedHandParams {
    pub fn to_vec(&self) -> Vec<f64> {
        let file: ExtendedParamsFile = self.clone().into();
        let mut v = Vec::with_capacity(EXTENDED_PARAM_COUNT);
        v.push(file.palm_radius);
        v.extend(file.finger_radii);
        v.extend(file.finger_lengths);
        v.extend(file.joint_origins);
        v.extend(file.joint_axes);
        v.extend(file.joint_lowers);
        v.extend(file.joint_uppers);
        v
    }

    pub fn active_mask(&self) -> [bool; NUM_SLOTS] {
        active_from_limits(&self.joint_lowers, &self.joint_uppers)
    }

    pub fn active_dof(&self) -> usize {
        self.active_mask().iter().filter(|a| **a).count()
    }

    pub fn is_active(&self, slot: usize) -> bool {
        self.joint_lowers[slot] < self.joint_uppers[slot]
    }

    pub fn finger_present(&self, finger: Finger) -> bool {
        finger.slots().any(|s| self.is_active(s))
    }

    /// Origin and axis of `slot` relative to the previous joint frame.
    pub fn joint_frame(&self, slot: usize) -> (Origin, [f64; 3]) {
        if let Some(k) = parameterized_index(slot) {
            return (self.joint_origins[k], self.joint_axes[k]);
        }
        let s = CanonicalJointSlot::get(slot);
        let n = s.finger.slot_count();
        // ranks n-1 and n are the two distal joints
        let len_idx = s.rank + 2 - n;
        let z = self.finger_lengths[s.finger.index()][len_idx - 1];
        (
            Origin {
                xyz: [0.0, 0.0, z],
                rpy: [0.0; 3],
            },
            AXIS_Y,
        )
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        let n = self.to_vec().len();
        if n != EXTENDED_PARAM_COUNT {
            r.push("count", format!("expected {EXTENDED_PARAM_COUNT} scalars, found {n}"));
        }
        if !(self.palm_radius.is_finite() && self.palm_radius > 0.0) {
            r.push("palm_radius", "palm_radius must be positive");
        }
        for (i, rad) in self.finger_radii.iter().enumerate() {
            if !(rad.is_finite() && *rad > 0.0) {
                r.push("finger_radii", format!("finger_radii[{i}] must be positive"));
            }
        }
        for (i, l) in self.finger_lengths.iter().flatten().enumerate() {
            if !(l.is_finite() && *l >= 0.0) {
                r.push("finger_lengths", format!("finger_lengths[{i}] must be non-negative"));
            }
        }
        for (i, o) in self.joint_origins.iter().enumerate() {
            if o.xyz.iter().chain(&o.rpy).any(|v| !v.is_finite()) {
                r.push("joint_origins", format!("joint_origins[{i}] is not finite"));
            }
        }
        for (i, a) in self.joint_axes.iter().enumerate() {
            check_axis(&mut r, &format!("joint_axes[{i}]"), a);
        }
        check_limits(&mut r, &self.joint_lowers, &self.joint_uppers);
        r
    }
}

/// `rpy` of the inverse of `rpy`.
pub(crate) fn inverse_rpy(rpy: [f64; 3]) -> [f64; 3] {
    matrix_to_rpy(&rpy_to_matrix(rpy).transpose())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shadowish() -> CanonicalHandParams {
        let mut p = CanonicalHandParams::palm_only(0.045, 0.01);
        p.finger_lengths = [0.038, 0.032, 0.027, 0.045, 0.025, 0.026];
        p.finger_xyz = [
            [0.0, 0.034, 0.02],
            [0.0, 0.033, 0.095],
            [0.0, 0.011, 0.099],
            [0.0, -0.011, 0.095],
            [0.0, -0.033, 0.086],
        ];
        p.thumb_rpy = [-1.2, 0.3, 0.1];
        p.thumb_axes = [[0.0, 0.8, 0.6], [1.0, 0.0, 0.0]];
        p.little_extra_origin = [0.0, -0.017, 0.02, -0.4, 0.0, 0.0];
        for s in 0..NUM_SLOTS {
            p.joint_lowers[s] = -0.3;
            p.joint_uppers[s] = 1.2;
        }
        p
    }

    #[test]
    fn slot_layout_is_total() {
        let counts: Vec<usize> = Finger::ALL.iter().map(|f| f.slot_count()).collect();
        assert_eq!(counts, vec![5, 4, 4, 4, 5]);
        assert_eq!(counts.iter().sum::<usize>(), NUM_SLOTS);
        for slot in CanonicalJointSlot::all() {
            assert_eq!(slot.finger.slot(slot.rank), slot.index);
        }
        let x_slots: Vec<usize> = CanonicalJointSlot::all()
            .filter(|s| s.default_axis == Some(AXIS_X))
            .map(|s| s.index)
            .collect();
        assert_eq!(x_slots, vec![2, 5, 9, 13, 18]);
        assert!(CanonicalJointSlot::get(0).default_axis.is_none());
        assert!(CanonicalJointSlot::get(1).default_axis.is_none());
        assert_eq!(CanonicalJointSlot::get(17).default_axis, Some(AXIS_Y));
    }

    #[test]
    fn parameter_counts() {
        let p = shadowish();
        assert_eq!(p.to_vec().len(), 82);
        assert_eq!(1 + 1 + 6 + 15 + 6 + 3 + 6 + 22 + 22, CANONICAL_PARAM_COUNT);
        assert_eq!(1 + 5 + 15 + 72 + 36 + 22 + 22, EXTENDED_PARAM_COUNT);
        let back = CanonicalHandParams::from_slice(&p.to_vec(), p.handedness).unwrap();
        assert_eq!(back, p);
        assert!(CanonicalHandParams::from_slice(&[0.0; 81], Handedness::Right).is_none());
    }

    #[test]
    fn degenerate_hand_is_valid_with_zero_dof() {
        let p = CanonicalHandParams {
            thumb_axes: [[1.0, 0.0, 0.0], [1.0, 0.0, 0.0]],
            ..CanonicalHandParams::palm_only(0.05, 0.05)
        };
        assert!(p.validate().is_valid());
        assert_eq!(active_dof(&p).0, 0);
        assert!(Finger::ALL.iter().all(|f| !p.finger_present(*f)));
    }

    #[test]
    fn inverted_limit_is_reported_by_slot() {
        let mut p = shadowish();
        p.joint_lowers[3] = 0.2;
        p.joint_uppers[3] = 0.1;
        let report = validate_params(&p);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].message, "limit ordering at slot 3");
    }

    #[test]
    fn non_unit_axis_and_bad_radius_are_reported() {
        let mut p = shadowish();
        p.thumb_axes[1] = [1.0, 1.0, 0.0];
        p.palm_radius = 0.0;
        p.finger_lengths[2] = -0.01;
        let report = p.validate();
        assert_eq!(report.violations.len(), 3, "{report}");
    }

    #[test]
    fn equal_limits_mean_inactive() {
        let mut p = shadowish();
        p.joint_lowers[7] = 0.4;
        p.joint_uppers[7] = 0.4;
        let (n, mask) = active_dof(&p);
        assert_eq!(n, 21);
        assert!(!mask[7]);
    }

    #[test]
    fn mirror_fixed_point_and_involution() {
        let mut p = CanonicalHandParams::palm_only(0.04, 0.01);
        p.finger_xyz[1] = [0.0, 0.0, 0.09];
        p.thumb_axes = [AXIS_X, [0.0, 0.0, 1.0]];
        let m = p.mirrored();
        assert_eq!(m.handedness, Handedness::Left);
        // -0.0 == 0.0, so the y-free hand is a fixed point up to the flag
        assert_eq!(
            CanonicalHandParams {
                handedness: Handedness::Right,
                ..m
            },
            p
        );
        let q = shadowish();
        assert_eq!(q.mirrored().mirrored(), q);
        assert_eq!(active_dof(&q.mirrored()).0, active_dof(&q).0);
    }

    #[test]
    fn json_round_trip_uses_flat_keys() {
        let p = shadowish();
        let text = serde_json::to_string(&p).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["finger_xyz"].as_array().unwrap().len(), 15);
        assert_eq!(v["thumb_axes"].as_array().unwrap().len(), 6);
        assert_eq!(v["handedness"], "right");
        let back: CanonicalHandParams = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        let bad = text.replace("\"thumb_rpy\":[", "\"thumb_rpy\":[0.0,");
        assert!(serde_json::from_str::<CanonicalHandParams>(&bad).is_err());
    }

    #[test]
    fn observed_lengths_follow_stations() {
        let mut p = CanonicalHandParams::palm_only(0.04, 0.01);
        p.finger_lengths = [0.05, 0.04, 0.03, 0.05, 0.03, 0.02];
        // index ranks 1..=3 active: L1 and L2 reached, L3 not
        for s in 5..8 {
            p.joint_uppers[s] = 1.0;
        }
        assert_eq!(p.observed_lengths(Finger::Index), [true, true, false]);
        let n = p.normalized();
        assert_eq!(&n.finger_lengths[3..], &[0.05, 0.03, 0.04]);
        assert_eq!(&n.finger_lengths[..3], &[0.0, 0.0, 0.0]);
        // little extra only: no link lengths reached
        let mut q = CanonicalHandParams::palm_only(0.04, 0.01);
        q.joint_uppers[17] = 1.0;
        assert_eq!(q.observed_lengths(Finger::Little), [false; 3]);
        q.joint_uppers[18] = 1.0;
        assert_eq!(q.observed_lengths(Finger::Little), [true, false, false]);
    }

    #[test]
    fn extended_joint_frames() {
        let e = ExtendedHandParams {
            palm_radius: 0.04,
            finger_radii: [0.01; 5],
            finger_lengths: [[0.0, 0.03, 0.02], [0.05, 0.03, 0.02], [0.05, 0.03, 0.02], [0.05, 0.03, 0.02], [0.04, 0.03, 0.02]],
            joint_origins: [Origin::default(); 12],
            joint_axes: [AXIS_Y; 12],
            joint_lowers: [0.0; NUM_SLOTS],
            joint_uppers: [1.0; NUM_SLOTS],
            handedness: Handedness::Right,
        };
        assert_eq!(e.to_vec().len(), EXTENDED_PARAM_COUNT);
        // index rank 3 sits L1 along the link after rank 2
        assert_eq!(e.joint_frame(7).0.xyz, [0.0, 0.0, 0.05]);
        assert_eq!(e.joint_frame(8).0.xyz, [0.0, 0.0, 0.03]);
        // thumb rank 4 uses the thumb's first length
        assert_eq!(e.joint_frame(3).0.xyz, [0.0, 0.0, 0.0]);
        assert_eq!(e.joint_frame(4).0.xyz, [0.0, 0.0, 0.03]);
        assert_eq!(e.joint_frame(20).0.xyz, [0.0, 0.0, 0.04]);
        let text = serde_json::to_string(&e).unwrap();
        let back: ExtendedHandParams = serde_json::from_str(&text).unwrap();
        assert_eq!(back, e);
        assert!(e.validate().is_valid());
    }
}
