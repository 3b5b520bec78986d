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
//! Canonical URDF generation.
//!
//! Both parameter sets are first lowered to a [`Skeleton`]: for every finger,
//! the full chain of joint slots with their offsets relative to the previous
//! slot. The emitter then walks each chain, instantiating a revolute joint
//! only for active slots and folding the offsets of inactive slots into the
//! next emitted joint.
//!
//! Naming: the palm link is `palm`, joints `{finger}_joint{rank}`, their
//! child links `{finger}_link{rank}`, and every present finger ends in a
//! fixed joint `{finger}_tip_joint` carrying the geometry-free link
//! `{finger}_tip` at the fingertip.

use nalgebra::{Matrix3, Vector3};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

use crate::hand_model::{
    inverse_rpy, CanonicalHandParams, ExtendedHandParams, Finger, ValidationReport, AXIS_X,
    AXIS_Y, NUM_SLOTS, PALM_THICKNESS_RATIO,
};
use crate::transform::{matrix_to_rpy, z_to, Origin, Transform};
use crate::urdf::{
    Geom, Inertial, JointKind, JointLimit, Shape, UrdfError, UrdfJoint, UrdfLink, UrdfModel,
};

/// Uniform density used for link inertials, kg/m³.
pub const DENSITY: f64 = 1000.0;
/// Mass and inertia given to moving links that carry no geometry.
pub const PLACEHOLDER_MASS: f64 = 0.001;
pub const PLACEHOLDER_INERTIA: f64 = 1e-8;
pub const JOINT_EFFORT: f64 = 10.0;
pub const JOINT_VELOCITY: f64 = 5.0;
/// Offsets shorter than this are treated as coincident joint origins.
pub const COINCIDENT_TOL: f64 = 1e-12;

pub const PALM_LINK: &str = "palm";

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("invalid parameters: {0}")]
    InvalidParams(ValidationReport),
    #[error("invalid variant `{0}`: expected leap_xyzw with digits 0..=3")]
    InvalidVariant(String),
    #[error(transparent)]
    Urdf(#[from] UrdfError),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GenerateOptions {
    /// Emit `<capsule>` instead of cylinder + two spheres.
    pub capsule_tag: bool,
    /// Robot name; defaults to `canonical_hand_{handedness}`.
    pub name: Option<String>,
}

pub fn joint_name(finger: Finger, rank: usize) -> String {
    format!("{finger}_joint{rank}")
}

pub fn link_name(finger: Finger, rank: usize) -> String {
    format!("{finger}_link{rank}")
}

pub fn tip_link_name(finger: Finger) -> String {
    format!("{finger}_tip")
}

pub fn tip_joint_name(finger: Finger) -> String {
    format!("{finger}_tip_joint")
}

/// One joint slot of a finger chain.
#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub slot: usize,
    /// Offset from the previous slot frame (the palm for rank 1).
    pub offset: Transform,
    pub axis: [f64; 3],
    /// Whether the offset into this node is a link carrying a capsule.
    pub segment: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FingerChain {
    pub finger: Finger,
    pub radius: f64,
    pub nodes: Vec<Node>,
    /// Offset from the last slot frame to the end of the distal link.
    pub end: Transform,
}

impl FingerChain {
    fn offset(&self, i: usize) -> &Transform {
        if i < self.nodes.len() {
            &self.nodes[i].offset
        } else {
            &self.end
        }
    }

    fn is_segment(&self, i: usize) -> bool {
        i >= self.nodes.len() || self.nodes[i].segment
    }

    /// Index of the fingertip node (`nodes.len()` meaning the end point):
    /// the first node past `deepest` whose origin is apart from it.
    pub fn tip_index(&self, deepest: usize) -> usize {
        let mut acc = Transform::identity();
        for i in deepest + 1..=self.nodes.len() {
            acc = acc * *self.offset(i);
            if acc.translation.norm() > COINCIDENT_TOL {
                return i;
            }
        }
        self.nodes.len()
    }
}

/// Joint chains of a hand, independent of the parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct Skeleton {
    pub palm_radius: f64,
    pub palm_thickness: f64,
    pub fingers: Vec<FingerChain>,
    pub lowers: [f64; NUM_SLOTS],
    pub uppers: [f64; NUM_SLOTS],
    pub handedness: crate::hand_model::Handedness,
}

impl Skeleton {
    pub fn is_active(&self, slot: usize) -> bool {
        self.lowers[slot] < self.uppers[slot]
    }
}

fn translation(x: f64, y: f64, z: f64) -> Transform {
    Transform::from_translation(Vector3::new(x, y, z))
}

fn node(slot: usize, offset: Transform, axis: [f64; 3], segment: bool) -> Node {
    Node {
        slot,
        offset,
        axis,
        segment,
    }
}

/// Origin of the little-finger knuckle relative to the extra joint frame,
/// chosen so the knuckle is palm-aligned at `finger_xyz` in the zero pose.
pub fn little_knuckle_origin(p: &CanonicalHandParams) -> Origin {
    let extra = p.extra_origin();
    let re = crate::transform::rpy_to_matrix(extra.rpy);
    let k = Vector3::from(p.finger_xyz[Finger::Little.index()]);
    let d = re.transpose() * (k - Vector3::from(extra.xyz));
    Origin {
        xyz: d.into(),
        rpy: inverse_rpy(extra.rpy),
    }
}

/// Skeleton of the canonical parameterization.
pub fn canonical_skeleton(p: &CanonicalHandParams) -> Skeleton {
    let mut fingers = Vec::new();
    for f in Finger::ALL {
        let [l1, l2, l3] = p.lengths_of(f);
        let xyz = p.finger_xyz[f.index()];
        let nodes = match f {
            Finger::Thumb => vec![
                node(0, Transform::from_xyz_rpy(xyz, p.thumb_rpy), p.thumb_axes[0], false),
                node(1, Transform::identity(), p.thumb_axes[1], true),
                node(2, translation(0.0, 0.0, l1), AXIS_X, true),
                node(3, Transform::identity(), AXIS_Y, true),
                node(4, translation(0.0, 0.0, l2), AXIS_Y, true),
            ],
            Finger::Little => {
                let s = f.first_slot();
                vec![
                    node(s, p.extra_origin().to_transform(), AXIS_Y, false),
                    node(s + 1, little_knuckle_origin(p).to_transform(), AXIS_X, false),
                    node(s + 2, Transform::identity(), AXIS_Y, true),
                    node(s + 3, translation(0.0, 0.0, l1), AXIS_Y, true),
                    node(s + 4, translation(0.0, 0.0, l2), AXIS_Y, true),
                ]
            }
            _ => {
                let s = f.first_slot();
                vec![
                    node(s, Transform::from_xyz_rpy(xyz, [0.0; 3]), AXIS_X, false),
                    node(s + 1, Transform::identity(), AXIS_Y, true),
                    node(s + 2, translation(0.0, 0.0, l1), AXIS_Y, true),
                    node(s + 3, translation(0.0, 0.0, l2), AXIS_Y, true),
                ]
            }
        };
        fingers.push(FingerChain {
            finger: f,
            radius: p.finger_radius,
            nodes,
            end: translation(0.0, 0.0, l3),
        });
    }
    Skeleton {
        palm_radius: p.palm_radius,
        palm_thickness: PALM_THICKNESS_RATIO * p.finger_radius,
        fingers,
        lowers: p.joint_lowers,
        uppers: p.joint_uppers,
        handedness: p.handedness,
    }
}

/// Skeleton of the extended parameterization.
pub fn extended_skeleton(e: &ExtendedHandParams) -> Skeleton {
    let fingers = Finger::ALL
        .into_iter()
        .map(|f| {
            let nodes = f
                .slots()
                .enumerate()
                .map(|(k, slot)| {
                    let (origin, axis) = e.joint_frame(slot);
                    node(slot, origin.to_transform(), axis, k > 0)
                })
                .collect();
            FingerChain {
                finger: f,
                radius: e.finger_radii[f.index()],
                nodes,
                end: translation(0.0, 0.0, e.finger_lengths[f.index()][2]),
            }
        })
        .collect();
    let mean_radius = e.finger_radii.iter().sum::<f64>() / 5.0;
    Skeleton {
        palm_radius: e.palm_radius,
        palm_thickness: PALM_THICKNESS_RATIO * mean_radius,
        fingers,
        lowers: e.joint_lowers,
        uppers: e.joint_uppers,
        handedness: e.handedness,
    }
}

/// Capsule between two points of a link frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Capsule {
    pub start: Vector3<f64>,
    pub end: Vector3<f64>,
    pub radius: f64,
}

impl Capsule {
    pub fn length(&self) -> f64 {
        (self.end - self.start).norm()
    }

    fn rotation(&self) -> Matrix3<f64> {
        z_to(&(self.end - self.start))
    }

    fn geoms(&self, capsule_tag: bool) -> Vec<Geom> {
        let mid = (self.start + self.end) * 0.5;
        let body = Origin {
            xyz: mid.into(),
            rpy: matrix_to_rpy(&self.rotation()),
        };
        let h = self.length();
        if capsule_tag {
            return vec![Geom {
                origin: body,
                shape: Shape::Capsule {
                    radius: self.radius,
                    length: h,
                },
            }];
        }
        let cap = |p: Vector3<f64>| Geom {
            origin: Origin {
                xyz: p.into(),
                rpy: [0.0; 3],
            },
            shape: Shape::Sphere {
                radius: self.radius,
            },
        };
        vec![
            Geom {
                origin: body,
                shape: Shape::Cylinder {
                    radius: self.radius,
                    length: h,
                },
            },
            cap(self.start),
            cap(self.end),
        ]
    }

    /// Mass and inertia about the centre, in the link frame.
    fn mass_properties(&self) -> (f64, Matrix3<f64>) {
        let r = self.radius;
        let h = self.length();
        let pi = std::f64::consts::PI;
        let mc = DENSITY * pi * r * r * h;
        let ms = DENSITY * 4.0 / 3.0 * pi * r * r * r;
        let izz = mc * r * r / 2.0 + ms * 2.0 * r * r / 5.0;
        let ixx = mc * (h * h / 12.0 + r * r / 4.0)
            + ms * (2.0 * r * r / 5.0 + h * h / 4.0 + 3.0 * h * r / 8.0);
        let local = Matrix3::from_diagonal(&Vector3::new(ixx, ixx, izz));
        let rot = self.rotation();
        (mc + ms, rot * local * rot.transpose())
    }
}

fn combine_inertia(parts: &[(f64, Vector3<f64>, Matrix3<f64>)]) -> Inertial {
    let mass: f64 = parts.iter().map(|p| p.0).sum();
    let com = parts.iter().map(|p| p.1 * p.0).sum::<Vector3<f64>>() / mass;
    let mut inertia = Matrix3::zeros();
    for (m, c, i) in parts {
        let d = c - com;
        inertia += i + (Matrix3::identity() * d.dot(&d) - d * d.transpose()) * *m;
    }
    Inertial {
        origin: Origin {
            xyz: com.into(),
            rpy: [0.0; 3],
        },
        mass,
        inertia: [
            inertia[(0, 0)],
            inertia[(0, 1)],
            inertia[(0, 2)],
            inertia[(1, 1)],
            inertia[(1, 2)],
            inertia[(2, 2)],
        ],
    }
}

fn placeholder_inertial() -> Inertial {
    let i = PLACEHOLDER_INERTIA;
    Inertial {
        origin: Origin::default(),
        mass: PLACEHOLDER_MASS,
        inertia: [i, 0.0, 0.0, i, 0.0, i],
    }
}

fn capsule_link(name: String, capsules: &[Capsule], capsule_tag: bool) -> UrdfLink {
    let mut link = UrdfLink::new(name);
    if capsules.is_empty() {
        link.inertial = Some(placeholder_inertial());
        return link;
    }
    let mut parts = Vec::new();
    for c in capsules {
        let geoms = c.geoms(capsule_tag);
        link.visuals.extend(geoms.iter().cloned());
        link.collisions.extend(geoms);
        let (m, i) = c.mass_properties();
        parts.push((m, (c.start + c.end) * 0.5, i));
    }
    link.inertial = Some(combine_inertia(&parts));
    link
}

fn palm_link(radius: f64, thickness: f64) -> UrdfLink {
    let mut link = UrdfLink::new(PALM_LINK);
    let geom = Geom {
        origin: Origin {
            xyz: [0.0; 3],
            rpy: [0.0, std::f64::consts::FRAC_PI_2, 0.0],
        },
        shape: Shape::Cylinder {
            radius,
            length: thickness,
        },
    };
    link.visuals.push(geom.clone());
    link.collisions.push(geom);
    let m = DENSITY * std::f64::consts::PI * radius * radius * thickness;
    let iax = m * radius * radius / 2.0;
    let irad = m * (3.0 * radius * radius + thickness * thickness) / 12.0;
    link.inertial = Some(Inertial {
        origin: Origin::default(),
        mass: m,
        inertia: [iax, 0.0, 0.0, irad, 0.0, irad],
    });
    link
}

/// Instantiate a skeleton as a URDF model.
pub fn emit(skeleton: &Skeleton, name: &str, capsule_tag: bool) -> Result<UrdfModel, UrdfError> {
    let mut links = vec![palm_link(skeleton.palm_radius, skeleton.palm_thickness)];
    let mut joints = Vec::new();
    for chain in &skeleton.fingers {
        let active: Vec<usize> = (0..chain.nodes.len())
            .filter(|&i| skeleton.is_active(chain.nodes[i].slot))
            .collect();
        let (Some(&first), Some(&deepest)) = (active.first(), active.last()) else {
            continue;
        };
        let tip = chain.tip_index(deepest);
        let f = chain.finger;
        // (link name, rank, capsules) of the link currently being built
        let mut current: Option<(String, Vec<Capsule>)> = None;
        let mut parent = PALM_LINK.to_string();
        let mut pending = Transform::identity();
        for i in 0..=tip {
            let offset = chain.offset(i);
            let next = pending * *offset;
            if i > first && chain.is_segment(i) {
                let (start, end) = (pending.translation, next.translation);
                if (end - start).norm() > COINCIDENT_TOL {
                    if let Some((_, caps)) = current.as_mut() {
                        caps.push(Capsule {
                            start,
                            end,
                            radius: chain.radius,
                        });
                    }
                }
            }
            if i == tip {
                pending = next;
                break;
            }
            let n = &chain.nodes[i];
            if skeleton.is_active(n.slot) {
                let rank = n.slot - f.first_slot() + 1;
                let child = link_name(f, rank);
                joints.push(UrdfJoint {
                    name: joint_name(f, rank),
                    kind: JointKind::Revolute,
                    parent: parent.clone(),
                    child: child.clone(),
                    origin: Origin::from_transform(&next),
                    axis: n.axis,
                    limit: Some(JointLimit {
                        lower: skeleton.lowers[n.slot],
                        upper: skeleton.uppers[n.slot],
                        effort: JOINT_EFFORT,
                        velocity: JOINT_VELOCITY,
                    }),
                });
                if let Some((name, caps)) = current.take() {
                    links.push(capsule_link(name, &caps, capsule_tag));
                }
                current = Some((child.clone(), Vec::new()));
                parent = child;
                pending = Transform::identity();
            } else {
                pending = next;
            }
        }
        if let Some((name, caps)) = current.take() {
            links.push(capsule_link(name, &caps, capsule_tag));
        }
        links.push(UrdfLink::new(tip_link_name(f)));
        joints.push(UrdfJoint {
            name: tip_joint_name(f),
            kind: JointKind::Fixed,
            parent,
            child: tip_link_name(f),
            origin: Origin::from_transform(&pending),
            axis: [1.0, 0.0, 0.0],
            limit: None,
        });
    }
    UrdfModel::from_parts(name, links, joints)
}

fn check(report: ValidationReport) -> Result<(), GenerateError> {
    if report.is_valid() {
        Ok(())
    } else {
        Err(GenerateError::InvalidParams(report))
    }
}

pub fn generate_model(
    p: &CanonicalHandParams,
    opts: &GenerateOptions,
) -> Result<UrdfModel, GenerateError> {
    check(p.validate())?;
    let name = opts
        .name
        .clone()
        .unwrap_or_else(|| format!("canonical_hand_{}", p.handedness.name()));
    Ok(emit(&canonical_skeleton(p), &name, opts.capsule_tag)?)
}

/// Canonical URDF text for `p`.
pub fn generate_urdf(p: &CanonicalHandParams) -> Result<String, GenerateError> {
    generate_urdf_with(p, &GenerateOptions::default())
}

pub fn generate_urdf_with(
    p: &CanonicalHandParams,
    opts: &GenerateOptions,
) -> Result<String, GenerateError> {
    Ok(generate_model(p, opts)?.to_xml())
}

pub fn generate_extended_model(
    e: &ExtendedHandParams,
    opts: &GenerateOptions,
) -> Result<UrdfModel, GenerateError> {
    check(e.validate())?;
    let name = opts
        .name
        .clone()
        .unwrap_or_else(|| format!("canonical_hand_extended_{}", e.handedness.name()));
    Ok(emit(&extended_skeleton(e), &name, opts.capsule_tag)?)
}

pub fn generate_extended_urdf(e: &ExtendedHandParams) -> Result<String, GenerateError> {
    generate_extended_urdf_with(e, &GenerateOptions::default())
}

pub fn generate_extended_urdf_with(
    e: &ExtendedHandParams,
    opts: &GenerateOptions,
) -> Result<String, GenerateError> {
    Ok(generate_extended_model(e, opts)?.to_xml())
}

/// Embed canonical parameters in the extended parameterization.
pub fn promote(p: &CanonicalHandParams) -> Result<ExtendedHandParams, GenerateError> {
    check(p.validate())?;
    let at = |xyz: [f64; 3], rpy: [f64; 3]| Origin { xyz, rpy };
    let zero = Origin::default();
    let [t1, t2, t3] = p.lengths_of(Finger::Thumb);
    let shared = p.lengths_of(Finger::Index);
    let mut origins = [zero; 12];
    let mut axes = [AXIS_Y; 12];
    // thumb ranks 1-3
    origins[0] = at(p.finger_xyz[0], p.thumb_rpy);
    axes[0] = p.thumb_axes[0];
    axes[1] = p.thumb_axes[1];
    origins[2] = at([0.0, 0.0, t1], [0.0; 3]);
    axes[2] = AXIS_X;
    // index, middle, ring ranks 1-2
    for (k, f) in [Finger::Index, Finger::Middle, Finger::Ring].into_iter().enumerate() {
        origins[3 + 2 * k] = at(p.finger_xyz[f.index()], [0.0; 3]);
        axes[3 + 2 * k] = AXIS_X;
    }
    // little ranks 1-3
    origins[9] = p.extra_origin();
    origins[10] = little_knuckle_origin(p);
    axes[10] = AXIS_X;
    Ok(ExtendedHandParams {
        palm_radius: p.palm_radius,
        finger_radii: [p.finger_radius; 5],
        finger_lengths: [
            [0.0, t2, t3],
            shared,
            shared,
            shared,
            shared,
        ],
        joint_origins: origins,
        joint_axes: axes,
        joint_lowers: p.joint_lowers,
        joint_uppers: p.joint_uppers,
        handedness: p.handedness,
    })
}

/// A `leap_xyzw` variant: links kept on thumb, index, middle and little.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeapVariantId {
    pub x: u8,
    pub y: u8,
    pub z: u8,
    pub w: u8,
}

/// Fingers addressed by the four variant digits.
pub const LEAP_FINGERS: [Finger; 4] = [Finger::Thumb, Finger::Index, Finger::Middle, Finger::Little];

impl LeapVariantId {
    pub fn new(x: u8, y: u8, z: u8, w: u8) -> Result<Self, GenerateError> {
        let id = Self { x, y, z, w };
        if id.digits().iter().any(|d| *d > 3) {
            return Err(GenerateError::InvalidVariant(format!("leap_{x}{y}{z}{w}")));
        }
        Ok(id)
    }

    pub const ORIGINAL: LeapVariantId = LeapVariantId {
        x: 3,
        y: 3,
        z: 3,
        w: 3,
    };

    pub fn digits(&self) -> [u8; 4] {
        [self.x, self.y, self.z, self.w]
    }

    pub fn total(&self) -> u32 {
        self.digits().iter().map(|d| *d as u32).sum()
    }

    pub fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for LeapVariantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "leap_{}{}{}{}", self.x, self.y, self.z, self.w)
    }
}

impl FromStr for LeapVariantId {
    type Err = GenerateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GenerateError::InvalidVariant(s.to_string());
        let digits = s.strip_prefix("leap_").ok_or_else(bad)?;
        let d: Vec<u8> = digits
            .chars()
            .map(|c| c.to_digit(10).map(|v| v as u8))
            .collect::<Option<_>>()
            .ok_or_else(bad)?;
        match d[..] {
            [x, y, z, w] => LeapVariantId::new(x, y, z, w).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

/// All ids with digit sum at least `min_total`, in lexicographic order.
pub fn enumerate_variants(min_total: u32) -> Vec<LeapVariantId> {
    let mut out = Vec::new();
    for x in 0..4 {
        for y in 0..4 {
            for z in 0..4 {
                for w in 0..4 {
                    let id = LeapVariantId { x, y, z, w };
                    if id.total() >= min_total {
                        out.push(id);
                    }
                }
            }
        }
    }
    out
}

/// Reduce the base LEAP hand to `id`.
///
/// A finger with `k` links keeps its proximal `k + 1` active joints; link
/// lengths past the new fingertip are zeroed. `k = 0` removes the finger.
pub fn make_leap_variant(base: &ExtendedHandParams, id: LeapVariantId) -> ExtendedHandParams {
    if id == LeapVariantId::ORIGINAL {
        return base.clone();
    }
    let mut e = base.clone();
    for (f, k) in LEAP_FINGERS.into_iter().zip(id.digits()) {
        let active: Vec<usize> = f.slots().filter(|&s| base.is_active(s)).collect();
        let keep = if k == 0 { 0 } else { k as usize + 1 };
        for &s in active.iter().skip(keep) {
            e.joint_lowers[s] = 0.0;
            e.joint_uppers[s] = 0.0;
        }
        if k == 0 || active.is_empty() {
            continue;
        }
        let deepest = active[keep.min(active.len()) - 1];
        let chain = extended_skeleton(&e)
            .fingers
            .into_iter()
            .nth(f.index())
            .expect("five fingers");
        let tip = chain.tip_index(deepest - f.first_slot());
        // lengths ℓ1..ℓ3 feed the two distal slots and the end point
        let n = f.slot_count();
        for (j, node_index) in [n - 2, n - 1, n].into_iter().enumerate() {
            if node_index > tip {
                e.finger_lengths[f.index()][j] = 0.0;
            }
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::urdf::parse_urdf;
    use std::path::Path;

    pub(crate) fn sample_params() -> CanonicalHandParams {
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
        p.little_extra_origin = [0.0, -0.017, 0.02, -0.4, 0.0, 0.0];
        for s in 0..NUM_SLOTS {
            p.joint_lowers[s] = -0.3;
            p.joint_uppers[s] = 1.2;
        }
        p
    }

    #[test]
    fn degenerate_hand_is_palm_only() {
        let p = CanonicalHandParams::palm_only(0.05, 0.05);
        let m = parse_urdf(&generate_urdf(&p).unwrap(), Path::new(".")).unwrap();
        assert_eq!(m.links.len(), 1);
        assert!(m.joints.is_empty());
        assert_eq!(m.root_link, PALM_LINK);
    }

    #[test]
    fn full_hand_has_22_revolute_joints() {
        let p = sample_params();
        let text = generate_urdf(&p).unwrap();
        let m = parse_urdf(&text, Path::new(".")).unwrap();
        assert_eq!(m.revolute_count(), 22);
        assert_eq!(m.links.len(), m.joints.len() + 1);
        assert_eq!(generate_urdf(&p).unwrap(), text);
        assert_eq!(m, generate_model(&p, &GenerateOptions::default()).unwrap());
    }

    #[test]
    fn inactive_slots_have_no_joint() {
        let mut p = sample_params();
        for s in [1, 6, 10, 13, 14, 15, 16, 17] {
            p.joint_lowers[s] = 0.0;
            p.joint_uppers[s] = 0.0;
        }
        let m = generate_model(&p, &GenerateOptions::default()).unwrap();
        for s in 0..NUM_SLOTS {
            let slot = crate::hand_model::CanonicalJointSlot::get(s);
            let present = m.joint(&joint_name(slot.finger, slot.rank)).is_some();
            assert_eq!(present, p.is_active(s), "slot {s}");
        }
        assert!(m.link("ring_tip").is_none());
        assert!(m.link("little_tip").is_some());
    }

    #[test]
    fn invalid_params_are_rejected() {
        let mut p = sample_params();
        p.joint_lowers[3] = 0.2;
        p.joint_uppers[3] = 0.1;
        let err = generate_urdf(&p).unwrap_err().to_string();
        assert!(err.contains("slot 3"), "{err}");
    }

    #[test]
    fn capsule_tag_option() {
        let p = sample_params();
        let opts = GenerateOptions {
            capsule_tag: true,
            name: None,
        };
        let text = generate_urdf_with(&p, &opts).unwrap();
        assert!(text.contains("<capsule"));
        assert!(!text.contains("<sphere"));
        let m = parse_urdf(&text, Path::new(".")).unwrap();
        assert_eq!(m.revolute_count(), 22);
    }

    #[test]
    fn promote_keeps_active_dof() {
        let p = sample_params();
        let e = promote(&p).unwrap();
        assert_eq!(e.to_vec().len(), crate::hand_model::EXTENDED_PARAM_COUNT);
        let m = generate_extended_model(&e, &GenerateOptions::default()).unwrap();
        assert_eq!(m.revolute_count(), 22);
        let z = promote(&CanonicalHandParams::palm_only(0.05, 0.01)).unwrap();
        assert_eq!(z.active_dof(), 0);
    }

    #[test]
    fn variant_enumeration_counts() {
        assert_eq!(enumerate_variants(0).len(), 256);
        assert_eq!(enumerate_variants(8).len(), 66);
        assert_eq!(enumerate_variants(12), vec![LeapVariantId::ORIGINAL]);
        let brute = (0..256u32)
            .filter(|i| (i & 3) + ((i >> 2) & 3) + ((i >> 4) & 3) + ((i >> 6) & 3) >= 8)
            .count();
        assert_eq!(brute, 66);
        let ids = enumerate_variants(0);
        assert!(ids.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn variant_names_parse() {
        let id: LeapVariantId = "leap_3033".parse().unwrap();
        assert_eq!(id.digits(), [3, 0, 3, 3]);
        assert_eq!(id.name(), "leap_3033");
        assert!("leap_4000".parse::<LeapVariantId>().is_err());
        assert!("leap_333".parse::<LeapVariantId>().is_err());
        assert!("lea_3333".parse::<LeapVariantId>().is_err());
    }
}
