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
//! Canonical parameter extraction from a parsed URDF and a hand annotation.
//!
//! All geometry is evaluated at the zero configuration and expressed in the
//! canonical palm frame given by `palm_origin`.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;
use thiserror::Error;

use crate::generate::{joint_name, tip_link_name, PALM_LINK};
use crate::hand_model::{
    Axis6, CanonicalHandParams, CanonicalJointSlot, Finger, Handedness, DEFAULT_THUMB_AXES,
    NUM_SLOTS, PALM_THICKNESS_RATIO,
};
use crate::kinematics::fk_urdf;
use crate::mesh::Aabb;
use crate::transform::{matrix_to_rpy, Origin, Transform};
use crate::urdf::{JointKind, UrdfError, UrdfModel};

/// Axis components this close to a signed coordinate direction snap to it.
pub const AXIS_SNAP_TOL: f64 = 1e-9;
/// `|axis · z|` above `1 - DEGENERATE_TOL` cannot define a frame.
pub const DEGENERATE_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error(transparent)]
    Urdf(#[from] UrdfError),
    #[error("ambiguous palm: candidates {0:?}")]
    AmbiguousPalm(Vec<String>),
    #[error("no link parents two or more revolute joints")]
    NoPalmFound,
    #[error("no geometry on {0}")]
    EmptyGeometry(String),
    #[error("missing chain: {0}")]
    MissingChain(String),
    #[error("degenerate frame: {0}")]
    DegenerateFrame(String),
    #[error("invalid annotation: {0}")]
    InvalidAnnotation(String),
    #[error("cannot read annotation {path}: {reason}")]
    AnnotationFile { path: String, reason: String },
}

/// One `joint_map` entry: `[joint, slot, sign]` with an optional fourth
/// element `offset` (canonical = sign * original + offset).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawMapping", into = "RawMapping")]
pub struct JointMapping {
    pub joint: String,
    pub slot: usize,
    pub sign: i8,
    pub offset: f64,
}

impl JointMapping {
    pub fn new(joint: impl Into<String>, slot: usize, sign: i8) -> Self {
        Self {
            joint: joint.into(),
            slot,
            sign,
            offset: 0.0,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawMapping {
    Plain(String, usize, i8),
    WithOffset(String, usize, i8, f64),
}

impl From<RawMapping> for JointMapping {
    fn from(r: RawMapping) -> Self {
        match r {
            RawMapping::Plain(joint, slot, sign) => JointMapping::new(joint, slot, sign),
            RawMapping::WithOffset(joint, slot, sign, offset) => JointMapping {
                joint,
                slot,
                sign,
                offset,
            },
        }
    }
}

impl From<JointMapping> for RawMapping {
    fn from(m: JointMapping) -> Self {
        if m.offset == 0.0 {
            RawMapping::Plain(m.joint, m.slot, m.sign)
        } else {
            RawMapping::WithOffset(m.joint, m.slot, m.sign, m.offset)
        }
    }
}

/// Manual inputs for extraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct HandAnnotation {
    pub joint_map: Vec<JointMapping>,
    /// Canonical palm frame expressed in the URDF root frame.
    #[serde(default)]
    pub palm_origin: Origin,
    #[serde(default)]
    pub handedness: Handedness,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub fingertip_links: BTreeMap<Finger, String>,
    /// Link whose geometry is the palm; found automatically when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub palm_link: Option<String>,
}

impl HandAnnotation {
    pub fn from_json(text: &str) -> Result<Self, ExtractError> {
        serde_json::from_str(text).map_err(|e| ExtractError::InvalidAnnotation(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ExtractError> {
        let text = std::fs::read_to_string(path).map_err(|e| ExtractError::AnnotationFile {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("annotation serializes")
    }

    /// Mapping of `slot`, if any.
    pub fn mapping(&self, slot: usize) -> Option<&JointMapping> {
        self.joint_map.iter().find(|m| m.slot == slot)
    }

    /// Mapped slots of `finger` in rank order.
    pub fn finger_mappings(&self, finger: Finger) -> Vec<&JointMapping> {
        let mut v: Vec<_> = self
            .joint_map
            .iter()
            .filter(|m| finger.slots().contains(&m.slot))
            .collect();
        v.sort_by_key(|m| m.slot);
        v
    }

    /// Check the annotation against `model`.
    pub fn validate(&self, model: &UrdfModel) -> Result<(), ExtractError> {
        let bad = |msg: String| Err(ExtractError::InvalidAnnotation(msg));
        let mut slots = HashSet::new();
        let mut names = HashSet::new();
        for m in &self.joint_map {
            if m.slot >= NUM_SLOTS {
                return bad(format!("slot {} out of range for joint `{}`", m.slot, m.joint));
            }
            if m.sign != 1 && m.sign != -1 {
                return bad(format!("sign of joint `{}` must be 1 or -1", m.joint));
            }
            if !m.offset.is_finite() {
                return bad(format!("offset of joint `{}` is not finite", m.joint));
            }
            if !slots.insert(m.slot) {
                return bad(format!("slot {} mapped twice", m.slot));
            }
            if !names.insert(m.joint.as_str()) {
                return bad(format!("joint `{}` mapped twice", m.joint));
            }
            match model.joint(&m.joint) {
                None => return bad(format!("joint `{}` not in model", m.joint)),
                Some(j) if !j.kind.is_rotational() => {
                    return bad(format!("joint `{}` is not revolute", m.joint))
                }
                _ => {}
            }
        }
        for link in self.fingertip_links.values().chain(&self.palm_link) {
            if model.link(link).is_none() {
                return bad(format!("link `{link}` not in model"));
            }
        }
        Ok(())
    }
}

/// Annotation for a URDF produced by this crate's generator, derived from
/// its joint and link names.
pub fn auto_annotation(model: &UrdfModel) -> HandAnnotation {
    let mut by_name = HashMap::new();
    for s in CanonicalJointSlot::all() {
        by_name.insert(joint_name(s.finger, s.rank), s.index);
    }
    let joint_map = model
        .joints
        .iter()
        .filter(|j| j.kind.is_rotational())
        .filter_map(|j| by_name.get(&j.name).map(|&s| JointMapping::new(j.name.clone(), s, 1)))
        .collect();
    let fingertip_links = Finger::ALL
        .into_iter()
        .filter(|f| model.link(&tip_link_name(*f)).is_some())
        .map(|f| (f, tip_link_name(f)))
        .collect();
    let handedness = if model.name.ends_with("_left") {
        Handedness::Left
    } else {
        Handedness::Right
    };
    HandAnnotation {
        joint_map,
        palm_origin: Origin::default(),
        handedness,
        fingertip_links,
        palm_link: model.link(PALM_LINK).map(|_| PALM_LINK.to_string()),
    }
}

/// Top link of the group of links rigidly attached to `link`.
fn rigid_root<'a>(model: &'a UrdfModel, link: &'a str) -> &'a str {
    let mut cur = link;
    while let Some(j) = model.parent_joint(cur) {
        if j.kind.is_movable() {
            break;
        }
        cur = &j.parent;
    }
    cur
}

/// The unique rigid body parenting two or more revolute joints once fixed
/// joints are collapsed. Within that body, the link that directly parents
/// the most of them is returned.
pub fn find_palm_link(model: &UrdfModel) -> Result<String, ExtractError> {
    let mut counts: Vec<(&str, usize)> = Vec::new();
    let mut direct: Vec<(&str, &str, usize)> = Vec::new();
    for j in model.joints.iter().filter(|j| j.kind.is_rotational()) {
        let root = rigid_root(model, &j.parent);
        match counts.iter_mut().find(|(l, _)| *l == root) {
            Some((_, n)) => *n += 1,
            None => counts.push((root, 1)),
        }
        match direct.iter_mut().find(|(l, _, _)| *l == j.parent) {
            Some((_, _, n)) => *n += 1,
            None => direct.push((&j.parent, root, 1)),
        }
    }
    let candidates: Vec<&str> = counts
        .into_iter()
        .filter(|(_, n)| *n >= 2)
        .map(|(l, _)| l)
        .collect();
    match candidates[..] {
        [] => Err(ExtractError::NoPalmFound),
        [root] => {
            let mut best: Option<(&str, usize)> = None;
            for (link, r, n) in direct {
                if r == root && best.is_none_or(|(_, b)| n > b) {
                    best = Some((link, n));
                }
            }
            Ok(best.map_or(root, |(l, _)| l).to_string())
        }
        _ => Err(ExtractError::AmbiguousPalm(
            candidates.into_iter().map(String::from).collect(),
        )),
    }
}

/// Zero-configuration geometry of a model in the canonical palm frame.
struct Scene<'a> {
    model: &'a UrdfModel,
    annotation: &'a HandAnnotation,
    /// Link poses in the palm frame.
    links: HashMap<String, Transform>,
}

impl<'a> Scene<'a> {
    fn new(model: &'a UrdfModel, annotation: &'a HandAnnotation) -> Result<Self, ExtractError> {
        annotation.validate(model)?;
        let palm_inv = annotation.palm_origin.to_transform().inverse();
        let links = fk_urdf(model, &HashMap::new())
            .expect("empty configuration")
            .into_iter()
            .map(|(k, t)| (k, palm_inv * t))
            .collect();
        Ok(Self {
            model,
            annotation,
            links,
        })
    }

    /// Frame of a mapped joint (before its own motion) in the palm frame.
    fn joint_frame(&self, m: &crate::extract::JointMapping) -> Transform {
        let j = self.model.joint(&m.joint).expect("validated");
        self.links[&j.parent] * j.origin.to_transform()
    }

    fn joint_position(&self, m: &JointMapping) -> Vector3<f64> {
        self.joint_frame(m).translation
    }

    /// Axis of a mapped joint in the palm frame, with the canonical sign.
    fn joint_axis(&self, m: &JointMapping) -> Vector3<f64> {
        let j = self.model.joint(&m.joint).expect("validated");
        let a = self.joint_frame(m).rotation * j.axis_vector();
        a.normalize() * f64::from(m.sign)
    }

    fn fingertip(&self, f: Finger) -> Option<Vector3<f64>> {
        self.annotation
            .fingertip_links
            .get(&f)
            .map(|l| self.links[l].translation)
    }

    fn link_box_in_palm(&self, link: &str) -> Result<Aabb, ExtractError> {
        Ok(self.model.link_aabb(link)?.transformed(&self.links[link]))
    }
}

/// Palm radius: mean of the palm box's y and z extents, halved.
pub fn estimate_palm_radius(
    model: &UrdfModel,
    palm_link: &str,
    palm_origin: &Origin,
) -> Result<f64, ExtractError> {
    let annotation = HandAnnotation {
        palm_origin: *palm_origin,
        ..HandAnnotation::default()
    };
    let scene = Scene::new(model, &annotation)?;
    let e = scene.link_box_in_palm(palm_link)?.extents();
    Ok((e[1] + e[2]) / 4.0)
}

/// Links below each mapped finger's base joint.
pub fn finger_links(model: &UrdfModel, a: &HandAnnotation) -> Vec<String> {
    let mut out = Vec::new();
    for f in Finger::ALL {
        if let Some(m) = a.finger_mappings(f).first() {
            if let Some(j) = model.joint(&m.joint) {
                out.extend(model.subtree(&j.child));
            }
        }
    }
    out
}

/// Mean over the given links that carry geometry of half their smallest
/// box extent.
pub fn estimate_finger_radius(model: &UrdfModel, links: &[String]) -> Result<f64, ExtractError> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for l in links {
        match model.link_aabb(l) {
            Ok(b) => {
                let e = b.extents();
                sum += e[0].min(e[1]).min(e[2]) / 2.0;
                n += 1;
            }
            Err(UrdfError::EmptyGeometry(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    if n == 0 {
        return Err(ExtractError::EmptyGeometry("all finger links".into()));
    }
    Ok(sum / n as f64)
}

/// Joint and fingertip positions of one finger, indexed by station.
fn station_positions(scene: &Scene, f: Finger) -> BTreeMap<usize, Vector3<f64>> {
    let mut at = BTreeMap::new();
    let maps = scene.annotation.finger_mappings(f);
    for m in &maps {
        let st = CanonicalJointSlot::get(m.slot).station();
        at.entry(st).or_insert_with(|| scene.joint_position(m));
    }
    if let (Some(last), Some(tip)) = (maps.last(), scene.fingertip(f)) {
        let st = CanonicalJointSlot::get(last.slot).station() + 1;
        at.entry(st).or_insert(tip);
    }
    at
}

fn observed_lengths(scene: &Scene, f: Finger) -> [Option<f64>; 3] {
    let at = station_positions(scene, f);
    let first = f.first_length_station();
    std::array::from_fn(|k| {
        let a = at.get(&(first + k))?;
        let b = at.get(&(first + k + 1))?;
        Some((b - a).norm())
    })
}

fn finish_lengths(observed: [Option<f64>; 3]) -> [f64; 3] {
    let [l1, l2, l3] = observed;
    let l3 = match (l3, l1, l2) {
        (Some(v), _, _) => v,
        (None, Some(a), Some(b)) => 0.5 * (a + b),
        _ => 0.0,
    };
    [l1.unwrap_or(0.0), l2.unwrap_or(0.0), l3]
}

fn mean_observed(values: &[[Option<f64>; 3]]) -> [Option<f64>; 3] {
    std::array::from_fn(|k| {
        let seen: Vec<f64> = values.iter().filter_map(|v| v[k]).collect();
        if seen.is_empty() {
            None
        } else {
            Some(seen.iter().sum::<f64>() / seen.len() as f64)
        }
    })
}

fn lengths(scene: &Scene) -> [f64; 6] {
    let thumb = finish_lengths(observed_lengths(scene, Finger::Thumb));
    let others: Vec<_> = Finger::ALL[1..]
        .iter()
        .map(|f| observed_lengths(scene, *f))
        .collect();
    let shared = finish_lengths(mean_observed(&others));
    [thumb[0], thumb[1], thumb[2], shared[0], shared[1], shared[2]]
}

/// Thumb L1..L3 and the shared non-thumb L1..L3.
///
/// Lengths are distances between joint origins at consecutive stations
/// (and the fingertip link, when annotated). A missing L3 is the mean of
/// L1 and L2; other unobserved lengths are 0.
pub fn extract_finger_lengths(
    model: &UrdfModel,
    a: &HandAnnotation,
) -> Result<[f64; 6], ExtractError> {
    Ok(lengths(&Scene::new(model, a)?))
}

fn bases(scene: &Scene) -> [[f64; 3]; 5] {
    let mut out = [[0.0; 3]; 5];
    for f in Finger::ALL {
        let maps = scene.annotation.finger_mappings(f);
        let pos = match f {
            Finger::Little => maps
                .iter()
                .find(|m| m.slot > f.first_slot())
                .map(|m| scene.joint_position(m))
                .or_else(|| maps.first().and_then(|_| scene.fingertip(f)))
                .or_else(|| maps.first().map(|m| scene.joint_position(m))),
            _ => maps.first().map(|m| scene.joint_position(m)),
        };
        if let Some(p) = pos {
            out[f.index()] = p.into();
        }
    }
    out
}

/// Knuckle origin of each finger in the palm frame; absent fingers are 0.
pub fn extract_finger_bases(
    model: &UrdfModel,
    a: &HandAnnotation,
) -> Result<[[f64; 3]; 5], ExtractError> {
    Ok(bases(&Scene::new(model, a)?))
}

fn snap_axis(v: Vector3<f64>) -> [f64; 3] {
    for a in Axis6::ALL {
        let c = Vector3::from(a.vector());
        if (v - c).amax() <= AXIS_SNAP_TOL {
            return a.vector();
        }
    }
    v.normalize().into()
}

fn thumb_matrix(scene: &Scene) -> Result<Option<Matrix3<f64>>, ExtractError> {
    let maps = scene.annotation.finger_mappings(Finger::Thumb);
    let Some(first) = maps.first() else {
        return Ok(None);
    };
    let base = scene.joint_position(first);
    let tip = match scene.fingertip(Finger::Thumb) {
        Some(t) => t,
        None if maps.len() >= 2 => scene.joint_position(maps[maps.len() - 1]),
        None => {
            return Err(ExtractError::MissingChain(
                "thumb needs two mapped joints or a fingertip link".into(),
            ))
        }
    };
    let d = tip - base;
    if d.norm() <= crate::generate::COINCIDENT_TOL {
        return Err(ExtractError::DegenerateFrame("thumb base and tip coincide".into()));
    }
    let z = d.normalize();
    // joints past the base have fixed thumb-frame axes; prefer those
    let reference = maps
        .iter()
        .find(|m| CanonicalJointSlot::get(m.slot).rank >= 3)
        .unwrap_or(first);
    let a = scene.joint_axis(reference);
    if a.dot(&z).abs() > 1.0 - DEGENERATE_TOL {
        return Err(ExtractError::DegenerateFrame(format!(
            "axis of `{}` is parallel to the thumb direction",
            reference.joint
        )));
    }
    let r = (a - z * a.dot(&z)).normalize();
    let (x, y) = if CanonicalJointSlot::get(reference.slot).rank == 3 {
        (r, z.cross(&r))
    } else {
        (r.cross(&z), r)
    };
    Ok(Some(Matrix3::from_columns(&[x, y, z])))
}

/// Orientation of the thumb base frame relative to the palm, as rpy.
///
/// +z points from the thumb base to the tip. The first mapped thumb joint of
/// rank 3 or deeper fixes the roll (rank 3 turns about +x, ranks 4 and 5
/// about +y); a thumb with only ranks 1 and 2 takes +y from its first joint.
pub fn extract_thumb_frame(model: &UrdfModel, a: &HandAnnotation) -> Result<[f64; 3], ExtractError> {
    let scene = Scene::new(model, a)?;
    Ok(thumb_matrix(&scene)?.map(|m| matrix_to_rpy(&m)).unwrap_or([0.0; 3]))
}

fn thumb_axes(scene: &Scene, frame: &Matrix3<f64>) -> [[f64; 3]; 2] {
    std::array::from_fn(|k| match scene.annotation.mapping(k) {
        Some(m) => snap_axis(frame.transpose() * scene.joint_axis(m)),
        None => DEFAULT_THUMB_AXES[k],
    })
}

/// Axes of thumb ranks 1-2 in the thumb frame `thumb_rpy`.
pub fn extract_thumb_axes(
    model: &UrdfModel,
    a: &HandAnnotation,
    thumb_rpy: [f64; 3],
) -> Result<[[f64; 3]; 2], ExtractError> {
    let scene = Scene::new(model, a)?;
    Ok(thumb_axes(&scene, &crate::transform::rpy_to_matrix(thumb_rpy)))
}

fn little_extra(scene: &Scene) -> Result<[f64; 6], ExtractError> {
    let Some(m) = scene.annotation.mapping(Finger::Little.first_slot()) else {
        return Ok([0.0; 6]);
    };
    let y = scene.joint_axis(m);
    let up = Vector3::x();
    let x = up - y * up.dot(&y);
    if x.norm() < DEGENERATE_TOL {
        return Err(ExtractError::DegenerateFrame(format!(
            "axis of `{}` is along the palm normal",
            m.joint
        )));
    }
    let x = x.normalize();
    let z = x.cross(&y);
    let rpy = matrix_to_rpy(&Matrix3::from_columns(&[x, y, z]));
    let p = scene.joint_position(m);
    Ok([p.x, p.y, p.z, rpy[0], rpy[1], rpy[2]])
}

/// Frame of the extra little-finger joint: +y along its axis, +x toward the
/// palm normal. Zeros when the joint is not mapped.
pub fn extract_little_extra_origin(
    model: &UrdfModel,
    a: &HandAnnotation,
) -> Result<[f64; 6], ExtractError> {
    little_extra(&Scene::new(model, a)?)
}

/// Limits per slot: mapped slots copy the URDF limits with the sign applied
/// (sign -1 maps `(lo, hi)` to `(-hi, -lo)`); unmapped slots are `(0, 0)`.
pub fn extract_joint_limits(
    model: &UrdfModel,
    a: &HandAnnotation,
) -> ([f64; NUM_SLOTS], [f64; NUM_SLOTS]) {
    let mut lo = [0.0; NUM_SLOTS];
    let mut hi = [0.0; NUM_SLOTS];
    for m in &a.joint_map {
        let Some(j) = model.joint(&m.joint) else {
            continue;
        };
        let (l, u) = j.range();
        let (l, u) = if m.sign < 0 { (-u, -l) } else { (l, u) };
        let (l, u) = if m.offset == 0.0 {
            (l, u)
        } else {
            (l + m.offset, u + m.offset)
        };
        lo[m.slot] = l;
        hi[m.slot] = u;
    }
    (lo, hi)
}

fn palm_link_for(model: &UrdfModel, a: &HandAnnotation) -> Result<String, ExtractError> {
    if let Some(l) = &a.palm_link {
        return Ok(l.clone());
    }
    match find_palm_link(model) {
        Ok(l) => Ok(l),
        Err(ExtractError::NoPalmFound) => {
            // a single chain: the rigid body its first mapped joint hangs from
            let first = a.joint_map.iter().min_by_key(|m| m.slot);
            Ok(match first.and_then(|m| model.joint(&m.joint)) {
                Some(j) => rigid_root(model, &j.parent).to_string(),
                None => model.root_link.clone(),
            })
        }
        Err(e) => Err(e),
    }
}

/// Run every extractor and assemble canonical parameters.
pub fn extract_all(model: &UrdfModel, a: &HandAnnotation) -> Result<CanonicalHandParams, ExtractError> {
    let scene = Scene::new(model, a)?;
    let palm = palm_link_for(model, a)?;
    let palm_box = scene.link_box_in_palm(&palm).map_err(|e| match e {
        ExtractError::Urdf(UrdfError::EmptyGeometry(l)) => ExtractError::EmptyGeometry(l),
        other => other,
    })?;
    let e = palm_box.extents();
    let palm_radius = (e[1] + e[2]) / 4.0;
    let finger_radius = match estimate_finger_radius(model, &finger_links(model, a)) {
        Ok(r) => r,
        Err(ExtractError::EmptyGeometry(_)) => e[0] / PALM_THICKNESS_RATIO,
        Err(other) => return Err(other),
    };
    let frame = thumb_matrix(&scene)?;
    let thumb_rpy = frame.map(|m| matrix_to_rpy(&m)).unwrap_or([0.0; 3]);
    let thumb_axes = match frame {
        Some(m) => thumb_axes(&scene, &m),
        None => DEFAULT_THUMB_AXES,
    };
    let (joint_lowers, joint_uppers) = extract_joint_limits(model, a);
    Ok(CanonicalHandParams {
        palm_radius,
        finger_radius,
        finger_lengths: lengths(&scene),
        finger_xyz: bases(&scene),
        little_extra_origin: little_extra(&scene)?,
        thumb_rpy,
        thumb_axes,
        joint_lowers,
        joint_uppers,
        handedness: a.handedness,
    })
}

/// Whether any mapped joint of the model is continuous.
pub fn has_continuous(model: &UrdfModel, a: &HandAnnotation) -> bool {
    a.joint_map
        .iter()
        .filter_map(|m| model.joint(&m.joint))
        .any(|j| j.kind == JointKind::Continuous)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::urdf::parse_urdf;

    fn star(n: usize) -> UrdfModel {
        let mut xml = String::from(r#"<robot name="s"><link name="base"/>"#);
        for i in 0..n {
            xml += &format!(
                r#"<link name="l{i}"/><joint name="j{i}" type="revolute"><parent link="base"/>
                <child link="l{i}"/><origin xyz="0 {y} 0.09"/><axis xyz="0 1 0"/>
                <limit lower="-0.5" upper="1.2"/></joint>"#,
                y = 0.02 * i as f64
            );
        }
        xml += "</robot>";
        parse_urdf(&xml, Path::new(".")).unwrap()
    }

    #[test]
    fn palm_is_common_parent() {
        assert_eq!(find_palm_link(&star(5)).unwrap(), "base");
    }

    #[test]
    fn serial_arm_has_no_palm() {
        let mut xml = String::from(r#"<robot name="arm"><link name="l0"/>"#);
        for i in 1..=6 {
            xml += &format!(
                r#"<link name="l{i}"/><joint name="j{i}" type="revolute"><parent link="l{p}"/>
                <child link="l{i}"/><origin xyz="0 0 0.1"/><axis xyz="0 1 0"/>
                <limit lower="-1" upper="1"/></joint>"#,
                p = i - 1
            );
        }
        xml += "</robot>";
        let m = parse_urdf(&xml, Path::new(".")).unwrap();
        assert!(matches!(find_palm_link(&m), Err(ExtractError::NoPalmFound)));
    }

    #[test]
    fn limits_with_sign() {
        let m = star(2);
        let a = HandAnnotation {
            joint_map: vec![JointMapping::new("j0", 5, -1), JointMapping::new("j1", 9, 1)],
            ..Default::default()
        };
        let (lo, hi) = extract_joint_limits(&m, &a);
        assert_eq!((lo[5], hi[5]), (-1.2, 0.5));
        assert_eq!((lo[9], hi[9]), (-0.5, 1.2));
        assert_eq!((lo[0], hi[0]), (0.0, 0.0));
    }

    #[test]
    fn bases_follow_palm_origin() {
        let m = star(1);
        let mut a = HandAnnotation {
            joint_map: vec![JointMapping::new("j0", 5, 1)],
            ..Default::default()
        };
        assert_eq!(extract_finger_bases(&m, &a).unwrap()[1], [0.0, 0.0, 0.09]);
        a.palm_origin.xyz = [0.1, 0.0, 0.0];
        let b = extract_finger_bases(&m, &a).unwrap()[1];
        assert!((Vector3::from(b) - Vector3::new(-0.1, 0.0, 0.09)).norm() < 1e-15);
    }

    #[test]
    fn finger_radius_arithmetic() {
        let xml = r#"<robot name="r"><link name="a"><collision><geometry><box size="0.02 0.3 0.3"/></geometry></collision></link>
          <link name="b"><collision><geometry><box size="0.3 0.04 0.3"/></geometry></collision></link>
          <joint name="j" type="fixed"><parent link="a"/><child link="b"/></joint></robot>"#;
        let m = parse_urdf(xml, Path::new(".")).unwrap();
        let r = estimate_finger_radius(&m, &["a".into(), "b".into()]).unwrap();
        assert!((r - 0.015).abs() < 1e-15);
        let m2 = star(1);
        assert!(matches!(
            estimate_finger_radius(&m2, &["l0".into()]),
            Err(ExtractError::EmptyGeometry(_))
        ));
    }

    #[test]
    fn palm_radius_from_extents() {
        let xml = r#"<robot name="p"><link name="palm"><visual><geometry><box size="0.02 0.08 0.10"/></geometry></visual></link></robot>"#;
        let m = parse_urdf(xml, Path::new(".")).unwrap();
        let r = estimate_palm_radius(&m, "palm", &Origin::default()).unwrap();
        assert!((r - 0.045).abs() < 1e-15);
    }

    #[test]
    fn averaged_distal_length() {
        // segments 0.05 and 0.03 along +z, no fingertip link
        let xml = r#"<robot name="f"><link name="palm"/><link name="a"/><link name="b"/><link name="c"/>
          <joint name="j1" type="revolute"><parent link="palm"/><child link="a"/><origin xyz="0 0 0.1"/><axis xyz="0 1 0"/><limit lower="0" upper="1"/></joint>
          <joint name="j2" type="revolute"><parent link="a"/><child link="b"/><origin xyz="0 0 0.05"/><axis xyz="0 1 0"/><limit lower="0" upper="1"/></joint>
          <joint name="j3" type="revolute"><parent link="b"/><child link="c"/><origin xyz="0 0 0.03"/><axis xyz="0 1 0"/><limit lower="0" upper="1"/></joint></robot>"#;
        let m = parse_urdf(xml, Path::new(".")).unwrap();
        let a = HandAnnotation {
            joint_map: vec![
                JointMapping::new("j1", 6, 1),
                JointMapping::new("j2", 7, 1),
                JointMapping::new("j3", 8, 1),
            ],
            ..Default::default()
        };
        let l = extract_finger_lengths(&m, &a).unwrap();
        assert!((l[3] - 0.05).abs() < 1e-15);
        assert!((l[4] - 0.03).abs() < 1e-15);
        assert!((l[5] - 0.04).abs() < 1e-15);
    }

    #[test]
    fn annotation_json_shape() {
        let text = r#"{"joint_map": [["a", 5, 1], ["b", 6, -1, 0.25]],
            "palm_origin": {"xyz": [0, 0, 0], "rpy": [0, 0, 0]},
            "handedness": "left", "fingertip_links": {"index": "tip"}}"#;
        let a = HandAnnotation::from_json(text).unwrap();
        assert_eq!(a.joint_map[1].offset, 0.25);
        assert_eq!(a.joint_map[1].sign, -1);
        assert_eq!(a.handedness, Handedness::Left);
        assert_eq!(a.fingertip_links[&Finger::Index], "tip");
        let back = HandAnnotation::from_json(&a.to_json()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn annotation_rejects_bad_entries() {
        let m = star(2);
        let dup = HandAnnotation {
            joint_map: vec![JointMapping::new("j0", 5, 1), JointMapping::new("j1", 5, 1)],
            ..Default::default()
        };
        assert!(dup.validate(&m).is_err());
        let sign = HandAnnotation {
            joint_map: vec![JointMapping::new("j0", 5, 2)],
            ..Default::default()
        };
        assert!(sign.validate(&m).is_err());
        let missing = HandAnnotation {
            joint_map: vec![JointMapping::new("zz", 5, 1)],
            ..Default::default()
        };
        assert!(missing.validate(&m).is_err());
    }
}
