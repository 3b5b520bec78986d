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
//! URDF ingestion: a validated kinematic tree with per-link bounding geometry.
//!
//! Only links, joints, geometry and inertials are read. Materials, sensors,
//! transmissions and simulator extensions are skipped.

use nalgebra::Vector3;
use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

use crate::mesh::{load_mesh_aabb, Aabb, MeshError};
use crate::transform::{Origin, Transform};

#[derive(Debug, Error)]
pub enum UrdfError {
    #[error("malformed XML: {0}")]
    MalformedXml(String),
    #[error("<{element}> is missing attribute `{attribute}`")]
    MissingAttribute { element: String, attribute: String },
    #[error("bad value `{value}` in <{element}>")]
    BadValue { element: String, value: String },
    #[error("multiple root links: {0:?}")]
    MultipleRoots(Vec<String>),
    #[error("no root link")]
    NoRoot,
    #[error("kinematic cycle through link `{0}`")]
    CycleDetected(String),
    #[error("unresolved link reference `{0}`")]
    UnresolvedLinkRef(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("revolute joint `{0}` has no <limit>")]
    MissingLimit(String),
    #[error("joint `{0}` has a zero axis")]
    ZeroAxis(String),
    #[error("unknown link `{0}`")]
    UnknownLink(String),
    #[error("link `{0}` has no geometry")]
    EmptyGeometry(String),
    #[error("cannot resolve mesh `{0}`")]
    UnresolvedMesh(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Mesh {
        /// Filename as written in the URDF.
        filename: String,
        /// Resolved location on disk.
        path: PathBuf,
        scale: [f64; 3],
    },
    Box {
        size: [f64; 3],
    },
    Cylinder {
        radius: f64,
        length: f64,
    },
    Sphere {
        radius: f64,
    },
    /// Non-standard `<capsule>` accepted by some simulators; axis along z.
    Capsule {
        radius: f64,
        length: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Geom {
    pub origin: Origin,
    pub shape: Shape,
}

impl Geom {
    /// Bounds in the owning link's frame. Primitives are bounded
    /// analytically; meshes by their transformed vertex box.
    pub fn aabb(&self) -> Result<Aabb, UrdfError> {
        let t = self.origin.to_transform();
        let c = t.translation;
        let aabb = match &self.shape {
            Shape::Sphere { radius } => {
                let r = *radius;
                Aabb::new([c.x - r, c.y - r, c.z - r], [c.x + r, c.y + r, c.z + r])
            }
            Shape::Box { size } => {
                let h = Vector3::from(*size) * 0.5;
                Aabb::new((-h).into(), h.into()).transformed(&t)
            }
            Shape::Cylinder { radius, length } => {
                let a = t.rotation * Vector3::z();
                let e: [f64; 3] = std::array::from_fn(|i| {
                    a[i].abs() * length * 0.5 + radius * (1.0 - a[i] * a[i]).max(0.0).sqrt()
                });
                Aabb::new(
                    std::array::from_fn(|i| c[i] - e[i]),
                    std::array::from_fn(|i| c[i] + e[i]),
                )
            }
            Shape::Capsule { radius, length } => {
                let a = t.rotation * Vector3::z();
                let e: [f64; 3] = std::array::from_fn(|i| a[i].abs() * length * 0.5 + radius);
                Aabb::new(
                    std::array::from_fn(|i| c[i] - e[i]),
                    std::array::from_fn(|i| c[i] + e[i]),
                )
            }
            Shape::Mesh { path, scale, .. } => load_mesh_aabb(path, *scale)?.transformed(&t),
        };
        Ok(aabb)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Inertial {
    pub origin: Origin,
    pub mass: f64,
    /// ixx, ixy, ixz, iyy, iyz, izz
    pub inertia: [f64; 6],
}

#[derive(Debug, Clone, PartialEq)]
pub struct UrdfLink {
    pub name: String,
    pub inertial: Option<Inertial>,
    pub visuals: Vec<Geom>,
    pub collisions: Vec<Geom>,
}

impl UrdfLink {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            inertial: None,
            visuals: Vec::new(),
            collisions: Vec::new(),
        }
    }

    /// Collision geometry when present, else visual geometry.
    pub fn geoms(&self) -> &[Geom] {
        if self.collisions.is_empty() {
            &self.visuals
        } else {
            &self.collisions
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JointKind {
    Revolute,
    Continuous,
    Prismatic,
    Fixed,
}

impl JointKind {
    pub fn as_str(self) -> &'static str {
        match self {
            JointKind::Revolute => "revolute",
            JointKind::Continuous => "continuous",
            JointKind::Prismatic => "prismatic",
            JointKind::Fixed => "fixed",
        }
    }

    /// Revolute or continuous.
    pub fn is_rotational(self) -> bool {
        matches!(self, JointKind::Revolute | JointKind::Continuous)
    }

    pub fn is_movable(self) -> bool {
        self != JointKind::Fixed
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointLimit {
    pub lower: f64,
    pub upper: f64,
    pub effort: f64,
    pub velocity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UrdfJoint {
    pub name: String,
    pub kind: JointKind,
    pub parent: String,
    pub child: String,
    pub origin: Origin,
    /// Unit axis in the joint frame.
    pub axis: [f64; 3],
    pub limit: Option<JointLimit>,
}

impl UrdfJoint {
    pub fn axis_vector(&self) -> Vector3<f64> {
        Vector3::from(self.axis)
    }

    /// `(lower, upper)`; continuous joints report `[-π, π]`.
    pub fn range(&self) -> (f64, f64) {
        match (self.kind, self.limit) {
            (JointKind::Continuous, _) => (-std::f64::consts::PI, std::f64::consts::PI),
            (_, Some(l)) => (l.lower, l.upper),
            _ => (0.0, 0.0),
        }
    }
}

/// Parsed robot description forming a tree rooted at `root_link`.
#[derive(Debug, Clone, PartialEq)]
pub struct UrdfModel {
    pub name: String,
    pub links: Vec<UrdfLink>,
    pub joints: Vec<UrdfJoint>,
    pub root_link: String,
}

impl UrdfModel {
    /// Validate tree structure and build a model.
    pub fn from_parts(
        name: impl Into<String>,
        links: Vec<UrdfLink>,
        joints: Vec<UrdfJoint>,
    ) -> Result<Self, UrdfError> {
        let root_link = validate_tree(&links, &joints)?;
        Ok(Self {
            name: name.into(),
            links,
            joints,
            root_link,
        })
    }

    pub fn link(&self, name: &str) -> Option<&UrdfLink> {
        self.links.iter().find(|l| l.name == name)
    }

    pub fn joint(&self, name: &str) -> Option<&UrdfJoint> {
        self.joints.iter().find(|j| j.name == name)
    }

    /// Joint whose child is `link`.
    pub fn parent_joint(&self, link: &str) -> Option<&UrdfJoint> {
        self.joints.iter().find(|j| j.child == link)
    }

    pub fn child_joints<'a>(&'a self, link: &'a str) -> impl Iterator<Item = &'a UrdfJoint> + 'a {
        self.joints.iter().filter(move |j| j.parent == link)
    }

    /// Movable joints in declaration order.
    pub fn actuated_joints(&self) -> impl Iterator<Item = &UrdfJoint> {
        self.joints.iter().filter(|j| j.kind.is_movable())
    }

    pub fn revolute_count(&self) -> usize {
        self.joints
            .iter()
            .filter(|j| j.kind == JointKind::Revolute)
            .count()
    }

    /// Links in the subtree below `link`, including it, in depth-first order.
    pub fn subtree(&self, link: &str) -> Vec<String> {
        let mut out = Vec::new();
        let mut stack = vec![link.to_string()];
        while let Some(l) = stack.pop() {
            let children: Vec<_> = self.child_joints(&l).map(|j| j.child.clone()).collect();
            out.push(l);
            stack.extend(children.into_iter().rev());
        }
        out
    }

    /// Joints from the root down to `link`.
    pub fn chain_to(&self, link: &str) -> Vec<&UrdfJoint> {
        let mut chain = Vec::new();
        let mut cur = link;
        while let Some(j) = self.parent_joint(cur) {
            chain.push(j);
            cur = &j.parent;
        }
        chain.reverse();
        chain
    }

    /// Tree depth (number of joints on the longest root-to-leaf path).
    pub fn depth(&self) -> usize {
        self.links
            .iter()
            .map(|l| self.chain_to(&l.name).len())
            .max()
            .unwrap_or(0)
    }

    /// Bounds of all geometry of `link`, in the link frame.
    pub fn link_aabb(&self, link: &str) -> Result<Aabb, UrdfError> {
        let l = self
            .link(link)
            .ok_or_else(|| UrdfError::UnknownLink(link.to_string()))?;
        let mut out: Option<Aabb> = None;
        for g in l.geoms() {
            let b = g.aabb()?;
            out = Some(match out {
                Some(o) => o.union(&b),
                None => b,
            });
        }
        out.ok_or_else(|| UrdfError::EmptyGeometry(link.to_string()))
    }

    /// URDF XML for this model (links first, then joints).
    pub fn to_xml(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "<?xml version=\"1.0\"?>");
        let _ = writeln!(s, "<robot name=\"{}\">", escape(&self.name));
        for l in &self.links {
            write_link(&mut s, l);
        }
        for j in &self.joints {
            write_joint(&mut s, j);
        }
        s.push_str("</robot>\n");
        s
    }
}

pub fn link_aabb(model: &UrdfModel, link: &str) -> Result<Aabb, UrdfError> {
    model.link_aabb(link)
}

fn validate_tree(links: &[UrdfLink], joints: &[UrdfJoint]) -> Result<String, UrdfError> {
    let mut names = HashSet::new();
    for l in links {
        if !names.insert(l.name.as_str()) {
            return Err(UrdfError::DuplicateName(l.name.clone()));
        }
    }
    let mut joint_names = HashSet::new();
    let mut parent_of: HashMap<&str, &str> = HashMap::new();
    for j in joints {
        if !joint_names.insert(j.name.as_str()) {
            return Err(UrdfError::DuplicateName(j.name.clone()));
        }
        for l in [&j.parent, &j.child] {
            if !names.contains(l.as_str()) {
                return Err(UrdfError::UnresolvedLinkRef(l.clone()));
            }
        }
        if parent_of.insert(&j.child, &j.parent).is_some() {
            // two parents: the graph is not a tree
            return Err(UrdfError::CycleDetected(j.child.clone()));
        }
    }
    for l in links {
        let mut seen = HashSet::new();
        let mut cur = l.name.as_str();
        while let Some(p) = parent_of.get(cur) {
            if !seen.insert(cur) {
                return Err(UrdfError::CycleDetected(cur.to_string()));
            }
            cur = p;
        }
    }
    let roots: Vec<String> = links
        .iter()
        .filter(|l| !parent_of.contains_key(l.name.as_str()))
        .map(|l| l.name.clone())
        .collect();
    match roots.len() {
        0 => Err(match links.first() {
            Some(l) => UrdfError::CycleDetected(l.name.clone()),
            None => UrdfError::NoRoot,
        }),
        1 => Ok(roots.into_iter().next().unwrap()),
        _ => Err(UrdfError::MultipleRoots(roots)),
    }
}

fn attr<'a>(node: &roxmltree::Node<'a, '_>, name: &str) -> Result<&'a str, UrdfError> {
    node.attribute(name)
        .ok_or_else(|| UrdfError::MissingAttribute {
            element: node.tag_name().name().to_string(),
            attribute: name.to_string(),
        })
}

fn numbers<const N: usize>(node: &roxmltree::Node, text: &str) -> Result<[f64; N], UrdfError> {
    let bad = || UrdfError::BadValue {
        element: node.tag_name().name().to_string(),
        value: text.to_string(),
    };
    let v: Vec<f64> = text
        .split_whitespace()
        .map(|t| t.parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let arr: [f64; N] = v.try_into().map_err(|_| bad())?;
    if arr.iter().any(|x| !x.is_finite()) {
        return Err(bad());
    }
    Ok(arr)
}

fn number(node: &roxmltree::Node, name: &str) -> Result<f64, UrdfError> {
    let text = attr(node, name)?;
    Ok(numbers::<1>(node, text)?[0])
}

fn number_or(node: &roxmltree::Node, name: &str, default: f64) -> Result<f64, UrdfError> {
    match node.attribute(name) {
        Some(_) => number(node, name),
        None => Ok(default),
    }
}

fn child<'a, 'i>(node: &roxmltree::Node<'a, 'i>, tag: &str) -> Option<roxmltree::Node<'a, 'i>> {
    node.children().find(|c| c.is_element() && c.has_tag_name(tag))
}

fn parse_origin(node: &roxmltree::Node) -> Result<Origin, UrdfError> {
    match child(node, "origin") {
        None => Ok(Origin::default()),
        Some(o) => Ok(Origin {
            xyz: o
                .attribute("xyz")
                .map(|t| numbers::<3>(&o, t))
                .transpose()?
                .unwrap_or([0.0; 3]),
            rpy: o
                .attribute("rpy")
                .map(|t| numbers::<3>(&o, t))
                .transpose()?
                .unwrap_or([0.0; 3]),
        }),
    }
}

/// Resolve a mesh filename against `asset_root`.
///
/// `package://pkg/rest` tries `asset_root/pkg/rest`, then `asset_root/rest`.
/// `file://` paths and absolute paths are used as written.
pub fn resolve_mesh_path(filename: &str, asset_root: &Path) -> Result<PathBuf, UrdfError> {
    let candidates: Vec<PathBuf> = if let Some(rest) = filename.strip_prefix("package://") {
        let mut c = vec![asset_root.join(rest)];
        if let Some((_, tail)) = rest.split_once('/') {
            c.push(asset_root.join(tail));
        }
        c
    } else if let Some(abs) = filename.strip_prefix("file://") {
        vec![PathBuf::from(abs)]
    } else {
        let p = Path::new(filename);
        if p.is_absolute() {
            vec![p.to_path_buf()]
        } else {
            vec![asset_root.join(p)]
        }
    };
    candidates
        .into_iter()
        .find(|c| c.is_file())
        .ok_or_else(|| UrdfError::UnresolvedMesh(filename.to_string()))
}

fn parse_geometry(node: &roxmltree::Node, asset_root: &Path) -> Result<Option<Geom>, UrdfError> {
    let origin = parse_origin(node)?;
    let Some(g) = child(node, "geometry") else {
        return Ok(None);
    };
    let Some(shape_node) = g.children().find(|c| c.is_element()) else {
        return Ok(None);
    };
    let shape = match shape_node.tag_name().name() {
        "box" => Shape::Box {
            size: numbers::<3>(&shape_node, attr(&shape_node, "size")?)?,
        },
        "cylinder" => Shape::Cylinder {
            radius: number(&shape_node, "radius")?,
            length: number(&shape_node, "length")?,
        },
        "capsule" => Shape::Capsule {
            radius: number(&shape_node, "radius")?,
            length: number(&shape_node, "length")?,
        },
        "sphere" => Shape::Sphere {
            radius: number(&shape_node, "radius")?,
        },
        "mesh" => {
            let filename = attr(&shape_node, "filename")?.to_string();
            let scale = match shape_node.attribute("scale") {
                Some(t) => numbers::<3>(&shape_node, t)?,
                None => [1.0; 3],
            };
            let path = resolve_mesh_path(&filename, asset_root)?;
            Shape::Mesh {
                filename,
                path,
                scale,
            }
        }
        _ => return Ok(None),
    };
    Ok(Some(Geom { origin, shape }))
}

fn parse_link(node: &roxmltree::Node, asset_root: &Path) -> Result<UrdfLink, UrdfError> {
    let mut link = UrdfLink::new(attr(node, "name")?);
    for c in node.children().filter(|c| c.is_element()) {
        match c.tag_name().name() {
            "visual" => link.visuals.extend(parse_geometry(&c, asset_root)?),
            "collision" => link.collisions.extend(parse_geometry(&c, asset_root)?),
            "inertial" => {
                let mass = child(&c, "mass")
                    .map(|m| number(&m, "value"))
                    .transpose()?
                    .unwrap_or(0.0);
                let inertia = match child(&c, "inertia") {
                    Some(i) => {
                        let mut v = [0.0; 6];
                        for (k, n) in ["ixx", "ixy", "ixz", "iyy", "iyz", "izz"].iter().enumerate() {
                            v[k] = number_or(&i, n, 0.0)?;
                        }
                        v
                    }
                    None => [0.0; 6],
                };
                link.inertial = Some(Inertial {
                    origin: parse_origin(&c)?,
                    mass,
                    inertia,
                });
            }
            _ => {}
        }
    }
    Ok(link)
}

fn parse_joint(node: &roxmltree::Node) -> Result<UrdfJoint, UrdfError> {
    let name = attr(node, "name")?.to_string();
    let kind = match attr(node, "type")? {
        "revolute" => JointKind::Revolute,
        "continuous" => JointKind::Continuous,
        "prismatic" => JointKind::Prismatic,
        "fixed" => JointKind::Fixed,
        other => {
            return Err(UrdfError::BadValue {
                element: "joint".into(),
                value: other.to_string(),
            })
        }
    };
    let link_ref = |tag: &str| -> Result<String, UrdfError> {
        let n = child(node, tag).ok_or_else(|| UrdfError::MissingAttribute {
            element: format!("joint {name}"),
            attribute: tag.to_string(),
        })?;
        Ok(attr(&n, "link")?.to_string())
    };
    let parent = link_ref("parent")?;
    let child_link = link_ref("child")?;
    let origin = parse_origin(node)?;
    let raw_axis = match child(node, "axis") {
        Some(a) => numbers::<3>(&a, attr(&a, "xyz")?)?,
        None => [1.0, 0.0, 0.0],
    };
    let norm = Vector3::from(raw_axis).norm();
    let axis = if kind == JointKind::Fixed {
        raw_axis
    } else {
        if norm == 0.0 {
            return Err(UrdfError::ZeroAxis(name));
        }
        // keep exact input when already unit length
        if (norm - 1.0).abs() < 1e-15 {
            raw_axis
        } else {
            raw_axis.map(|c| c / norm)
        }
    };
    let limit = match child(node, "limit") {
        Some(l) => Some(JointLimit {
            lower: number_or(&l, "lower", 0.0)?,
            upper: number_or(&l, "upper", 0.0)?,
            effort: number_or(&l, "effort", 0.0)?,
            velocity: number_or(&l, "velocity", 0.0)?,
        }),
        None => None,
    };
    if matches!(kind, JointKind::Revolute | JointKind::Prismatic) && limit.is_none() {
        return Err(UrdfError::MissingLimit(name));
    }
    Ok(UrdfJoint {
        name,
        kind,
        parent,
        child: child_link,
        origin,
        axis,
        limit,
    })
}

/// Parse URDF text. Mesh filenames resolve against `asset_root`.
pub fn parse_urdf(xml_text: &str, asset_root: &Path) -> Result<UrdfModel, UrdfError> {
    let doc = roxmltree::Document::parse(xml_text)
        .map_err(|e| UrdfError::MalformedXml(e.to_string()))?;
    let robot = doc.root_element();
    if !robot.has_tag_name("robot") {
        return Err(UrdfError::MalformedXml(format!(
            "root element is <{}>, expected <robot>",
            robot.tag_name().name()
        )));
    }
    let name = robot.attribute("name").unwrap_or("").to_string();
    let mut links = Vec::new();
    let mut joints = Vec::new();
    for c in robot.children().filter(|c| c.is_element()) {
        match c.tag_name().name() {
            "link" => links.push(parse_link(&c, asset_root)?),
            "joint" => joints.push(parse_joint(&c)?),
            _ => {}
        }
    }
    UrdfModel::from_parts(name, links, joints)
}

/// Read and parse a URDF file. `asset_root` defaults to the file's directory.
pub fn load_urdf(path: &Path, asset_root: Option<&Path>) -> Result<UrdfModel, UrdfError> {
    let text = std::fs::read_to_string(path).map_err(|source| UrdfError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let dir = path.parent().unwrap_or(Path::new("."));
    parse_urdf(&text, asset_root.unwrap_or(dir))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Shortest text that parses back to the same `f64`.
pub fn fmt_num(v: f64) -> String {
    format!("{v}")
}

fn fmt3(v: &[f64; 3]) -> String {
    format!("{} {} {}", fmt_num(v[0]), fmt_num(v[1]), fmt_num(v[2]))
}

fn write_origin(s: &mut String, indent: &str, o: &Origin) {
    let _ = writeln!(
        s,
        "{indent}<origin xyz=\"{}\" rpy=\"{}\"/>",
        fmt3(&o.xyz),
        fmt3(&o.rpy)
    );
}

fn write_geom(s: &mut String, tag: &str, g: &Geom) {
    let _ = writeln!(s, "    <{tag}>");
    write_origin(s, "      ", &g.origin);
    s.push_str("      <geometry>\n");
    let _ = match &g.shape {
        Shape::Box { size } => writeln!(s, "        <box size=\"{}\"/>", fmt3(size)),
        Shape::Cylinder { radius, length } => writeln!(
            s,
            "        <cylinder radius=\"{}\" length=\"{}\"/>",
            fmt_num(*radius),
            fmt_num(*length)
        ),
        Shape::Capsule { radius, length } => writeln!(
            s,
            "        <capsule radius=\"{}\" length=\"{}\"/>",
            fmt_num(*radius),
            fmt_num(*length)
        ),
        Shape::Sphere { radius } => {
            writeln!(s, "        <sphere radius=\"{}\"/>", fmt_num(*radius))
        }
        Shape::Mesh {
            filename, scale, ..
        } => writeln!(
            s,
            "        <mesh filename=\"{}\" scale=\"{}\"/>",
            escape(filename),
            fmt3(scale)
        ),
    };
    s.push_str("      </geometry>\n");
    let _ = writeln!(s, "    </{tag}>");
}

fn write_link(s: &mut String, l: &UrdfLink) {
    let _ = writeln!(s, "  <link name=\"{}\">", escape(&l.name));
    if let Some(i) = &l.inertial {
        s.push_str("    <inertial>\n");
        write_origin(s, "      ", &i.origin);
        let _ = writeln!(s, "      <mass value=\"{}\"/>", fmt_num(i.mass));
        let v = i.inertia.map(fmt_num);
        let _ = writeln!(
            s,
            "      <inertia ixx=\"{}\" ixy=\"{}\" ixz=\"{}\" iyy=\"{}\" iyz=\"{}\" izz=\"{}\"/>",
            v[0], v[1], v[2], v[3], v[4], v[5]
        );
        s.push_str("    </inertial>\n");
    }
    for g in &l.visuals {
        write_geom(s, "visual", g);
    }
    for g in &l.collisions {
        write_geom(s, "collision", g);
    }
    s.push_str("  </link>\n");
}

fn write_joint(s: &mut String, j: &UrdfJoint) {
    let _ = writeln!(
        s,
        "  <joint name=\"{}\" type=\"{}\">",
        escape(&j.name),
        j.kind.as_str()
    );
    let _ = writeln!(s, "    <parent link=\"{}\"/>", escape(&j.parent));
    let _ = writeln!(s, "    <child link=\"{}\"/>", escape(&j.child));
    write_origin(s, "    ", &j.origin);
    if j.kind != JointKind::Fixed {
        let _ = writeln!(s, "    <axis xyz=\"{}\"/>", fmt3(&j.axis));
    }
    if let Some(l) = j.limit {
        let _ = writeln!(
            s,
            "    <limit lower=\"{}\" upper=\"{}\" effort=\"{}\" velocity=\"{}\"/>",
            fmt_num(l.lower),
            fmt_num(l.upper),
            fmt_num(l.effort),
            fmt_num(l.velocity)
        );
    }
    s.push_str("  </joint>\n");
}

/// Pose of every link at the zero configuration.
pub fn zero_pose(model: &UrdfModel) -> HashMap<String, Transform> {
    crate::kinematics::fk_urdf(model, &HashMap::new()).expect("empty configuration is always valid")
}
