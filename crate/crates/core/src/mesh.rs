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
//! STL / OBJ vertex bounds.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

use crate::transform::Transform;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("unsupported mesh format: {0}")]
    UnsupportedFormat(String),
    #[error("corrupt mesh {path}: {reason}")]
    CorruptMesh { path: String, reason: String },
    #[error("cannot read mesh {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl Aabb {
    pub fn new(min: [f64; 3], max: [f64; 3]) -> Self {
        Self { min, max }
    }

    /// Bounds of a point set; `None` when empty.
    pub fn from_points<'a, I>(points: I) -> Option<Aabb>
    where
        I: IntoIterator<Item = &'a Vector3<f64>>,
    {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut b = Aabb::new((*first).into(), (*first).into());
        for p in it {
            b.include(p);
        }
        Some(b)
    }

    pub fn include(&mut self, p: &Vector3<f64>) {
        for i in 0..3 {
            self.min[i] = self.min[i].min(p[i]);
            self.max[i] = self.max[i].max(p[i]);
        }
    }

    pub fn union(&self, other: &Aabb) -> Aabb {
        Aabb {
            min: std::array::from_fn(|i| self.min[i].min(other.min[i])),
            max: std::array::from_fn(|i| self.max[i].max(other.max[i])),
        }
    }

    pub fn extents(&self) -> [f64; 3] {
        std::array::from_fn(|i| self.max[i] - self.min[i])
    }

    pub fn center(&self) -> Vector3<f64> {
        Vector3::from(std::array::from_fn(|i| 0.5 * (self.min[i] + self.max[i])))
    }

    pub fn corners(&self) -> [Vector3<f64>; 8] {
        std::array::from_fn(|k| {
            Vector3::new(
                if k & 1 == 0 { self.min[0] } else { self.max[0] },
                if k & 2 == 0 { self.min[1] } else { self.max[1] },
                if k & 4 == 0 { self.min[2] } else { self.max[2] },
            )
        })
    }

    /// Box re-bounded after moving its eight corners by `t`.
    pub fn transformed(&self, t: &Transform) -> Aabb {
        let pts = self.corners().map(|c| t.apply_point(&c));
        Aabb::from_points(pts.iter()).expect("eight corners")
    }

    pub fn is_valid(&self) -> bool {
        (0..3).all(|i| self.min[i] <= self.max[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Stl,
    Obj,
}

impl MeshFormat {
    pub fn from_path(path: &Path) -> Result<MeshFormat, MeshError> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .unwrap_or_default();
        match ext.as_str() {
            "stl" => Ok(MeshFormat::Stl),
            "obj" => Ok(MeshFormat::Obj),
            _ => Err(MeshError::UnsupportedFormat(path.display().to_string())),
        }
    }
}

/// Vertex positions of an STL (binary or ASCII) or OBJ file.
pub fn load_vertices(path: &Path) -> Result<Vec<Vector3<f64>>, MeshError> {
    let format = MeshFormat::from_path(path)?;
    let bytes = std::fs::read(path).map_err(|source| MeshError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let label = path.display().to_string();
    match format {
        MeshFormat::Stl => parse_stl(&bytes, &label),
        MeshFormat::Obj => parse_obj(&bytes, &label),
    }
}

/// Bounds over all vertices after component-wise `scale`, in the mesh frame.
pub fn load_mesh_aabb(path: &Path, scale: [f64; 3]) -> Result<Aabb, MeshError> {
    let verts = load_vertices(path)?;
    let s = Vector3::from(scale);
    let scaled: Vec<_> = verts.iter().map(|v| v.component_mul(&s)).collect();
    Aabb::from_points(scaled.iter()).ok_or_else(|| MeshError::CorruptMesh {
        path: path.display().to_string(),
        reason: "no vertices".into(),
    })
}

fn corrupt(path: &str, reason: impl Into<String>) -> MeshError {
    MeshError::CorruptMesh {
        path: path.to_string(),
        reason: reason.into(),
    }
}

fn check_finite(path: &str, v: Vector3<f64>) -> Result<Vector3<f64>, MeshError> {
    if v.iter().all(|c| c.is_finite()) {
        Ok(v)
    } else {
        Err(corrupt(path, "non-finite vertex coordinate"))
    }
}

const STL_HEADER: usize = 80;
const STL_TRIANGLE: usize = 50;

/// Binary iff the declared triangle count matches the file length.
fn is_binary_stl(bytes: &[u8]) -> bool {
    if bytes.len() < STL_HEADER + 4 {
        return false;
    }
    let n = u32::from_le_bytes(bytes[STL_HEADER..STL_HEADER + 4].try_into().unwrap()) as usize;
    bytes.len() == STL_HEADER + 4 + n * STL_TRIANGLE
}

pub(crate) fn parse_stl(bytes: &[u8], path: &str) -> Result<Vec<Vector3<f64>>, MeshError> {
    if is_binary_stl(bytes) {
        let n = u32::from_le_bytes(bytes[STL_HEADER..STL_HEADER + 4].try_into().unwrap()) as usize;
        let mut out = Vec::with_capacity(3 * n);
        for t in 0..n {
            let base = STL_HEADER + 4 + t * STL_TRIANGLE + 12; // skip normal
            for v in 0..3 {
                let off = base + 12 * v;
                let c = |k: usize| {
                    f32::from_le_bytes(bytes[off + 4 * k..off + 4 * k + 4].try_into().unwrap())
                        as f64
                };
                out.push(check_finite(path, Vector3::new(c(0), c(1), c(2)))?);
            }
        }
        return Ok(out);
    }
    let text = std::str::from_utf8(bytes).map_err(|_| {
        corrupt(
            path,
            "binary STL triangle count does not match file size",
        )
    })?;
    if !text.trim_start().starts_with("solid") {
        return Err(corrupt(path, "neither binary nor ASCII STL"));
    }
    let mut out = Vec::new();
    let mut facets = 0usize;
    for line in text.lines() {
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("vertex") => {
                let c: Vec<f64> = tok
                    .map(|s| s.parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| corrupt(path, format!("bad vertex line `{}`", line.trim())))?;
                if c.len() != 3 {
                    return Err(corrupt(path, format!("bad vertex line `{}`", line.trim())));
                }
                out.push(check_finite(path, Vector3::new(c[0], c[1], c[2]))?);
            }
            Some("facet") => facets += 1,
            _ => {}
        }
    }
    if out.len() != 3 * facets {
        return Err(corrupt(
            path,
            format!("{} vertices for {} facets", out.len(), facets),
        ));
    }
    Ok(out)
}

pub(crate) fn parse_obj(bytes: &[u8], path: &str) -> Result<Vec<Vector3<f64>>, MeshError> {
    let text = std::str::from_utf8(bytes).map_err(|_| corrupt(path, "OBJ is not UTF-8"))?;
    let mut verts = Vec::new();
    let mut faces: Vec<i64> = Vec::new();
    for line in text.lines() {
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("v") => {
                let c: Vec<f64> = tok
                    .take(3)
                    .map(|s| s.parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| corrupt(path, format!("bad vertex line `{}`", line.trim())))?;
                if c.len() != 3 {
                    return Err(corrupt(path, format!("bad vertex line `{}`", line.trim())));
                }
                verts.push(check_finite(path, Vector3::new(c[0], c[1], c[2]))?);
            }
            Some("f") => {
                for t in tok {
                    let idx = t.split('/').next().unwrap_or("");
                    let i: i64 = idx
                        .parse()
                        .map_err(|_| corrupt(path, format!("bad face index `{t}`")))?;
                    faces.push(i);
                }
            }
            _ => {}
        }
    }
    let n = verts.len() as i64;
    for i in faces {
        // 1-based, negative counts from the end
        let ok = (i >= 1 && i <= n) || (i < 0 && -i <= n);
        if !ok {
            return Err(corrupt(path, format!("face index {i} out of range ({n} vertices)")));
        }
    }
    Ok(verts)
}

/// Binary STL bytes for a triangle soup (used by tests and fixtures).
pub fn write_binary_stl(triangles: &[[Vector3<f64>; 3]]) -> Vec<u8> {
    let mut out = vec![0u8; STL_HEADER];
    out.extend_from_slice(&(triangles.len() as u32).to_le_bytes());
    for tri in triangles {
        let n = (tri[1] - tri[0]).cross(&(tri[2] - tri[0]));
        let n = if n.norm() > 0.0 { n.normalize() } else { n };
        for c in n.iter().chain(tri.iter().flat_map(|v| v.iter())) {
            out.extend_from_slice(&(*c as f32).to_le_bytes());
        }
        out.extend_from_slice(&0u16.to_le_bytes());
    }
    out
}

/// Twelve triangles of an axis-aligned box.
pub fn box_triangles(min: [f64; 3], max: [f64; 3]) -> Vec<[Vector3<f64>; 3]> {
    let b = Aabb::new(min, max);
    let c = b.corners();
    // corner k has bit 0 → x, bit 1 → y, bit 2 → z
    let quads = [
        [0, 2, 3, 1],
        [4, 5, 7, 6],
        [0, 1, 5, 4],
        [2, 6, 7, 3],
        [0, 4, 6, 2],
        [1, 3, 7, 5],
    ];
    quads
        .iter()
        .flat_map(|q| [[c[q[0]], c[q[1]], c[q[2]]], [c[q[0]], c[q[2]], c[q[3]]]])
        .collect()
}
