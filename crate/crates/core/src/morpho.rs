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
//! Procedural hand morphologies and their fixed-length vector encoding.
//!
//! Vector layout (66 values):
//!
//! | offset | len | content |
//! |--------|-----|---------|
//! | 0      | 32  | palm_radius, finger_radius, finger_lengths(6), finger_xyz(15), little_extra_origin(6), thumb_rpy(3) |
//! | 32     | 12  | one-hot axis of thumb rank 1, then rank 2, order +x −x +y −y +z −z |
//! | 44     | 22  | joint presence per slot |
//!
//! The random stream is ChaCha8 seeded with `seed_from_u64`. Each sample
//! draws 11 topology values (presence and joint count per finger, then the
//! little-finger extra joint), then the 32 continuous values in layout
//! order, then the two axis choices.

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;

use crate::hand_model::{
    Axis6, CanonicalHandParams, CanonicalJointSlot, Finger, Handedness, NUM_SLOTS,
};
use crate::kinematics::unit_f64;

pub const CONTINUOUS_DIM: usize = 32;
pub const AXIS_DIM: usize = 12;
pub const BINARY_DIM: usize = NUM_SLOTS;
pub const VECTOR_DIM: usize = CONTINUOUS_DIM + AXIS_DIM + BINARY_DIM;
/// Name and version of the random stream, recorded in dataset sidecars.
pub const RNG_NAME: &str = "chacha8/rand_chacha-0.3/seed_from_u64";
pub const PRESENCE_THRESHOLD: f64 = 0.5;

#[derive(Debug, Error)]
pub enum MorphoError {
    #[error("invalid ranges: {0}")]
    InvalidRanges(String),
    #[error("expected {VECTOR_DIM} values, got {0}")]
    BadLength(usize),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Format(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> MorphoError + '_ {
    move |source| MorphoError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Closed interval `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range(pub f64, pub f64);

impl Range {
    fn sample(&self, u: f64) -> f64 {
        self.0 + (self.1 - self.0) * u
    }
}

/// Sampling ranges and topology probabilities.
///
/// Values are plausible defaults for hands of human scale, in metres and
/// radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RangeConfig {
    pub palm_radius: Range,
    pub finger_radius: Range,
    pub thumb_lengths: [Range; 3],
    pub finger_lengths: [Range; 3],
    pub finger_xyz: [[Range; 3]; 5],
    pub little_extra_origin: [Range; 6],
    pub thumb_rpy: [Range; 3],
    /// Probability that each finger is present, thumb to little.
    pub finger_presence: [f64; 5],
    /// Probability of the extra little-finger joint when the finger is present.
    pub little_extra_presence: f64,
    pub flexion_limits: Range,
    pub abduction_limits: Range,
}

impl Default for RangeConfig {
    fn default() -> Self {
        let r = Range;
        Self {
            palm_radius: r(0.035, 0.06),
            finger_radius: r(0.007, 0.013),
            thumb_lengths: [r(0.03, 0.05), r(0.025, 0.04), r(0.02, 0.035)],
            finger_lengths: [r(0.035, 0.055), r(0.022, 0.035), r(0.018, 0.03)],
            finger_xyz: [
                [r(-0.01, 0.01), r(0.02, 0.045), r(0.0, 0.04)],
                [r(-0.005, 0.005), r(0.025, 0.04), r(0.08, 0.1)],
                [r(-0.005, 0.005), r(0.005, 0.015), r(0.085, 0.105)],
                [r(-0.005, 0.005), r(-0.015, -0.005), r(0.08, 0.1)],
                [r(-0.005, 0.005), r(-0.04, -0.025), r(0.07, 0.09)],
            ],
            little_extra_origin: [
                r(-0.005, 0.005),
                r(-0.03, -0.01),
                r(0.0, 0.03),
                r(-0.3, 0.3),
                r(-0.3, 0.3),
                r(-0.3, 0.3),
            ],
            thumb_rpy: [r(-1.6, -0.4), r(-0.4, 0.4), r(-0.4, 0.4)],
            finger_presence: [0.9, 0.9, 0.9, 0.8, 0.8],
            little_extra_presence: 0.5,
            flexion_limits: r(-0.3, 1.6),
            abduction_limits: r(-0.35, 0.35),
        }
    }
}

impl RangeConfig {
    /// The 32 continuous ranges in layout order.
    pub fn continuous(&self) -> Vec<Range> {
        let mut v = vec![self.palm_radius, self.finger_radius];
        v.extend(self.thumb_lengths);
        v.extend(self.finger_lengths);
        v.extend(self.finger_xyz.iter().flatten());
        v.extend(self.little_extra_origin);
        v.extend(self.thumb_rpy);
        v
    }

    pub fn validate(&self) -> Result<(), MorphoError> {
        for (i, r) in self.continuous().iter().enumerate() {
            if !(r.0.is_finite() && r.1.is_finite() && r.0 < r.1) {
                return Err(MorphoError::InvalidRanges(format!(
                    "continuous value {i}: need min < max, got [{}, {}]",
                    r.0, r.1
                )));
            }
        }
        for (name, r) in [
            ("palm_radius", self.palm_radius),
            ("finger_radius", self.finger_radius),
        ] {
            if r.0 <= 0.0 {
                return Err(MorphoError::InvalidRanges(format!("{name} must be positive")));
            }
        }
        if self
            .thumb_lengths
            .iter()
            .chain(&self.finger_lengths)
            .any(|r| r.0 < 0.0)
        {
            return Err(MorphoError::InvalidRanges("lengths must be non-negative".into()));
        }
        for (name, r) in [
            ("flexion_limits", self.flexion_limits),
            ("abduction_limits", self.abduction_limits),
        ] {
            if !(r.0 < r.1) {
                return Err(MorphoError::InvalidRanges(format!("{name}: need min < max")));
            }
        }
        let probs = self.finger_presence.iter().chain([&self.little_extra_presence]);
        if probs.into_iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(MorphoError::InvalidRanges("probabilities must lie in [0, 1]".into()));
        }
        Ok(())
    }

    /// SHA-256 of the JSON encoding, hex.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("ranges serialize");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    pub fn load(path: &Path) -> Result<Self, MorphoError> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        let r: RangeConfig =
            serde_json::from_str(&text).map_err(|e| MorphoError::Format(e.to_string()))?;
        r.validate()?;
        Ok(r)
    }
}

/// A sampled hand.
#[derive(Debug, Clone, PartialEq)]
pub struct MorphologySample {
    pub topology: [bool; NUM_SLOTS],
    pub params: CanonicalHandParams,
    pub axis_choices: [Axis6; 2],
}

/// Whether `slot` moves about an abduction-like axis for limit assignment.
fn uses_abduction_range(slot: usize, axes: &[Axis6; 2]) -> bool {
    match slot {
        0 | 1 => !matches!(axes[slot], Axis6::PosY | Axis6::NegY),
        _ => CanonicalJointSlot::get(slot).is_abduction(),
    }
}

/// Truncate each finger's presence to its proximal run.
///
/// The little finger's run starts at rank 2; its extra rank-1 joint is kept
/// only when rank 2 is present.
pub fn repair_topology(t: &[bool; NUM_SLOTS]) -> [bool; NUM_SLOTS] {
    let mut out = *t;
    for f in Finger::ALL {
        let first = if f == Finger::Little { 2 } else { 1 };
        let mut open = true;
        for rank in first..=f.slot_count() {
            let s = f.slot(rank);
            open &= t[s];
            out[s] = open;
        }
        if f == Finger::Little {
            out[f.slot(1)] = t[f.slot(1)] && out[f.slot(2)];
        }
    }
    out
}

/// Build params from continuous values, axes and topology.
fn assemble(
    continuous: &[f64],
    axes: [Axis6; 2],
    topology: [bool; NUM_SLOTS],
    ranges: &RangeConfig,
) -> CanonicalHandParams {
    let c = continuous;
    let mut p = CanonicalHandParams::palm_only(c[0], c[1]);
    p.finger_lengths.copy_from_slice(&c[2..8]);
    for f in 0..5 {
        p.finger_xyz[f].copy_from_slice(&c[8 + 3 * f..11 + 3 * f]);
    }
    p.little_extra_origin.copy_from_slice(&c[23..29]);
    p.thumb_rpy.copy_from_slice(&c[29..32]);
    p.thumb_axes = [axes[0].vector(), axes[1].vector()];
    p.handedness = Handedness::Right;
    for s in 0..NUM_SLOTS {
        if topology[s] {
            let r = if uses_abduction_range(s, &axes) {
                ranges.abduction_limits
            } else {
                ranges.flexion_limits
            };
            p.joint_lowers[s] = r.0;
            p.joint_uppers[s] = r.1;
        }
    }
    p
}

/// Deterministic stream of samples.
pub struct Sampler {
    rng: ChaCha8Rng,
    ranges: RangeConfig,
}

impl Sampler {
    pub fn new(seed: u64, ranges: RangeConfig) -> Result<Self, MorphoError> {
        ranges.validate()?;
        Ok(Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            ranges,
        })
    }

    fn u(&mut self) -> f64 {
        unit_f64(&mut self.rng)
    }

    pub fn next_sample(&mut self) -> MorphologySample {
        let mut topology = [false; NUM_SLOTS];
        for f in Finger::ALL {
            let present = self.u() < self.ranges.finger_presence[f.index()];
            let count_draw = self.u();
            // little ranks 2..=5 form the main chain
            let (first, max) = match f {
                Finger::Little => (2, 4),
                _ => (1, f.slot_count()),
            };
            let count = ((count_draw * max as f64) as usize).min(max - 1) + 1;
            if present {
                for rank in first..first + count {
                    topology[f.slot(rank)] = true;
                }
            }
        }
        let extra = self.u() < self.ranges.little_extra_presence;
        let little = Finger::Little;
        topology[little.slot(1)] = extra && topology[little.slot(2)];
        let continuous: Vec<f64> = self
            .ranges
            .continuous()
            .iter()
            .map(|r| {
                let u = unit_f64(&mut self.rng);
                r.sample(u)
            })
            .collect();
        let mut pick = || Axis6::ALL[((self.u() * 6.0) as usize).min(5)];
        let axes = [pick(), pick()];
        MorphologySample {
            topology,
            params: assemble(&continuous, axes, topology, &self.ranges),
            axis_choices: axes,
        }
    }
}

/// First sample of the stream seeded with `seed`.
pub fn sample_morphology(seed: u64, ranges: &RangeConfig) -> Result<MorphologySample, MorphoError> {
    Ok(Sampler::new(seed, ranges.clone())?.next_sample())
}

/// Fixed-length vector of a sample.
pub fn encode(s: &MorphologySample) -> Vec<f64> {
    let p = &s.params;
    let mut v = Vec::with_capacity(VECTOR_DIM);
    v.push(p.palm_radius);
    v.push(p.finger_radius);
    v.extend(p.finger_lengths);
    v.extend(p.finger_xyz.iter().flatten());
    v.extend(p.little_extra_origin);
    v.extend(p.thumb_rpy);
    for a in s.axis_choices {
        let mut one_hot = [0.0; 6];
        one_hot[a.index()] = 1.0;
        v.extend(one_hot);
    }
    v.extend(s.topology.iter().map(|&b| if b { 1.0 } else { 0.0 }));
    v
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

/// Sample from a vector, using the default limit ranges.
pub fn decode(v: &[f64]) -> Result<MorphologySample, MorphoError> {
    decode_with(v, &RangeConfig::default())
}

/// Sample from a vector: axes by argmax, presence above 0.5, topology
/// truncated to proximal runs, present slots given the configured limits.
pub fn decode_with(v: &[f64], ranges: &RangeConfig) -> Result<MorphologySample, MorphoError> {
    if v.len() != VECTOR_DIM {
        return Err(MorphoError::BadLength(v.len()));
    }
    let axes = [
        Axis6::ALL[argmax(&v[32..38])],
        Axis6::ALL[argmax(&v[38..44])],
    ];
    let raw: [bool; NUM_SLOTS] = std::array::from_fn(|i| v[44 + i] > PRESENCE_THRESHOLD);
    let topology = repair_topology(&raw);
    Ok(MorphologySample {
        topology,
        params: assemble(&v[..CONTINUOUS_DIM], axes, topology, ranges),
        axis_choices: axes,
    })
}

/// Blend two vectors and decode; `alpha` 0 gives `a`, 1 gives `b`.
pub fn interpolate(a: &[f64], b: &[f64], alpha: f64) -> Result<MorphologySample, MorphoError> {
    for v in [a, b] {
        if v.len() != VECTOR_DIM {
            return Err(MorphoError::BadLength(v.len()));
        }
    }
    let blended: Vec<f64> = if alpha == 0.0 {
        a.to_vec()
    } else if alpha == 1.0 {
        b.to_vec()
    } else {
        a.iter()
            .zip(b)
            .map(|(x, y)| (1.0 - alpha) * x + alpha * y)
            .collect()
    };
    decode(&blended)
}

/// Block layout recorded in dataset sidecars.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    pub continuous: usize,
    pub one_hot: usize,
    pub binary: usize,
}

/// Dataset sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub n: u64,
    pub dim: usize,
    pub seed: u64,
    pub rng: String,
    pub dtype: String,
    pub ranges_sha256: String,
    pub content_sha256: String,
    pub layout: Layout,
}

/// Sidecar path of a dataset file: `<path>.json`.
pub fn manifest_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Stream `n` encoded samples as little-endian f32 rows and write the sidecar.
pub fn write_dataset(
    n: u64,
    seed: u64,
    ranges: &RangeConfig,
    path: &Path,
) -> Result<DatasetManifest, MorphoError> {
    if n == 0 {
        return Err(MorphoError::Format("n must be at least 1".into()));
    }
    let mut sampler = Sampler::new(seed, ranges.clone())?;
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    let mut hasher = Sha256::new();
    let mut row = [0u8; VECTOR_DIM * 4];
    for _ in 0..n {
        let v = encode(&sampler.next_sample());
        for (chunk, x) in row.chunks_exact_mut(4).zip(&v) {
            chunk.copy_from_slice(&(*x as f32).to_le_bytes());
        }
        hasher.update(row);
        out.write_all(&row).map_err(io_err(path))?;
    }
    out.flush().map_err(io_err(path))?;
    let manifest = DatasetManifest {
        n,
        dim: VECTOR_DIM,
        seed,
        rng: RNG_NAME.to_string(),
        dtype: "float32-le".to_string(),
        ranges_sha256: ranges.digest(),
        content_sha256: hex::encode(hasher.finalize()),
        layout: Layout {
            continuous: CONTINUOUS_DIM,
            one_hot: AXIS_DIM,
            binary: BINARY_DIM,
        },
    };
    let side = manifest_path(path);
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    std::fs::write(&side, json + "\n").map_err(io_err(&side))?;
    Ok(manifest)
}

/// Row-by-row reader of a dataset file.
pub struct DatasetReader {
    inner: BufReader<File>,
    path: PathBuf,
}

impl DatasetReader {
    pub fn open(path: &Path) -> Result<Self, MorphoError> {
        let file = File::open(path).map_err(io_err(path))?;
        let len = file.metadata().map_err(io_err(path))?.len();
        if len % (VECTOR_DIM as u64 * 4) != 0 {
            return Err(MorphoError::Format(format!(
                "{}: size {len} is not a multiple of {}",
                path.display(),
                VECTOR_DIM * 4
            )));
        }
        Ok(Self {
            inner: BufReader::new(file),
            path: path.to_path_buf(),
        })
    }
}

impl Iterator for DatasetReader {
    type Item = Result<Vec<f32>, MorphoError>;

    fn next(&mut self) -> Option<Self::Item> {
        let mut row = [0u8; VECTOR_DIM * 4];
        match self.inner.read_exact(&mut row) {
            Ok(()) => Some(Ok(row
                .chunks_exact(4)
                .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
                .collect())),
            Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => None,
            Err(e) => Some(Err(io_err(&self.path)(e))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_66() {
        assert_eq!(VECTOR_DIM, 66);
        assert_eq!(RangeConfig::default().continuous().len(), CONTINUOUS_DIM);
    }

    #[test]
    fn determinism() {
        let r = RangeConfig::default();
        assert_eq!(sample_morphology(7, &r).unwrap(), sample_morphology(7, &r).unwrap());
        assert_ne!(sample_morphology(7, &r).unwrap(), sample_morphology(8, &r).unwrap());
    }

    #[test]
    fn one_hot_and_binary_blocks() {
        let r = RangeConfig::default();
        let mut s = sample_morphology(1, &r).unwrap();
        s.axis_choices[0] = Axis6::PosX;
        s.topology = [false; NUM_SLOTS];
        for t in s.topology.iter_mut().take(5) {
            *t = true;
        }
        let v = encode(&s);
        assert_eq!(&v[32..38], &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let bin = &v[44..];
        assert!(bin[..5].iter().all(|b| *b == 1.0));
        assert!(bin[5..].iter().all(|b| *b == 0.0));
    }

    #[test]
    fn decode_rules() {
        let s = sample_morphology(3, &RangeConfig::default()).unwrap();
        let mut v = encode(&s);
        v[32..38].copy_from_slice(&[0.2, 0.1, 0.6, 0.0, 0.0, 0.0]);
        assert_eq!(decode(&v).unwrap().axis_choices[0], Axis6::PosY);
        v[32..38].copy_from_slice(&[0.5, 0.5, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(decode(&v).unwrap().axis_choices[0], Axis6::PosX);
        v[44] = 0.49;
        assert!(!decode(&v).unwrap().topology[0]);
        v[44] = 0.51;
        assert!(decode(&v).unwrap().topology[0]);
        assert!(matches!(decode(&v[..10]), Err(MorphoError::BadLength(10))));
    }

    #[test]
    fn repair_truncates() {
        let mut t = [false; NUM_SLOTS];
        t[5] = true;
        t[7] = true;
        t[17] = true;
        t[19] = true;
        let r = repair_topology(&t);
        assert!(r[5] && !r[7]);
        assert!(!r[17] && !r[19]);
    }

    #[test]
    fn samples_are_valid_and_prefix_closed() {
        let mut s = Sampler::new(11, RangeConfig::default()).unwrap();
        for _ in 0..500 {
            let x = s.next_sample();
            assert!(x.params.validate().is_valid());
            assert_eq!(repair_topology(&x.topology), x.topology);
            assert_eq!(x.params.active_mask(), x.topology);
            assert_eq!(decode(&encode(&x)).unwrap(), x);
        }
    }

    #[test]
    fn interpolation_endpoints() {
        let r = RangeConfig::default();
        let a = encode(&sample_morphology(1, &r).unwrap());
        let b = encode(&sample_morphology(2, &r).unwrap());
        assert_eq!(interpolate(&a, &b, 0.0).unwrap(), decode(&a).unwrap());
        assert_eq!(interpolate(&a, &b, 1.0).unwrap(), decode(&b).unwrap());
        assert_eq!(interpolate(&a, &a, 0.5).unwrap(), decode(&a).unwrap());
    }

    #[test]
    fn small_dataset_size() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.f32");
        let m = write_dataset(4, 5, &RangeConfig::default(), &path).unwrap();
        assert_eq!(std::fs::metadata(&path).unwrap().len(), 1056);
        assert_eq!(m.n, 4);
        let rows: Vec<_> = DatasetReader::open(&path).unwrap().collect::<Result<_, _>>().unwrap();
        assert_eq!(rows.len(), 4);
        assert!(manifest_path(&path).exists());
    }

    #[test]
    fn bad_ranges_rejected() {
        let mut r = RangeConfig::default();
        r.palm_radius = Range(0.05, 0.05);
        assert!(matches!(Sampler::new(0, r), Err(MorphoError::InvalidRanges(_))));
    }
}
