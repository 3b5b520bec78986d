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
//! Canonical representation of dexterous robot hands.
//!
//! * [`urdf`] parses robot descriptions into a validated kinematic tree.
//! * [`extract`] derives [`CanonicalHandParams`] from a URDF and a short
//!   [`HandAnnotation`].
//! * [`generate`] emits canonical URDFs, the extended variant and the
//!   `leap_xyzw` family.
//! * [`action_map`] converts joint vectors to and from the 22 canonical slots.
//! * [`kinematics`] evaluates forward kinematics and fidelity reports.
//! * [`morpho`] samples morphologies and serializes them as fixed vectors.

pub mod action_map;
pub mod extract;
pub mod generate;
pub mod hand_model;
pub mod kinematics;
pub mod mesh;
pub mod morpho;
pub mod transform;
pub mod urdf;

pub use action_map::{clamp_to_limits, to_canonical, to_original, ActionMapError};
pub use extract::{auto_annotation, extract_all, ExtractError, HandAnnotation, JointMapping};
pub use generate::{
    enumerate_variants, generate_extended_urdf, generate_urdf, make_leap_variant, promote,
    GenerateError, GenerateOptions, LeapVariantId,
};
pub use hand_model::{
    active_dof, mirror_handedness, validate_params, Axis6, CanonicalHandParams, ParamDeviation,
    CanonicalJointSlot, ExtendedHandParams, Finger, Handedness, ValidationReport, NUM_SLOTS,
};
pub use kinematics::{fidelity_report, fk_canonical, fk_urdf, FidelityReport, KinematicsError};
pub use mesh::{Aabb, MeshError};
pub use morpho::{decode, encode, sample_morphology, MorphoError, MorphologySample, RangeConfig};
pub use transform::{Origin, Transform};
pub use urdf::{load_urdf, parse_urdf, UrdfError, UrdfModel};

/// Any error raised by this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Urdf(#[from] UrdfError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error(transparent)]
    ActionMap(#[from] ActionMapError),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
    #[error(transparent)]
    Morpho(#[from] MorphoError),
}
