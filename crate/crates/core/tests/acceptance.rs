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
//! One line per acceptance criterion; exits non-zero if any fails.

mod common;

use std::collections::HashMap;
use std::path::Path;
use std::time::{Duration, Instant};

use canonhand::action_map::{to_canonical, to_original};
use canonhand::generate::{joint_name, link_name, make_leap_variant, tip_link_name};
use canonhand::hand_model::{
    CanonicalHandParams, CanonicalJointSlot, ExtendedHandParams, Finger, Handedness, NUM_SLOTS,
};
use canonhand::kinematics::{fidelity_report, random_configs, unit_f64};
use canonhand::morpho::{decode, encode, write_dataset, DatasetReader, RangeConfig, Sampler};
use canonhand::transform::{rot_x, rot_y, Transform};
use canonhand::{
    auto_annotation, enumerate_variants, extract_all, fk_canonical, fk_urdf, generate_extended_urdf,
    generate_urdf, parse_urdf, promote, LeapVariantId,
};
use nalgebra::{Matrix4, Vector3, Vector4};
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn parameter_counts() -> Outcome {
    let text = std::fs::read_to_string(common::fixtures().join("params.json")).unwrap();
    let p: CanonicalHandParams = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let v = p.to_vec();
    ensure(v.len() == 82, || format!("canonical has {} scalars", v.len()))?;
    let back = CanonicalHandParams::from_slice(&v, Handedness::Right);
    ensure(back.as_ref() == Some(&p), || "from_slice(to_vec) differs".into())?;
    let e = promote(&p).map_err(|e| e.to_string())?;
    ensure(e.to_vec().len() == 173, || format!("extended has {}", e.to_vec().len()))?;
    let text = std::fs::read_to_string(common::fixtures().join("leap_extended.json")).unwrap();
    let leap: ExtendedHandParams = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    ensure(leap.to_vec().len() == 173, || "leap base is not 173".into())?;
    Ok("canonical 82, extended 173".into())
}

fn dof_audit() -> Outcome {
    let mut seen = Vec::new();
    for (name, want) in common::FIXTURES {
        let (model, a) = common::load_fixture(name);
        let p = extract_all(&model, &a).map_err(|e| format!("{name}: {e}"))?;
        let dof = p.active_mask().iter().filter(|x| **x).count();
        ensure(dof == want, || format!("{name}: {dof} != {want}"))?;
        seen.push(format!("{name} {dof}"));
    }
    Ok(seen.join(", "))
}

fn variant_enumeration() -> Outcome {
    let mut all = 0;
    let mut big = 0;
    for x in 0..4u32 {
        for y in 0..4 {
            for z in 0..4 {
                for w in 0..4 {
                    all += 1;
                    if x + y + z + w >= 8 {
                        big += 1;
                    }
                }
            }
        }
    }
    let n0 = enumerate_variants(0).len();
    let n8 = enumerate_variants(8).len();
    ensure(n0 == 256 && n0 == all, || format!("enumerate(0) = {n0}, brute force {all}"))?;
    ensure(n8 == 66 && n8 == big, || format!("enumerate(8) = {n8}, brute force {big}"))?;
    let text = std::fs::read_to_string(common::fixtures().join("leap_extended.json")).unwrap();
    let base: ExtendedHandParams = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let full = make_leap_variant(&base, "leap_3333".parse().unwrap());
    ensure(full.active_dof() == 16, || format!("leap_3333 has {} DoF", full.active_dof()))?;
    let urdf = generate_extended_urdf(&full).map_err(|e| e.to_string())?;
    let model = parse_urdf(&urdf, Path::new(".")).map_err(|e| e.to_string())?;
    ensure(model.revolute_count() == 16, || "leap_3333 URDF is not 16 DoF".into())?;
    for id in enumerate_variants(0) {
        let e = make_leap_variant(&base, id);
        let dof: u32 = id.digits().iter().map(|&k| if k == 0 { 0 } else { k as u32 + 1 }).sum();
        ensure(e.active_dof() as u32 == dof, || format!("{id}: {} DoF", e.active_dof()))?;
    }
    Ok(format!("256 ids, 66 with total >= 8, {} at 16 DoF", LeapVariantId::ORIGINAL))
}

fn round_trip() -> Outcome {
    let mut worst = common::Deviation::default();
    for seed in 0..1000u64 {
        let p = common::recoverable_params(seed);
        let text = generate_urdf(&p).map_err(|e| format!("seed {seed}: {e}"))?;
        let model = parse_urdf(&text, Path::new(".")).map_err(|e| format!("seed {seed}: {e}"))?;
        let got = extract_all(&model, &auto_annotation(&model)).map_err(|e| format!("seed {seed}: {e}"))?;
        let d = common::compare(&p.normalized(), &got);
        ensure(d.limits_exact && d.axes_exact, || format!("seed {seed}: limits/axes differ"))?;
        ensure(d.continuous <= 1e-6 && d.rotation <= 1e-6, || format!("seed {seed}: {d:?}"))?;
        worst.continuous = worst.continuous.max(d.continuous);
        worst.rotation = worst.rotation.max(d.rotation);
    }
    Ok(format!(
        "1000 hands, max continuous {:.1e}, max rotation {:.1e}",
        worst.continuous, worst.rotation
    ))
}

fn action_map_involution() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for (name, _) in common::FIXTURES {
        let (model, a) = common::load_fixture(name);
        let p = extract_all(&model, &a).map_err(|e| e.to_string())?;
        for i in 0..10_000 {
            let q: Vec<f64> = (0..a.joint_map.len())
                .map(|_| (unit_f64(&mut rng) - 0.5) * 2.0 * std::f64::consts::PI)
                .collect();
            let c = to_canonical(&q, &a).map_err(|e| e.to_string())?;
            let back = to_original(&c, &a);
            let same = back.iter().zip(&q).all(|(x, y)| x.to_bits() == y.to_bits());
            ensure(same, || format!("{name} vector {i}: not bitwise identical"))?;
            let zeros = (0..NUM_SLOTS).all(|s| p.is_active(s) || c[s] == 0.0);
            ensure(zeros, || format!("{name} vector {i}: inactive slot non-zero"))?;
        }
    }
    Ok("4 fixtures x 10000 vectors bitwise".into())
}

fn random_config(rng: &mut ChaCha8Rng) -> [f64; NUM_SLOTS] {
    std::array::from_fn(|_| 3.0 * unit_f64(rng) - 1.5)
}

fn homogeneous(t: &Transform) -> Matrix4<f64> {
    let mut m = Matrix4::identity();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(&t.rotation);
    m.fixed_view_mut::<3, 1>(0, 3).copy_from(&t.translation);
    m
}

fn fk_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for pair in 0..100u64 {
        let p = common::recoverable_params(10_000 + pair);
        let c = random_config(&mut rng);
        let model = parse_urdf(&generate_urdf(&p).unwrap(), Path::new(".")).unwrap();
        let values: HashMap<String, f64> = CanonicalJointSlot::all()
            .filter(|s| p.is_active(s.index))
            .map(|s| (joint_name(s.finger, s.rank), c[s.index]))
            .collect();
        let poses = fk_urdf(&model, &values).map_err(|e| e.to_string())?;
        let pose = fk_canonical(&p, &c).map_err(|e| e.to_string())?;
        for s in CanonicalJointSlot::all().filter(|s| p.is_active(s.index)) {
            let t = &poses[&link_name(s.finger, s.rank)];
            worst = worst.max((t.translation - pose.slot_frames[s.index].translation).norm());
        }
        for f in Finger::ALL {
            match (poses.get(&tip_link_name(f)), pose.fingertips[f.index()]) {
                (Some(t), Some(v)) => worst = worst.max((t.translation - v).norm()),
                (None, None) => {}
                _ => return Err(format!("pair {pair}: {f} tip presence differs")),
            }
        }
    }
    ensure(worst <= 1e-9, || format!("generated URDF gap {worst:.2e}"))?;

    // four-joint fingers against explicit homogeneous products
    let mut oracle: f64 = 0.0;
    for chain in 0..100u64 {
        let mut p = common::recoverable_params(20_000 + chain);
        let f = [Finger::Index, Finger::Middle, Finger::Ring][chain as usize % 3];
        let mut u = || unit_f64(&mut rng);
        let base = [0.02 * u(), 0.06 * u() - 0.03, 0.08 + 0.03 * u()];
        let lens = [0.02 + 0.04 * u(), 0.015 + 0.03 * u(), 0.01 + 0.03 * u()];
        p.finger_xyz[f.index()] = base;
        p.finger_lengths[3..].copy_from_slice(&lens);
        let q = [u() - 0.5, 2.0 * u() - 0.5, 2.0 * u() - 0.5, 2.0 * u() - 0.5];
        let mut c = [0.0; NUM_SLOTS];
        for (r, s) in f.slots().enumerate() {
            p.joint_lowers[s] = -1.0;
            p.joint_uppers[s] = 2.0;
            c[s] = q[r];
        }
        let h = |xyz: [f64; 3], r| homogeneous(&Transform::new(Vector3::from(xyz), r));
        let m = h(base, rot_x(q[0]))
            * h([0.0; 3], rot_y(q[1]))
            * h([0.0, 0.0, lens[0]], rot_y(q[2]))
            * h([0.0, 0.0, lens[1]], rot_y(q[3]));
        let tip = m * Vector4::new(0.0, 0.0, lens[2], 1.0);
        let pose = fk_canonical(&p, &c).map_err(|e| e.to_string())?;
        let last = f.slot(4);
        oracle = oracle.max((homogeneous(&pose.slot_frames[last]) - m).abs().max());
        oracle = oracle.max((pose.fingertips[f.index()].unwrap() - tip.xyz()).norm());
    }
    ensure(oracle <= 1e-9, || format!("oracle gap {oracle:.2e}"))?;
    Ok(format!("100 pairs max {worst:.1e} m; 100 chains vs matrices max {oracle:.1e}"))
}

fn morphology_dataset() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let a = dir.path().join("a.bin");
    let b = dir.path().join("b.bin");
    let ranges = RangeConfig::default();
    let ma = write_dataset(65_536, 2024, &ranges, &a).map_err(|e| e.to_string())?;
    let mb = write_dataset(65_536, 2024, &ranges, &b).map_err(|e| e.to_string())?;
    let bytes = std::fs::read(&a).unwrap();
    ensure(bytes == std::fs::read(&b).unwrap(), || "files differ".into())?;
    ensure(ma == mb, || "manifests differ".into())?;
    ensure(bytes.len() == 65_536 * 66 * 4, || format!("size {}", bytes.len()))?;
    let mut rows = 0;
    for row in DatasetReader::open(&a).map_err(|e| e.to_string())? {
        let row = row.map_err(|e| e.to_string())?;
        let v: Vec<f64> = row.iter().map(|x| f64::from(*x)).collect();
        let s = decode(&v).map_err(|e| format!("row {rows}: {e}"))?;
        ensure(s.params.validate().is_valid(), || format!("row {rows}: {}", s.params.validate()))?;
        rows += 1;
    }
    ensure(rows == 65_536, || format!("read {rows} rows"))?;
    let mut sampler = Sampler::new(99, ranges).map_err(|e| e.to_string())?;
    for i in 0..10_000 {
        let s = sampler.next_sample();
        let v = encode(&s);
        let d = decode(&v).map_err(|e| e.to_string())?;
        ensure(d == s && encode(&d) == v, || format!("sample {i}: encode/decode mismatch"))?;
    }
    Ok(format!("65536 rows identical (sha256 {}), all valid; 10000 exact", &ma.content_sha256[..12]))
}

fn fidelity() -> Outcome {
    let mut lines = Vec::new();
    for name in ["shadow", "leap"] {
        let (model, a) = common::load_fixture(name);
        let p = extract_all(&model, &a).map_err(|e| e.to_string())?;
        let r = fidelity_report(&model, &a, &p, &random_configs(&model, &a, 200, 1))
            .map_err(|e| e.to_string())?;
        ensure(r.mean.is_finite() && r.max.is_finite(), || format!("{name}: not finite"))?;
        lines.push(format!("{name} mean {:.4e} max {:.4e}", r.mean, r.max));
    }
    let mut self_max: f64 = 0.0;
    for seed in 0..20 {
        let p = common::recoverable_params(30_000 + seed);
        let model = parse_urdf(&generate_urdf(&p).unwrap(), Path::new(".")).unwrap();
        let a = auto_annotation(&model);
        if a.joint_map.is_empty() {
            continue;
        }
        let r = fidelity_report(&model, &a, &p, &random_configs(&model, &a, 50, seed))
            .map_err(|e| e.to_string())?;
        self_max = self_max.max(r.max);
    }
    ensure(self_max < 1e-9, || format!("self-audit max {self_max:.2e}"))?;
    lines.push(format!("self-audit max {self_max:.1e}"));
    Ok(lines.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("parameter counts", parameter_counts, Duration::from_secs(1)),
        ("dof audit", dof_audit, Duration::from_secs(10)),
        ("variant enumeration", variant_enumeration, Duration::from_secs(1)),
        ("round trip", round_trip, Duration::from_secs(60)),
        ("action map involution", action_map_involution, Duration::from_secs(10)),
        ("fk consistency", fk_consistency, Duration::from_secs(30)),
        ("morphology dataset", morphology_dataset, Duration::from_secs(60)),
        ("fidelity regression", fidelity, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(_) if took > budget => Err(format!("took {took:.2?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} ({took:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why} ({took:.2?})");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
