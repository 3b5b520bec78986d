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
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use canonhand::extract::ExtractError;
use canonhand::generate::{generate_extended_urdf_with, generate_urdf_with, make_leap_variant};
use canonhand::kinematics::random_configs;
use canonhand::morpho::write_dataset;
use canonhand::urdf::{UrdfError, UrdfModel};
use canonhand::{
    auto_annotation, enumerate_variants, extract_all, fidelity_report, fk_canonical, load_urdf,
    parse_urdf, to_canonical, to_original, CanonicalHandParams, ExtendedHandParams, Finger,
    GenerateError, GenerateOptions, HandAnnotation, RangeConfig, NUM_SLOTS,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Config;
use crate::{Cli, Command, Direction};

/// Round-trip tolerance on continuous values and rotations.
const ROUNDTRIP_TOL: f64 = 1e-6;

#[derive(Debug)]
pub enum CliError {
    /// Inputs were read but are not acceptable.
    Validation(String),
    /// A file could not be read, written or parsed.
    Io(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Io(_) => 2,
        }
    }

    pub fn io(path: &Path, e: impl fmt::Display) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<ExtractError> for CliError {
    fn from(e: ExtractError) -> Self {
        match e {
            ExtractError::Urdf(_) | ExtractError::AnnotationFile { .. } => CliError::Io(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<GenerateError> for CliError {
    fn from(e: GenerateError) -> Self {
        match e {
            GenerateError::Urdf(_) => CliError::Io(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

struct Ctx {
    json: bool,
    asset_root: Option<PathBuf>,
    config: Config,
}

impl Ctx {
    fn load_model(&self, path: &Path) -> Result<UrdfModel> {
        load_urdf(path, self.asset_root.as_deref()).map_err(|e| CliError::io(path, e))
    }

    /// Print `value` as JSON in JSON mode, otherwise the text.
    fn emit(&self, value: Value, text: impl FnOnce() -> String) {
        if self.json {
            say(&(serde_json::to_string_pretty(&value).expect("json") + "\n"));
        } else {
            say(&(text() + "\n"));
        }
    }
}

/// Write to stdout, ignoring a closed pipe.
fn say(text: &str) {
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::io(path, e))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn load_params(path: &Path) -> Result<CanonicalHandParams> {
    let p: CanonicalHandParams = read_json(path)?;
    let report = p.validate();
    if !report.is_valid() {
        return Err(CliError::Validation(format!("{}: {report}", path.display())));
    }
    Ok(p)
}

fn load_annotation(path: &Path) -> Result<HandAnnotation> {
    HandAnnotation::load(path).map_err(|e| CliError::io(path, e))
}

fn read_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| CliError::io(path, e))?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::io(path, e))?;
        let row = record
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| CliError::io(path, format!("row {}: {e}", i + 1)))?;
        rows.push(row);
    }
    Ok(rows)
}

fn csv_text(rows: &[Vec<f64>]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for r in rows {
        w.write_record(r.iter().map(|v| v.to_string())).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn run(cli: Cli) -> Result<()> {
    let config = Config::load(cli.config_file.as_deref())?;
    let ctx = Ctx {
        json: cli.json,
        asset_root: cli.asset_root.or_else(|| config.asset_root.clone()),
        config,
    };
    match cli.command {
        Command::Inspect { urdf } => inspect(&ctx, &urdf),
        Command::Extract {
            urdf,
            annotation,
            out,
        } => extract(&ctx, &urdf, &annotation, out.as_deref()),
        Command::Generate {
            params,
            out,
            extended,
            capsule_tag,
            name,
        } => {
            let opts = GenerateOptions {
                capsule_tag: capsule_tag || ctx.config.capsule_tag,
                name,
            };
            generate(&ctx, &params, out.as_deref(), extended, &opts)
        }
        Command::LeapVariants {
            base,
            min_total,
            out_dir,
        } => {
            let min_total = min_total.or(ctx.config.min_total).unwrap_or(0);
            leap_variants(&ctx, &base, min_total, &out_dir)
        }
        Command::Map {
            annotation,
            direction,
            input,
            out,
        } => map(&ctx, &annotation, direction, &input, out.as_deref()),
        Command::Fk { params, config } => fk(&ctx, &params, &config),
        Command::Audit {
            urdf,
            annotation,
            params,
            n,
            seed,
            out,
        } => {
            let n = n.or(ctx.config.n.map(|v| v as usize)).unwrap_or(100);
            let seed = seed.or(ctx.config.seed).unwrap_or(0);
            audit(&ctx, &urdf, &annotation, &params, n, seed, out.as_deref())
        }
        Command::Sample {
            n,
            seed,
            ranges,
            out,
        } => {
            let n = n.or(ctx.config.n).unwrap_or(65_536);
            let seed = seed.or(ctx.config.seed).unwrap_or(0);
            let ranges = ranges.or_else(|| ctx.config.ranges.clone());
            sample(&ctx, n, seed, ranges.as_deref(), &out)
        }
        Command::Roundtrip { params } => roundtrip(&ctx, &params),
    }
}

fn inspect(ctx: &Ctx, path: &Path) -> Result<()> {
    let model = ctx.load_model(path)?;
    let mut links = Vec::new();
    for link in &model.links {
        let aabb = match model.link_aabb(&link.name) {
            Ok(b) => Some(b),
            Err(UrdfError::EmptyGeometry(_)) => None,
            Err(e) => return Err(CliError::io(path, e)),
        };
        links.push((link.name.clone(), aabb));
    }
    let joints: Vec<Value> = model
        .joints
        .iter()
        .map(|j| {
            let (lo, hi) = j.range();
            json!({
                "name": j.name,
                "type": j.kind.as_str(),
                "parent": j.parent,
                "child": j.child,
                "lower": lo,
                "upper": hi,
            })
        })
        .collect();
    let value = json!({
        "name": model.name,
        "root": model.root_link,
        "revolute_joints": model.revolute_count(),
        "links": links.iter().map(|(n, b)| json!({"name": n, "aabb": b})).collect::<Vec<_>>(),
        "joints": joints,
    });
    ctx.emit(value, || {
        let mut out = format!(
            "robot {} ({} links, {} joints, {} revolute)\n",
            model.name,
            model.links.len(),
            model.joints.len(),
            model.revolute_count()
        );
        tree(&model, &model.root_link, 0, &links, &mut out);
        out.trim_end().to_string()
    });
    Ok(())
}

type LinkBoxes = [(String, Option<canonhand::Aabb>)];

fn tree(model: &UrdfModel, link: &str, depth: usize, boxes: &LinkBoxes, out: &mut String) {
    let pad = "  ".repeat(depth);
    let aabb = boxes
        .iter()
        .find(|(n, _)| n == link)
        .and_then(|(_, b)| *b)
        .map(|b| {
            let e = b.extents();
            format!("  extents [{:.4}, {:.4}, {:.4}]", e[0], e[1], e[2])
        })
        .unwrap_or_default();
    out.push_str(&format!("{pad}{link}{aabb}\n"));
    for j in model.child_joints(link) {
        let range = if j.kind.is_movable() {
            let (lo, hi) = j.range();
            format!(" [{lo}, {hi}]")
        } else {
            String::new()
        };
        out.push_str(&format!("{pad}  + {} ({}){range}\n", j.name, j.kind.as_str()));
        tree(model, &j.child, depth + 2, boxes, out);
    }
}

fn extract(ctx: &Ctx, urdf: &Path, annotation: &Path, out: Option<&Path>) -> Result<()> {
    let model = ctx.load_model(urdf)?;
    let a = load_annotation(annotation)?;
    let p = extract_all(&model, &a)?;
    let dof = p.active_mask().iter().filter(|x| **x).count();
    let text = to_json(&p);
    if let Some(out) = out {
        write(out, &text)?;
    } else if !ctx.json {
        say(&text);
        return Ok(());
    }
    ctx.emit(json!({"active_dof": dof, "params": p}), || {
        format!("wrote {} ({dof} active DoF)", out.expect("set").display())
    });
    Ok(())
}

fn generate(
    ctx: &Ctx,
    params: &Path,
    out: Option<&Path>,
    extended: bool,
    opts: &GenerateOptions,
) -> Result<()> {
    let text = if extended {
        let e: ExtendedHandParams = read_json(params)?;
        generate_extended_urdf_with(&e, opts)?
    } else {
        let p: CanonicalHandParams = read_json(params)?;
        generate_urdf_with(&p, opts)?
    };
    let Some(out) = out else {
        if ctx.json {
            ctx.emit(json!({ "urdf": text }), String::new);
        } else {
            say(&text);
        }
        return Ok(());
    };
    write(out, &text)?;
    let model = parse_urdf(&text, Path::new(".")).map_err(|e| CliError::Io(e.to_string()))?;
    ctx.emit(
        json!({
            "out": out.display().to_string(),
            "robot": model.name,
            "links": model.links.len(),
            "revolute_joints": model.revolute_count(),
        }),
        || format!("wrote {} ({} revolute joints)", out.display(), model.revolute_count()),
    );
    Ok(())
}

fn leap_variants(ctx: &Ctx, base: &Path, min_total: u32, out_dir: &Path) -> Result<()> {
    let e: ExtendedHandParams = read_json(base)?;
    let report = e.validate();
    if !report.is_valid() {
        return Err(CliError::Validation(format!("{}: {report}", base.display())));
    }
    fs::create_dir_all(out_dir).map_err(|err| CliError::io(out_dir, err))?;
    let mut entries = Vec::new();
    for id in enumerate_variants(min_total) {
        let v = make_leap_variant(&e, id);
        let opts = GenerateOptions {
            capsule_tag: ctx.config.capsule_tag,
            name: Some(id.name()),
        };
        let file = format!("{id}.urdf");
        write(&out_dir.join(&file), &generate_extended_urdf_with(&v, &opts)?)?;
        entries.push(json!({
            "id": id.name(),
            "digits": id.digits(),
            "total": id.total(),
            "dof": v.active_dof(),
            "file": file,
        }));
    }
    let manifest = json!({ "min_total": min_total, "count": entries.len(), "variants": entries });
    write(&out_dir.join("manifest.json"), &to_json(&manifest))?;
    let count = entries.len();
    ctx.emit(manifest, || format!("wrote {count} variants to {}", out_dir.display()));
    Ok(())
}

fn map(
    ctx: &Ctx,
    annotation: &Path,
    direction: Direction,
    input: &Path,
    out: Option<&Path>,
) -> Result<()> {
    let a = load_annotation(annotation)?;
    let rows = read_csv(input)?;
    let mut result = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let mapped = match direction {
            Direction::ToCanonical => to_canonical(row, &a)
                .map(|c| c.to_vec())
                .map_err(|e| CliError::Validation(format!("row {}: {e}", i + 1)))?,
            Direction::ToOriginal => {
                let c: [f64; NUM_SLOTS] = row.as_slice().try_into().map_err(|_| {
                    CliError::Validation(format!(
                        "row {}: expected {NUM_SLOTS} canonical values, got {}",
                        i + 1,
                        row.len()
                    ))
                })?;
                to_original(&c, &a)
            }
        };
        result.push(mapped);
    }
    match out {
        Some(out) => {
            write(out, &csv_text(&result))?;
            ctx.emit(json!({"rows": result.len(), "out": out.display().to_string()}), || {
                format!("wrote {} rows to {}", result.len(), out.display())
            });
        }
        None if ctx.json => ctx.emit(json!({ "rows": result }), String::new),
        None => say(&csv_text(&result)),
    }
    Ok(())
}

fn fk(ctx: &Ctx, params: &Path, config: &Path) -> Result<()> {
    let p = load_params(params)?;
    let rows = read_csv(config)?;
    let mut poses = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let c: [f64; NUM_SLOTS] = row.as_slice().try_into().map_err(|_| {
            CliError::Validation(format!(
                "row {}: expected {NUM_SLOTS} canonical values, got {}",
                i + 1,
                row.len()
            ))
        })?;
        let pose = fk_canonical(&p, &c).map_err(|e| CliError::Validation(e.to_string()))?;
        poses.push(pose.fingertips);
    }
    let value: Vec<Value> = poses
        .iter()
        .map(|tips| {
            let m: serde_json::Map<String, Value> = Finger::ALL
                .iter()
                .map(|f| (f.name().to_string(), json!(tips[f.index()].map(|v| [v.x, v.y, v.z]))))
                .collect();
            Value::Object(m)
        })
        .collect();
    ctx.emit(json!({ "fingertips": value }), || {
        let mut out = Vec::new();
        for (i, tips) in poses.iter().enumerate() {
            for f in Finger::ALL {
                if let Some(v) = tips[f.index()] {
                    out.push(format!("{i} {f} {:.6} {:.6} {:.6}", v.x, v.y, v.z));
                }
            }
        }
        out.join("\n")
    });
    Ok(())
}

fn audit(
    ctx: &Ctx,
    urdf: &Path,
    annotation: &Path,
    params: &Path,
    n: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<()> {
    let model = ctx.load_model(urdf)?;
    let a = load_annotation(annotation)?;
    a.validate(&model)?;
    let p = load_params(params)?;
    let configs = random_configs(&model, &a, n, seed);
    let report = fidelity_report(&model, &a, &p, &configs)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let text = to_json(&report);
    match out {
        Some(out) => write(out, &text)?,
        None if ctx.json => {
            say(&text);
            return Ok(());
        }
        None => {}
    }
    let value = serde_json::to_value(&report).expect("report serializes");
    ctx.emit(value, || {
        let mut lines: Vec<String> = report
            .fingers
            .iter()
            .zip(report.per_finger_mean.iter().zip(&report.per_finger_max))
            .map(|(f, (mean, max))| format!("{f:<7} mean {mean:.6e} max {max:.6e}"))
            .collect();
        lines.push(format!(
            "overall mean {:.6e} max {:.6e} over {} configurations",
            report.mean, report.max, report.n_configs
        ));
        lines.join("\n")
    });
    Ok(())
}

fn sample(ctx: &Ctx, n: u64, seed: u64, ranges: Option<&Path>, out: &Path) -> Result<()> {
    let ranges = match ranges {
        Some(path) => RangeConfig::load(path).map_err(|e| CliError::io(path, e))?,
        None => RangeConfig::default(),
    };
    if let Err(e) = ranges.validate() {
        return Err(CliError::Validation(e.to_string()));
    }
    let manifest = write_dataset(n, seed, &ranges, out).map_err(|e| match e {
        canonhand::MorphoError::Io { .. } => CliError::io(out, e),
        other => CliError::Validation(other.to_string()),
    })?;
    let value = serde_json::to_value(&manifest).expect("manifest serializes");
    ctx.emit(value, || {
        format!(
            "wrote {n} x {} rows to {} (sha256 {})",
            manifest.dim,
            out.display(),
            manifest.content_sha256
        )
    });
    Ok(())
}

fn roundtrip(ctx: &Ctx, params: &Path) -> Result<()> {
    let p = load_params(params)?;
    let text = generate_urdf_with(&p, &GenerateOptions::default())?;
    let model = parse_urdf(&text, Path::new(".")).map_err(|e| CliError::Io(e.to_string()))?;
    let got = extract_all(&model, &auto_annotation(&model))?;
    let d = p.normalized().deviation(&got);
    ctx.emit(serde_json::to_value(d).expect("deviation serializes"), || {
        format!(
            "max continuous deviation {:.3e}\nmax rotation deviation {:.3e}\nlimits exact: {}\naxes exact: {}",
            d.continuous, d.rotation, d.limits_exact, d.axes_exact
        )
    });
    if d.within(ROUNDTRIP_TOL) {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "round trip exceeds tolerance {ROUNDTRIP_TOL:e}"
        )))
    }
}
