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
//! `canonhand` command-line tool.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "canonhand", version, about = "Canonical dexterous hand toolkit")]
pub struct Cli {
    /// Print structured JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Root for resolving mesh paths.
    #[arg(long, global = true, env = "CANONHAND_ASSET_ROOT")]
    pub asset_root: Option<PathBuf>,
    /// TOML file with default option values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config_file: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the kinematic tree, DoF count and link bounding boxes.
    Inspect { urdf: PathBuf },
    /// Extract canonical parameters from a URDF and its annotation.
    Extract {
        urdf: PathBuf,
        #[arg(long)]
        annotation: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a canonical URDF from a parameter file.
    Generate {
        params: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Read extended parameters instead of canonical ones.
        #[arg(long)]
        extended: bool,
        /// Use `<capsule>` elements instead of cylinders with end spheres.
        #[arg(long)]
        capsule_tag: bool,
        /// Robot name.
        #[arg(long)]
        name: Option<String>,
    },
    /// Write leap_xyzw variants of an extended LEAP hand.
    LeapVariants {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        min_total: Option<u32>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Convert joint vectors between an original hand and canonical slots.
    Map {
        #[arg(long)]
        annotation: PathBuf,
        #[arg(long, value_enum)]
        direction: Direction,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fingertip positions of a canonical hand at the configurations given.
    Fk {
        params: PathBuf,
        /// CSV of 22-slot canonical joint vectors.
        #[arg(long)]
        config: PathBuf,
    },
    /// Fingertip discrepancy between a URDF and its canonical parameters.
    Audit {
        urdf: PathBuf,
        #[arg(long)]
        annotation: PathBuf,
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a morphology dataset.
    Sample {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        ranges: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate, parse and extract a parameter file, then compare.
    Roundtrip { params: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    ToCanonical,
    ToOriginal,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
