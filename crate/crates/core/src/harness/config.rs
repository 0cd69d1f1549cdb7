// Copyright 2026 The Preagg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analyzer::RoutingMode;
use crate::error::{Error, Result};
use crate::querylang::Operator;
use crate::workloadgen::GeneratorConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Full scans over base data.
    Base,
    /// Base data with a sorted index on every predicate column.
    BaseIndexed,
    /// Routed queries on grouping sets, the rest on base data.
    GroupingSet,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Base => "base",
            Mode::BaseIndexed => "base_indexed",
            Mode::GroupingSet => "grouping_set",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WorkloadSource {
    File(PathBuf),
    Generate(GeneratorConfig),
}

fn default_modes() -> BTreeSet<Mode> {
    [Mode::Base, Mode::BaseIndexed, Mode::GroupingSet].into()
}

fn default_repetitions() -> u32 {
    3
}

/// Execution settings shared by file-driven and in-memory runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    #[serde(default = "default_modes")]
    pub modes: BTreeSet<Mode>,
    #[serde(default)]
    pub routing: RoutingMode,
    #[serde(default = "default_repetitions")]
    pub repetitions: u32,
    /// Build grouping sets and execute queries on the rayon pool.
    #[serde(default)]
    pub parallel: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            modes: default_modes(),
            routing: RoutingMode::default(),
            repetitions: default_repetitions(),
            parallel: false,
        }
    }
}

impl RunOptions {
    pub fn validate(&self) -> Result<()> {
        if self.modes.is_empty() {
            return Err(Error::Config("at least one mode must be selected".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be positive".into()));
        }
        Ok(())
    }
}

/// JSON run configuration. Relative paths resolve against the directory of
/// the configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub schema: PathBuf,
    pub data: PathBuf,
    pub workload: WorkloadSource,
    #[serde(flatten)]
    pub options: RunOptions,
    /// Optional export of the analysis plan.
    #[serde(default)]
    pub out_plan: Option<PathBuf>,
    /// Optional export of the routed workload.
    #[serde(default)]
    pub out_routed: Option<PathBuf>,
}

impl RunConfig {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading run config {}", path.display()), e))?;
        let mut cfg: RunConfig = serde_json::from_str(&text)?;
        if let Some(dir) = path.parent() {
            cfg.resolve_paths(dir);
        }
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.schema);
        fix(&mut self.data);
        if let WorkloadSource::File(p) = &mut self.workload {
            fix(p);
        }
        if let Some(p) = &mut self.out_plan {
            fix(p);
        }
        if let Some(p) = &mut self.out_routed {
            fix(p);
        }
    }
}

fn default_queries() -> usize {
    1000
}

/// Parameters of the synthetic benefit study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub n_values: Vec<usize>,
    pub c_values: Vec<usize>,
    pub distinct_values: Vec<u64>,
    #[serde(default = "default_queries")]
    pub queries_per_cell: usize,
    #[serde(default = "default_repetitions")]
    pub repetitions: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "crate::harness::config::all_operators")]
    pub operators: Vec<Operator>,
}

pub(crate) fn all_operators() -> Vec<Operator> {
    Operator::ALL.to_vec()
}

impl GridConfig {
    /// 4 × 5 × 6 tables, 1,000 queries each.
    pub fn full_scale() -> Self {
        GridConfig {
            n_values: vec![1_000, 10_000, 100_000, 1_000_000],
            c_values: vec![1, 2, 3, 4, 5],
            distinct_values: vec![5, 10, 100, 1_000, 100_000, 1_000_000],
            queries_per_cell: 1000,
            repetitions: 3,
            seed: 0,
            operators: all_operators(),
        }
    }

    /// A 27-cell grid that runs in minutes on a laptop.
    pub fn desk_scale() -> Self {
        GridConfig {
            n_values: vec![10_000, 100_000, 1_000_000],
            c_values: vec![1, 3, 5],
            distinct_values: vec![5, 100, 1_000],
            queries_per_cell: 200,
            repetitions: 3,
            seed: 0,
            operators: all_operators(),
        }
    }

    pub fn cell_count(&self) -> usize {
        self.n_values.len() * self.c_values.len() * self.distinct_values.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() || self.c_values.is_empty() || self.distinct_values.is_empty() {
            return Err(Error::Config("grid value lists must be non-empty".into()));
        }
        if self.n_values.contains(&0) || self.c_values.contains(&0) || self.distinct_values.contains(&0) {
            return Err(Error::Config("grid values must be positive".into()));
        }
        if self.repetitions == 0 || self.queries_per_cell == 0 {
            return Err(Error::Config("repetitions and queries_per_cell must be positive".into()));
        }
        Ok(())
    }
}
