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

//! `preagg`: generate labeled COUNT(*) workloads, discover beneficial grouping
//! sets, and run or benchmark the workload against them.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use preagg_core::analyzer::{analyze, AnalyzerConfig, RoutingMode};
use preagg_core::harness::{
    run_benefit_grid_with, run_training_phase, write_examples_csv, GridConfig, RunConfig,
};
use preagg_core::querylang::Workload;
use preagg_core::rewriter::route_and_rewrite;
use preagg_core::storage::Catalog;
use preagg_core::workloadgen::{generate_workload_with_stats, profile_workload, GeneratorConfig};

#[derive(Parser)]
#[command(name = "preagg", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a schema and its CSV files and print per-column statistics.
    Ingest {
        #[arg(long)]
        schema: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Write the summary here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a workload from a generator config.
    Generate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Analyze a workload and write the grouping-set plan.
    Analyze {
        #[arg(long)]
        workload: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        schema: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum, default_value_t = Routing::Subset)]
        routing: Routing,
        /// Also write the rewritten workload.
        #[arg(long)]
        routed: Option<PathBuf>,
    },
    /// Execute a training-phase run and export labeled examples and timings.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_examples: PathBuf,
        #[arg(long)]
        out_report: PathBuf,
    },
    /// Run the synthetic benefit grid.
    Grid {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Summarize a workload's shape.
    Profile {
        #[arg(long)]
        workload: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Routing {
    Subset,
    Equality,
}

impl From<Routing> for RoutingMode {
    fn from(r: Routing) -> Self {
        match r {
            Routing::Subset => RoutingMode::Subset,
            Routing::Equality => RoutingMode::Equality,
        }
    }
}

/// Generator settings plus the data they sample from.
#[derive(Deserialize)]
struct GenerateConfig {
    schema: PathBuf,
    data: PathBuf,
    #[serde(flatten)]
    generator: GeneratorConfig,
}

#[derive(Serialize)]
struct ColumnSummary {
    name: String,
    distinct_count: u64,
    has_null: bool,
}

#[derive(Serialize)]
struct RelationSummary {
    name: String,
    rows: usize,
    payload_bytes: usize,
    columns: Vec<ColumnSummary>,
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_relative() {
        base.join(p)
    } else {
        p.to_path_buf()
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Ingest { schema, data, out } => {
            let catalog = Catalog::load(&schema, &data)?;
            let summary: Vec<RelationSummary> = catalog
                .relations()
                .map(|r| RelationSummary {
                    name: r.name().to_string(),
                    rows: r.row_count(),
                    payload_bytes: r.payload_bytes(),
                    columns: r
                        .columns()
                        .iter()
                        .map(|c| ColumnSummary {
                            name: c.name().to_string(),
                            distinct_count: c.distinct_count(),
                            has_null: c.has_null(),
                        })
                        .collect(),
                })
                .collect();
            match out {
                Some(path) => write_json(&path, &summary)?,
                None => println!("{}", serde_json::to_string_pretty(&summary)?),
            }
        }
        Command::Generate { config, out } => {
            let mut cfg: GenerateConfig = read_json(&config)?;
            let base = config.parent().unwrap_or(Path::new("."));
            cfg.schema = resolve(base, &cfg.schema);
            cfg.data = resolve(base, &cfg.data);
            let catalog = Catalog::load(&cfg.schema, &cfg.data)?;
            let (workload, stats) = generate_workload_with_stats(&cfg.generator, &catalog)?;
            workload.write(&out)?;
            eprintln!(
                "generated {} queries ({} zero-tuple rejections)",
                workload.len(),
                stats.rejections
            );
        }
        Command::Analyze {
            workload,
            out,
            schema,
            data,
            routing,
            routed,
        } => {
            let catalog = Catalog::load(&schema, &data)?;
            let workload = Workload::read(&workload)?;
            let config = AnalyzerConfig {
                routing: routing.into(),
                ..Default::default()
            };
            let plan = analyze(&workload, &catalog, config)?;
            std::fs::write(&out, plan.to_json()? + "\n").with_context(|| format!("writing {}", out.display()))?;
            if let Some(path) = routed {
                route_and_rewrite(&workload, &plan)?.write(&path)?;
            }
            eprintln!(
                "{} grouping sets, coverage {}/{}",
                plan.built.len(),
                plan.coverage.routed_to_grouping_sets,
                plan.coverage.total
            );
        }
        Command::Run {
            config,
            out_examples,
            out_report,
        } => {
            let cfg = RunConfig::read(&config)?;
            let out = run_training_phase(&cfg)?;
            write_examples_csv(&out_examples, &out.examples)?;
            out.report.write(&out_report)?;
            eprintln!(
                "{} labeled examples, coverage {:.1}%",
                out.examples.len(),
                out.report.coverage * 100.0
            );
        }
        Command::Grid { config, out } => {
            let cfg: GridConfig = read_json(&config)?;
            let report = run_benefit_grid_with(&cfg, |c| {
                eprintln!(
                    "n={} c={} distinct={} sf={} speedup={:.2}",
                    c.n,
                    c.c,
                    c.distinct,
                    c.scaling_factor.map_or("inf".to_string(), |v| format!("{v:e}")),
                    c.speedup
                );
            })?;
            write_json(&out, &report)?;
        }
        Command::Profile { workload, out } => {
            let workload = Workload::read(&workload)?;
            write_json(&out, &profile_workload(&workload))?;
        }
    }
    Ok(())
}
