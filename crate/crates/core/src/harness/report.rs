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

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::analyzer::{PlannedGroupingSet, Target};
use crate::error::{Error, Result};
use crate::rewriter::RoutedWorkload;

use super::config::Mode;
use super::mean;

/// A query paired with its true result size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabeledExample {
    /// Base rendering of the query.
    pub query: String,
    pub cardinality: u64,
}

/// Writes `query,cardinality` CSV with every query double-quoted.
pub fn write_examples<W: Write>(mut writer: W, examples: &[LabeledExample]) -> Result<()> {
    writer
        .write_all(b"query,cardinality\n")
        .map_err(|e| Error::io("writing labeled examples", e))?;
    let mut csv = csv::WriterBuilder::new()
        .has_headers(false)
        .quote_style(csv::QuoteStyle::NonNumeric)
        .from_writer(writer);
    for ex in examples {
        csv.write_record([ex.query.as_str(), &ex.cardinality.to_string()])?;
    }
    csv.flush().map_err(|e| Error::io("writing labeled examples", e))
}

pub fn write_examples_csv(path: &Path, examples: &[LabeledExample]) -> Result<()> {
    let file = std::fs::File::create(path)
        .map_err(|e| Error::io(format!("creating {}", path.display()), e))?;
    write_examples(std::io::BufWriter::new(file), examples)
}

/// Timings of one execution mode, averaged over repetitions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeReport {
    pub mode: Mode,
    pub execution_ns: u64,
    /// Index or grouping-set construction; zero for plain scans.
    pub construction_ns: u64,
    pub total_ns: u64,
    pub raw_execution_ns: Vec<u64>,
    pub raw_construction_ns: Vec<u64>,
    /// Auxiliary structure size.
    pub bytes: u64,
    /// Base execution time over this mode's execution plus construction.
    pub speedup: Option<f64>,
    /// Speedup per megabyte of auxiliary structure.
    pub speedup_per_mb: Option<f64>,
}

impl ModeReport {
    pub(crate) fn new(mode: Mode, execution: &[u64], construction: &[u64], bytes: u64, base_ns: Option<u64>) -> Self {
        let execution_ns = mean(execution);
        let construction_ns = mean(construction);
        let total_ns = execution_ns + construction_ns;
        let speedup = base_ns.filter(|_| total_ns > 0).map(|b| b as f64 / total_ns as f64);
        let speedup_per_mb = speedup.filter(|_| bytes > 0).map(|s| s / (bytes as f64 / 1e6));
        ModeReport {
            mode,
            execution_ns,
            construction_ns,
            total_ns,
            raw_execution_ns: execution.to_vec(),
            raw_construction_ns: construction.to_vec(),
            bytes,
            speedup,
            speedup_per_mb,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupingSetReport {
    pub name: String,
    pub relations: Vec<String>,
    pub attributes: Vec<String>,
    pub dropped: Vec<String>,
    /// `null` when the criterion's N is zero.
    pub scaling_factor: Option<f64>,
    pub criterion_n: u64,
    pub join_cardinality: u64,
    pub n_diverges: bool,
    /// Rows and bytes of the constructed set; absent if it was not built.
    pub actual_rows: Option<u64>,
    pub bytes: Option<u64>,
}

impl GroupingSetReport {
    pub(crate) fn from_plan(p: &PlannedGroupingSet, built: Option<(u64, u64)>) -> Self {
        GroupingSetReport {
            name: p.name.clone(),
            relations: p.relations.clone(),
            attributes: p.attributes.clone(),
            dropped: p.dropped.clone(),
            scaling_factor: Some(p.scaling_factor.value()).filter(|v| v.is_finite()),
            criterion_n: p.criterion_n,
            join_cardinality: p.join_cardinality,
            n_diverges: p.n_diverges,
            actual_rows: built.map(|b| b.0),
            bytes: built.map(|b| b.1),
        }
    }
}

/// Summary of a training-phase run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub query_count: usize,
    pub repetitions: u32,
    pub coverage: f64,
    pub routed_to_grouping_sets: usize,
    pub routed_to_base: usize,
    pub modes: Vec<ModeReport>,
    pub grouping_sets: Vec<GroupingSetReport>,
}

impl BenchReport {
    pub(crate) fn new(
        query_count: usize,
        repetitions: u32,
        modes: Vec<ModeReport>,
        routed: &RoutedWorkload,
        grouping_sets: Vec<GroupingSetReport>,
    ) -> Self {
        let to_gs = routed.entries.iter().filter(|e| e.target != Target::Base).count();
        BenchReport {
            query_count,
            repetitions,
            coverage: routed.coverage,
            routed_to_grouping_sets: to_gs,
            routed_to_base: routed.len() - to_gs,
            modes,
            grouping_sets,
        }
    }

    pub fn mode(&self, mode: Mode) -> Option<&ModeReport> {
        self.modes.iter().find(|m| m.mode == mode)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(format!("writing report {}", path.display()), e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples_csv_quotes_queries() {
        let ex = [
            LabeledExample {
                query: "SELECT COUNT(*) FROM t WHERE t.s = 'a,b';".into(),
                cardinality: 7,
            },
            LabeledExample {
                query: "SELECT COUNT(*) FROM t;".into(),
                cardinality: 10,
            },
        ];
        let mut buf = Vec::new();
        write_examples(&mut buf, &ex).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "query,cardinality\n\"SELECT COUNT(*) FROM t WHERE t.s = 'a,b';\",7\n\"SELECT COUNT(*) FROM t;\",10\n"
        );
    }

    #[test]
    fn speedup_is_base_over_total() {
        let m = ModeReport::new(Mode::GroupingSet, &[10, 30], &[50, 50], 2_000_000, Some(600));
        assert_eq!(m.execution_ns, 20);
        assert_eq!(m.total_ns, 70);
        assert_eq!(m.speedup, Some(600.0 / 70.0));
        assert_eq!(m.speedup_per_mb, Some(600.0 / 70.0 / 2.0));
        let none = ModeReport::new(Mode::Base, &[5], &[0], 0, None);
        assert_eq!(none.speedup, None);
    }
}
