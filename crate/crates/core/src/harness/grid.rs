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

use serde::Serialize;

use crate::cube::{build_grouping_set, execute_on_grouping_set};
use crate::error::{Error, Result};
use crate::executor::execute_count;
use crate::workloadgen::{generate_synthetic_relation, sample_workload, GeneratorConfig};

use super::config::GridConfig;
use super::{mean, timed};

/// Measurements for one synthetic table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridCell {
    pub n: usize,
    pub c: usize,
    pub distinct: u64,
    /// `null` when infinite.
    pub scaling_factor: Option<f64>,
    pub beneficial: bool,
    pub grouping_set_rows: usize,
    pub query_count: usize,
    pub base_ns: u64,
    pub construction_ns: u64,
    pub grouping_set_ns: u64,
    /// `base_ns / (construction_ns + grouping_set_ns)`.
    pub speedup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridReport {
    pub config: GridConfig,
    pub cells: Vec<GridCell>,
}

impl GridReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn cell_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Runs the benefit study: for every (N, C, distinct) cell, times full scans
/// against grouping-set construction plus execution on a uniform synthetic
/// table. Cells run sequentially; answers are cross-checked.
pub fn run_benefit_grid(config: &GridConfig) -> Result<GridReport> {
    run_benefit_grid_with(config, |_| {})
}

/// As [`run_benefit_grid`], calling `progress` after each finished cell.
pub fn run_benefit_grid_with(config: &GridConfig, mut progress: impl FnMut(&GridCell)) -> Result<GridReport> {
    config.validate()?;
    let mut cells = Vec::with_capacity(config.cell_count());
    let mut index = 0;
    for &n in &config.n_values {
        for &c in &config.c_values {
            for &distinct in &config.distinct_values {
                let cell = run_cell(config, n, c, distinct, cell_seed(config.seed, index))?;
                progress(&cell);
                cells.push(cell);
                index += 1;
            }
        }
    }
    Ok(GridReport {
        config: config.clone(),
        cells,
    })
}

fn run_cell(config: &GridConfig, n: usize, c: usize, distinct: u64, seed: u64) -> Result<GridCell> {
    let rel = generate_synthetic_relation(n, c, distinct, seed);
    let mut gen = GeneratorConfig::new(&["synthetic"], config.queries_per_cell, c, seed.wrapping_add(1));
    gen.operators = config.operators.clone();
    gen.zero_tuple_filter = false;
    let (workload, _) = sample_workload(&rel, &gen.relations, &[], &gen)?;
    let attributes: Vec<String> = rel.column_names().map(str::to_string).collect();

    let mut base = Vec::new();
    let mut construction = Vec::new();
    let mut execution = Vec::new();
    let mut reference: Option<Vec<u64>> = None;
    let mut gs_rows = 0;
    let mut sf = None;
    for _ in 0..config.repetitions {
        let (base_cards, t) = timed(|| {
            workload
                .queries
                .iter()
                .map(|q| execute_count(&rel, &q.predicates))
                .collect::<Result<Vec<_>>>()
        });
        base.push(t);
        let (gs, t) = timed(|| build_grouping_set(&rel, &attributes));
        let gs = gs?;
        construction.push(t);
        let (gs_cards, t) = timed(|| {
            workload
                .queries
                .iter()
                .map(|q| execute_on_grouping_set(&gs, &q.predicates))
                .collect::<Result<Vec<_>>>()
        });
        execution.push(t);
        let (base_cards, gs_cards) = (base_cards?, gs_cards?);
        if let Some(i) = (0..base_cards.len()).find(|&i| base_cards[i] != gs_cards[i]) {
            return Err(Error::ModeDisagreement {
                query_index: i,
                detail: format!(
                    "grid cell n={n} c={c} distinct={distinct}: scan {} vs grouping set {}",
                    base_cards[i], gs_cards[i]
                ),
            });
        }
        if let Some(prev) = &reference {
            debug_assert_eq!(prev, &base_cards);
        }
        reference = Some(base_cards);
        gs_rows = gs.row_count();
        sf = Some(gs.scaling_factor());
    }
    let sf = sf.expect("at least one repetition");
    let (base_ns, construction_ns, grouping_set_ns) = (mean(&base), mean(&construction), mean(&execution));
    Ok(GridCell {
        n,
        c,
        distinct,
        scaling_factor: Some(sf.value()).filter(|v| v.is_finite()),
        beneficial: sf.is_beneficial(),
        grouping_set_rows: gs_rows,
        query_count: workload.len(),
        base_ns,
        construction_ns,
        grouping_set_ns,
        speedup: base_ns as f64 / (construction_ns + grouping_set_ns).max(1) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_grid_runs_and_agrees() {
        let cfg = GridConfig {
            n_values: vec![500],
            c_values: vec![1, 2],
            distinct_values: vec![3, 1000],
            queries_per_cell: 20,
            repetitions: 1,
            seed: 5,
            operators: crate::querylang::Operator::ALL.to_vec(),
        };
        let report = run_benefit_grid(&cfg).unwrap();
        assert_eq!(report.cells.len(), 4);
        let small = &report.cells[0];
        assert_eq!((small.c, small.distinct), (1, 3));
        assert_eq!(small.grouping_set_rows, 3);
        assert!(small.beneficial);
        assert!(!report.cells[3].beneficial);
    }

    #[test]
    fn cell_seeds_differ() {
        assert_ne!(cell_seed(0, 0), cell_seed(0, 1));
    }
}
