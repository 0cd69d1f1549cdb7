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

//! End-to-end runs: the training phase in up to three execution modes, the
//! synthetic benefit grid, and their reports.

mod config;
mod grid;
mod report;
mod run;

pub use config::{GridConfig, Mode, RunConfig, RunOptions, WorkloadSource};
pub use grid::{run_benefit_grid, run_benefit_grid_with, GridCell, GridReport};
pub use report::{write_examples, write_examples_csv, BenchReport, GroupingSetReport, LabeledExample, ModeReport};
pub use run::{run_pipeline, run_training_phase, TrainingOutput};

use std::time::Instant;

/// Wall-clock nanoseconds of `f` on a monotonic clock.
pub(crate) fn timed<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_nanos() as u64)
}

pub(crate) fn mean(xs: &[u64]) -> u64 {
    if xs.is_empty() {
        0
    } else {
        (xs.iter().map(|&x| u128::from(x)).sum::<u128>() / xs.len() as u128) as u64
    }
}
