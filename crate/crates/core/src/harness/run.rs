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

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use crate::analyzer::{analyze, build_grouping_sets, AnalysisPlan, AnalyzerConfig, Target};
use crate::cube::{execute_on_grouping_set, GroupingSet};
use crate::error::{Error, Result};
use crate::executor::{execute_count, execute_count_indexed, IndexSet};
use crate::querylang::{render_query, RenderTarget, Workload};
use crate::rewriter::{route_and_rewrite, RoutedWorkload};
use crate::storage::{Catalog, ContextKey, Relation};
use crate::workloadgen::generate_workload;

use super::config::{Mode, RunConfig, RunOptions, WorkloadSource};
use super::report::{BenchReport, GroupingSetReport, LabeledExample, ModeReport};
use super::{mean, timed};

/// Everything a training-phase run produces.
#[derive(Debug, Clone)]
pub struct TrainingOutput {
    pub workload: Workload,
    pub plan: AnalysisPlan,
    pub routed: RoutedWorkload,
    pub examples: Vec<LabeledExample>,
    pub report: BenchReport,
}

/// Loads the catalog and workload named by `config`, then runs
/// [`run_pipeline`]. Optional plan and routed-workload exports are written.
pub fn run_training_phase(config: &RunConfig) -> Result<TrainingOutput> {
    let catalog = Catalog::load(&config.schema, &config.data)?;
    let workload = match &config.workload {
        WorkloadSource::File(path) => Workload::read(path)?,
        WorkloadSource::Generate(gen) => generate_workload(gen, &catalog)?,
    };
    let out = run_pipeline(&catalog, &workload, &config.options)?;
    if let Some(path) = &config.out_plan {
        std::fs::write(path, out.plan.to_json()?)
            .map_err(|e| Error::io(format!("writing plan {}", path.display()), e))?;
    }
    if let Some(path) = &config.out_routed {
        out.routed.write(path)?;
    }
    Ok(out)
}

struct Timings {
    cards: Vec<u64>,
    construction: Vec<u64>,
    execution: Vec<u64>,
    bytes: u64,
}

fn run_queries<F>(n: usize, parallel: bool, f: F) -> Result<Vec<u64>>
where
    F: Fn(usize) -> Result<u64> + Sync + Send,
{
    if parallel {
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}

/// Repeats `rep` and checks that every repetition yields the same answers.
fn repeat<F>(mode: Mode, reps: u32, mut rep: F) -> Result<Timings>
where
    F: FnMut() -> Result<(Vec<u64>, u64, u64, u64)>,
{
    let mut t = Timings {
        cards: Vec::new(),
        construction: Vec::new(),
        execution: Vec::new(),
        bytes: 0,
    };
    for r in 0..reps {
        let (cards, cons, exec, bytes) = rep()?;
        if r == 0 {
            t.cards = cards;
        } else if let Some(i) = (0..cards.len()).find(|&i| cards[i] != t.cards[i]) {
            return Err(Error::ModeDisagreement {
                query_index: i,
                detail: format!("{mode} returned {} then {} across repetitions", t.cards[i], cards[i]),
            });
        }
        t.construction.push(cons);
        t.execution.push(exec);
        t.bytes = bytes;
    }
    Ok(t)
}

/// Analyzes, routes and executes `workload` in every selected mode, checks
/// that all modes agree, and labels each query with its true cardinality.
pub fn run_pipeline(catalog: &Catalog, workload: &Workload, options: &RunOptions) -> Result<TrainingOutput> {
    options.validate()?;
    let config = AnalyzerConfig {
        routing: options.routing,
        ..Default::default()
    };
    let plan = analyze(workload, catalog, config)?;
    let routed = route_and_rewrite(workload, &plan)?;

    // materialize every context once so that join cost stays out of the timings
    let mut contexts: HashMap<ContextKey, Arc<Relation>> = HashMap::new();
    let mut query_ctx = Vec::with_capacity(workload.len());
    for q in &workload.queries {
        let key = catalog.context_key(&q.relation_set(), &q.joins)?;
        if !contexts.contains_key(&key) {
            contexts.insert(key.clone(), catalog.context(&key)?);
        }
        query_ctx.push(key);
    }
    let ctx_of = |i: usize| contexts[&query_ctx[i]].as_ref();
    let n = routed.len();
    let parallel = options.parallel;
    let reps = options.repetitions;

    let mut results: Vec<(Mode, Timings)> = Vec::new();
    let mut built_stats: HashMap<String, (u64, u64)> = HashMap::new();
    for &mode in &options.modes {
        let timings = match mode {
            Mode::Base => repeat(mode, reps, || {
                let (cards, exec) =
                    timed(|| run_queries(n, parallel, |i| execute_count(ctx_of(i), &routed.entries[i].normalized.predicates)));
                Ok((cards?, 0, exec, 0))
            })?,
            Mode::BaseIndexed => {
                let mut attrs: HashMap<&ContextKey, BTreeSet<&str>> = HashMap::new();
                for (i, e) in routed.entries.iter().enumerate() {
                    attrs
                        .entry(&query_ctx[i])
                        .or_default()
                        .extend(e.normalized.predicates.iter().map(|p| p.attribute.as_str()));
                }
                repeat(mode, reps, || {
                    let (indexes, cons) = timed(|| {
                        attrs
                            .iter()
                            .map(|(k, a)| Ok(((*k).clone(), IndexSet::build(&contexts[*k], a.iter())?)))
                            .collect::<Result<HashMap<ContextKey, IndexSet>>>()
                    });
                    let indexes = indexes?;
                    let bytes = indexes.values().map(|s| s.payload_bytes() as u64).sum();
                    let (cards, exec) = timed(|| {
                        run_queries(n, parallel, |i| {
                            let preds = &routed.entries[i].normalized.predicates;
                            match indexes.get(&query_ctx[i]) {
                                Some(idx) => execute_count_indexed(ctx_of(i), preds, idx),
                                None => execute_count(ctx_of(i), preds),
                            }
                        })
                    });
                    Ok((cards?, cons, exec, bytes))
                })?
            }
            Mode::GroupingSet => repeat(mode, reps, || {
                let (sets, cons) = timed(|| build_grouping_sets(&plan, catalog, parallel));
                let sets = sets?;
                built_stats = sets
                    .iter()
                    .map(|g| (g.name().to_string(), (g.row_count() as u64, g.payload_bytes() as u64)))
                    .collect();
                let bytes = sets.iter().map(|g| g.payload_bytes() as u64).sum();
                let by_name: HashMap<&str, &GroupingSet> = sets.iter().map(|g| (g.name(), g)).collect();
                let (cards, exec) = timed(|| {
                    run_queries(n, parallel, |i| {
                        let e = &routed.entries[i];
                        match &e.target {
                            Target::GroupingSet(name) => {
                                let gs = by_name.get(name.as_str()).ok_or_else(|| {
                                    Error::PlanMismatch(format!("grouping set `{name}` was not built"))
                                })?;
                                execute_on_grouping_set(gs, &e.normalized.predicates)
                            }
                            Target::Base => execute_count(ctx_of(i), &e.normalized.predicates),
                        }
                    })
                });
                Ok((cards?, cons, exec, bytes))
            })?,
        };
        results.push((mode, timings));
    }

    let (ref_mode, reference) = (&results[0].0, &results[0].1.cards);
    for (mode, t) in &results[1..] {
        if let Some(i) = (0..n).find(|&i| t.cards[i] != reference[i]) {
            return Err(Error::ModeDisagreement {
                query_index: i,
                detail: format!("{ref_mode} returned {}, {mode} returned {}", reference[i], t.cards[i]),
            });
        }
    }

    let examples = workload
        .queries
        .iter()
        .zip(reference)
        .map(|(q, &c)| {
            Ok(LabeledExample {
                query: render_query(q, RenderTarget::Base)?,
                cardinality: c,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let base_total = results
        .iter()
        .find(|(m, _)| *m == Mode::Base)
        .map(|(_, t)| mean(&t.execution));
    let modes: Vec<ModeReport> = results
        .iter()
        .map(|(mode, t)| ModeReport::new(*mode, &t.execution, &t.construction, t.bytes, base_total))
        .collect();
    let grouping_sets = plan
        .built
        .iter()
        .map(|p| GroupingSetReport::from_plan(p, built_stats.get(&p.name).copied()))
        .collect();
    let report = BenchReport::new(workload.len(), reps, modes, &routed, grouping_sets);

    Ok(TrainingOutput {
        workload: workload.clone(),
        plan,
        routed,
        examples,
        report,
    })
}
