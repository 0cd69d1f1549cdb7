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

mod common;

use preagg_core::harness::{run_pipeline, Mode, RunOptions};
use preagg_core::querylang::{parse_query, CountQuery, Workload};
use preagg_core::storage::{Catalog, Column, JoinPair, Relation, Value};
use preagg_core::workloadgen::{generate_workload, GeneratorConfig};

use common::holds;

fn catalog() -> Catalog {
    let kinds = ["movie", "tv", "short", "video", "episode"];
    let ids: Vec<Option<i64>> = (0..100).map(Some).collect();
    let kind: Vec<Option<String>> = (0..100).map(|i| Some(kinds[i % 5].to_string())).collect();
    let year: Vec<Option<i64>> = (0..100).map(|i| if i % 11 == 0 { None } else { Some(1990 + (i * 7) % 12) }).collect();
    let title = Relation::new(
        "title",
        vec![Column::from_i64("id", &ids), Column::from_strings("kind", &kind), Column::from_i64("year", &year)],
    )
    .unwrap();
    let roles = ["actor", "actress", "director", "writer"];
    let movie: Vec<Option<i64>> = (0..300).map(|i| if i % 17 == 0 { None } else { Some((i * 13) % 110) }).collect();
    let role: Vec<Option<String>> = (0..300).map(|i| Some(roles[i % 4].to_string())).collect();
    let cast = Relation::new("cast_info", vec![Column::from_i64("movie_id", &movie), Column::from_strings("role", &role)])
        .unwrap();
    Catalog::new([title, cast], vec![JoinPair::new("cast_info.movie_id", "title.id")]).unwrap()
}

/// Nested-loop evaluation of a query over base relations.
fn nested_loop_count(catalog: &Catalog, q: &CountQuery) -> u64 {
    let rels: Vec<&Relation> = q.relations.iter().map(|r| catalog.relation(r).unwrap().as_ref()).collect();
    let value = |rows: &[usize], attr: &str| -> Option<Value> {
        let (rel, col) = attr.split_once('.').unwrap();
        let i = q.relations.iter().position(|r| r == rel).unwrap();
        rels[i].column(col).unwrap().value_at(rows[i])
    };
    let mut count = 0;
    let mut rows = vec![0usize; rels.len()];
    loop {
        let joined = q.joins.iter().all(|j| match (value(&rows, &j.left), value(&rows, &j.right)) {
            (Some(a), Some(b)) => holds(Some(&a), preagg_core::querylang::Operator::Eq, &b),
            _ => false,
        });
        if joined && q.predicates.iter().all(|p| holds(value(&rows, &p.attribute).as_ref(), p.op, &p.literal)) {
            count += 1;
        }
        // odometer over row combinations
        let mut k = 0;
        loop {
            if k == rels.len() {
                return count;
            }
            rows[k] += 1;
            if rows[k] < rels[k].row_count() {
                break;
            }
            rows[k] = 0;
            k += 1;
        }
    }
}

fn join_workload(seed: u64, n: usize) -> Workload {
    let mut gen = GeneratorConfig::new(&["title", "cast_info"], n, 3, seed);
    gen.attributes = Some(vec!["title.kind".into(), "title.year".into(), "cast_info.role".into()]);
    generate_workload(&gen, &catalog()).unwrap()
}

#[test]
fn labeled_examples_match_nested_loop_join() {
    let cat = catalog();
    let workload = join_workload(21, 40);
    let out = run_pipeline(&cat, &workload, &RunOptions { repetitions: 1, ..Default::default() }).unwrap();
    assert_eq!(out.report.coverage, 1.0);
    assert_eq!(out.examples.len(), 40);
    for (q, ex) in workload.queries.iter().zip(&out.examples) {
        let reparsed = parse_query(&ex.query).unwrap();
        assert_eq!(&reparsed, q);
        assert_eq!(ex.cardinality, nested_loop_count(&cat, q), "{}", ex.query);
        assert!(ex.cardinality > 0);
    }
}

#[test]
fn parallel_run_matches_sequential() {
    let cat = catalog();
    let workload = join_workload(3, 50);
    let seq = run_pipeline(&cat, &workload, &RunOptions { repetitions: 1, ..Default::default() }).unwrap();
    let par = run_pipeline(
        &cat,
        &workload,
        &RunOptions {
            repetitions: 2,
            parallel: true,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(seq.examples, par.examples);
    assert_eq!(seq.routed, par.routed);
}

#[test]
fn key_only_context_builds_nothing() {
    let ids: Vec<Option<i64>> = (0..500).map(Some).collect();
    let cat = Catalog::new([Relation::new("k", vec![Column::from_i64("id", &ids)]).unwrap()], vec![]).unwrap();
    let workload = generate_workload(&GeneratorConfig::new(&["k"], 30, 1, 8), &cat).unwrap();
    let out = run_pipeline(&cat, &workload, &RunOptions { repetitions: 1, ..Default::default() }).unwrap();
    assert!(out.plan.built.is_empty());
    assert_eq!(out.report.coverage, 0.0);
    assert_eq!(out.report.routed_to_base, 30);
    let gs = out.report.mode(Mode::GroupingSet).unwrap();
    assert_eq!(gs.bytes, 0);
}

#[test]
fn report_speedups_recompute_from_raw_times() {
    let cat = catalog();
    let out = run_pipeline(&cat, &join_workload(5, 30), &RunOptions::default()).unwrap();
    let base = out.report.mode(Mode::Base).unwrap().execution_ns;
    for m in &out.report.modes {
        assert_eq!(m.raw_execution_ns.len(), 3);
        let mean = |v: &[u64]| v.iter().sum::<u64>() / v.len() as u64;
        assert_eq!(m.execution_ns, mean(&m.raw_execution_ns));
        assert_eq!(m.construction_ns, mean(&m.raw_construction_ns));
        assert_eq!(m.speedup, Some(base as f64 / (m.execution_ns + m.construction_ns) as f64));
    }
    let gs = &out.report.grouping_sets[0];
    assert!(gs.scaling_factor.unwrap() < 1.0);
    assert!(gs.actual_rows.unwrap() <= gs.join_cardinality);
    assert_eq!(out.report.coverage, out.routed.coverage);
}

#[test]
fn empty_mode_set_is_rejected() {
    let cat = catalog();
    let opts = RunOptions {
        modes: Default::default(),
        ..Default::default()
    };
    assert!(run_pipeline(&cat, &join_workload(1, 5), &opts).is_err());
}
