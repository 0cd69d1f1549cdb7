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

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::executor::execute_count;
use crate::querylang::{CountQuery, Operator, Predicate, Workload, WorkloadMeta};
use crate::storage::{Catalog, JoinPair, Relation};

fn default_operators() -> Vec<Operator> {
    Operator::ALL.to_vec()
}

fn default_true() -> bool {
    true
}

fn default_attempts() -> u32 {
    100
}

/// Workload sampling parameters for one model context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    /// Relations of the context.
    pub relations: Vec<String>,
    /// Join conditions; empty means the catalog's declared joins.
    #[serde(default)]
    pub joins: Vec<JoinPair>,
    /// Attributes predicates may use; defaults to every context column.
    #[serde(default)]
    pub attributes: Option<Vec<String>>,
    pub query_count: usize,
    pub max_predicates: usize,
    #[serde(default = "default_operators")]
    pub operators: Vec<Operator>,
    pub seed: u64,
    #[serde(default = "default_true")]
    pub zero_tuple_filter: bool,
    #[serde(default = "default_attempts")]
    pub max_resample_attempts: u32,
}

impl GeneratorConfig {
    pub fn new(relations: &[&str], query_count: usize, max_predicates: usize, seed: u64) -> Self {
        GeneratorConfig {
            relations: relations.iter().map(|s| s.to_string()).collect(),
            joins: Vec::new(),
            attributes: None,
            query_count,
            max_predicates,
            operators: default_operators(),
            seed,
            zero_tuple_filter: true,
            max_resample_attempts: default_attempts(),
        }
    }
}

/// Generator-side tallies, for cross-checking profiles.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct GenerationStats {
    /// Predicate counts of accepted queries.
    pub predicate_count_draws: BTreeMap<usize, usize>,
    pub rejections: u64,
}

/// Samples a workload over the context described by `config`.
pub fn generate_workload(config: &GeneratorConfig, catalog: &Catalog) -> Result<Workload> {
    generate_workload_with_stats(config, catalog).map(|(w, _)| w)
}

pub fn generate_workload_with_stats(config: &GeneratorConfig, catalog: &Catalog) -> Result<(Workload, GenerationStats)> {
    let rels: BTreeSet<String> = config.relations.iter().cloned().collect();
    if rels.is_empty() {
        return Err(Error::Config("context has no relations".into()));
    }
    let key = catalog.context_key(&rels, &config.joins)?;
    let ctx = catalog.context(&key)?;
    sample_workload(&ctx, &key.relations, &key.joins, config)
}

/// Samples queries against an already materialized context relation.
/// `relations`/`joins` become the FROM list and join conditions of every
/// query.
pub fn sample_workload(
    ctx: &Relation,
    relations: &[String],
    joins: &[JoinPair],
    config: &GeneratorConfig,
) -> Result<(Workload, GenerationStats)> {
    let mut operators = config.operators.clone();
    operators.sort();
    operators.dedup();
    if operators.is_empty() {
        return Err(Error::Config("operator set is empty".into()));
    }
    if config.max_resample_attempts == 0 {
        return Err(Error::Config("max_resample_attempts must be positive".into()));
    }

    // (qualified name, column index) of every attribute with at least one value
    let candidates: Vec<usize> = match &config.attributes {
        Some(list) => list
            .iter()
            .map(|a| ctx.column_index(a).ok_or_else(|| ctx.unknown(a)))
            .collect::<Result<_>>()?,
        None => (0..ctx.columns().len()).collect(),
    };
    let pool: Vec<(String, usize)> = candidates
        .into_iter()
        .filter(|&i| !ctx.columns()[i].dictionary().is_empty())
        .map(|i| {
            let name = ctx.columns()[i].name();
            let q = if name.contains('.') {
                name.to_string()
            } else {
                format!("{}.{name}", ctx.name())
            };
            (q, i)
        })
        .collect();
    if config.max_predicates == 0 || config.max_predicates > pool.len() {
        return Err(Error::Config(format!(
            "max_predicates must be in 1..={} (attributes with values)",
            pool.len()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut stats = GenerationStats::default();
    let mut queries = Vec::with_capacity(config.query_count);
    let mut indices: Vec<usize> = (0..pool.len()).collect();
    let meta = |rejections| WorkloadMeta {
        seed: Some(config.seed),
        context: Some(relations.join(",")),
        zero_tuple_rejections: config.zero_tuple_filter.then_some(rejections),
    };

    for qi in 0..config.query_count {
        let mut attempts = 0u32;
        loop {
            attempts += 1;
            let k = rng.gen_range(1..=config.max_predicates as u64) as usize;
            // partial Fisher-Yates: first k entries become the sample
            for j in 0..k {
                let pick = rng.gen_range(j as u64..indices.len() as u64) as usize;
                indices.swap(j, pick);
            }
            let predicates: Vec<Predicate> = indices[..k]
                .iter()
                .map(|&a| {
                    let (name, col) = &pool[a];
                    let op = operators[rng.gen_range(0..operators.len() as u64) as usize];
                    let dict = ctx.columns()[*col].dictionary();
                    let code = rng.gen_range(0..dict.len() as u64) as u32;
                    Predicate {
                        attribute: name.clone(),
                        op,
                        literal: dict.value(code).expect("code within dictionary"),
                    }
                })
                .collect();

            if config.zero_tuple_filter && execute_count(ctx, &predicates)? == 0 {
                stats.rejections += 1;
                if attempts >= config.max_resample_attempts {
                    return Err(Error::ResampleExhausted {
                        query_index: qi,
                        attempts,
                        generated: queries.len(),
                        partial: Box::new(Workload {
                            queries,
                            meta: meta(stats.rejections),
                        }),
                    });
                }
                continue;
            }
            *stats.predicate_count_draws.entry(k).or_insert(0) += 1;
            queries.push(CountQuery {
                relations: relations.to_vec(),
                joins: joins.to_vec(),
                predicates,
            });
            break;
        }
    }
    Ok((
        Workload {
            queries,
            meta: meta(stats.rejections),
        },
        stats,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::storage::Column;

    fn catalog() -> Catalog {
        let n = 2000i64;
        let t = Relation::new(
            "t",
            vec![
                Column::from_i64("a", &(0..n).map(|i| Some(i % 7)).collect::<Vec<_>>()),
                Column::from_i64("b", &(0..n).map(|i| Some(i % 13)).collect::<Vec<_>>()),
                Column::from_strings("s", &(0..n).map(|i| Some(format!("v{}", i % 5))).collect::<Vec<_>>()),
                Column::from_i64("empty", &vec![None; n as usize]),
            ],
        )
        .unwrap();
        let u = Relation::new(
            "u",
            vec![Column::from_i64("a_ref", &(0..300).map(|i| Some(i % 7)).collect::<Vec<_>>())],
        )
        .unwrap();
        Catalog::new([t, u], vec![JoinPair::new("t.a", "u.a_ref")]).unwrap()
    }

    #[test]
    fn respects_operator_restriction_and_domain() {
        let c = catalog();
        let mut cfg = GeneratorConfig::new(&["t"], 300, 3, 5);
        cfg.operators = vec![Operator::Lt, Operator::Eq, Operator::Gt];
        let w = generate_workload(&cfg, &c).unwrap();
        assert_eq!(w.len(), 300);
        let t = c.relation("t").unwrap();
        for q in &w.queries {
            assert!((1..=3).contains(&q.predicates.len()));
            assert_eq!(q.predicate_attributes().len(), q.predicates.len());
            for p in &q.predicates {
                assert!(cfg.operators.contains(&p.op));
                assert_ne!(p.attribute, "t.empty");
                let dict = t.column(&p.attribute).unwrap().dictionary();
                assert!(dict.find(&p.literal).unwrap().is_some());
            }
        }
    }

    #[test]
    fn filter_rejects_empty_queries() {
        let c = catalog();
        let w = generate_workload(&GeneratorConfig::new(&["t"], 200, 3, 9), &c).unwrap();
        let t = c.relation("t").unwrap();
        for q in &w.queries {
            assert!(execute_count(t, &q.predicates).unwrap() >= 1);
        }
        assert!(w.meta.zero_tuple_rejections.unwrap() > 0);
    }

    #[test]
    fn deterministic_under_seed() {
        let c = catalog();
        let cfg = GeneratorConfig::new(&["t"], 100, 3, 77);
        assert_eq!(generate_workload(&cfg, &c).unwrap(), generate_workload(&cfg, &c).unwrap());
    }

    #[test]
    fn join_context_queries_carry_joins() {
        let c = catalog();
        let w = generate_workload(&GeneratorConfig::new(&["u", "t"], 20, 2, 1), &c).unwrap();
        for q in &w.queries {
            assert_eq!(q.relations, ["t", "u"]);
            assert_eq!(q.joins, vec![JoinPair::new("t.a", "u.a_ref")]);
        }
    }

    #[test]
    fn budget_exhaustion_reports_partial_workload() {
        // a single zero-row context can never produce a non-empty answer
        let e = Relation::new("e", vec![Column::from_i64("x", &[])]).unwrap();
        let z = Relation::new("z", vec![Column::from_i64("x", &[Some(1), Some(2)])]).unwrap();
        let c = Catalog::new([e, z], vec![]).unwrap();
        assert!(matches!(
            generate_workload(&GeneratorConfig::new(&["e"], 5, 1, 1), &c),
            Err(Error::Config(_))
        ));
        let mut cfg = GeneratorConfig::new(&["z"], 50, 1, 2);
        cfg.operators = vec![Operator::Lt];
        cfg.max_resample_attempts = 3;
        match generate_workload(&cfg, &c) {
            Err(Error::ResampleExhausted { partial, generated, .. }) => assert_eq!(partial.len(), generated),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invalid_configs() {
        let c = catalog();
        let mut cfg = GeneratorConfig::new(&["t"], 10, 4, 1);
        assert!(generate_workload(&cfg, &c).is_err());
        cfg.max_predicates = 2;
        cfg.operators.clear();
        assert!(generate_workload(&cfg, &c).is_err());
        cfg.operators = vec![Operator::Eq];
        cfg.attributes = Some(vec!["t.nope".into()]);
        assert!(generate_workload(&cfg, &c).is_err());
    }
}
