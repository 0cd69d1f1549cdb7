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

//! Finds beneficial grouping sets for a workload.
//!
//! 1. Collect, per model context (relation set plus join conditions), the
//!    union of predicate attributes used by its queries.
//! 2. Take N as the largest base-table row count of the context and the
//!    exact distinct count of every collected attribute.
//! 3. Keep all attributes if the scaling factor is below one, otherwise trim
//!    until it is (possibly to nothing), then route every query.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::{build_grouping_set, scaling_factor, GroupingSet, ScalingFactor};
use crate::error::{Error, Result};
use crate::querylang::{grouping_set_name, render_query, CountQuery, RenderTarget, Workload};
use crate::storage::{Catalog, ContextKey, JoinPair, Relation};

/// Which queries may use a grouping set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoutingMode {
    /// Predicate attributes are a subset of the grouping-set attributes.
    #[default]
    Subset,
    /// Predicate attributes equal the grouping-set attributes.
    Equality,
}

/// How attributes are dropped when a candidate is not beneficial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrimPolicy {
    /// Drop the attribute with the most distinct values; ties drop the
    /// name that sorts first.
    #[default]
    DropLargestDistinctFirst,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzerConfig {
    #[serde(default)]
    pub routing: RoutingMode,
    #[serde(default)]
    pub trim: TrimPolicy,
}

/// Removes attributes under `policy` until the scaling factor is below one.
/// Returns the surviving attributes in input order; empty means no
/// grouping set should be built.
pub fn trim_attributes(attributes: &[String], distinct_counts: &[u64], n: u64, policy: TrimPolicy) -> Vec<String> {
    debug_assert_eq!(attributes.len(), distinct_counts.len());
    let mut keep: Vec<usize> = (0..attributes.len()).collect();
    loop {
        let dv: Vec<u64> = keep.iter().map(|&i| distinct_counts[i]).collect();
        if keep.is_empty() || scaling_factor(n, &dv).is_beneficial() {
            break;
        }
        let victim = match policy {
            TrimPolicy::DropLargestDistinctFirst => keep
                .iter()
                .enumerate()
                .max_by(|(_, &a), (_, &b)| {
                    distinct_counts[a]
                        .cmp(&distinct_counts[b])
                        .then_with(|| attributes[b].cmp(&attributes[a]))
                })
                .map(|(pos, _)| pos)
                .expect("non-empty"),
        };
        keep.remove(victim);
    }
    keep.into_iter().map(|i| attributes[i].clone()).collect()
}

/// Attributes collected for one context.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub relations: Vec<String>,
    pub joins: Vec<JoinPair>,
    pub attributes: Vec<String>,
    pub query_count: usize,
}

/// A grouping set the analyzer decided to construct.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlannedGroupingSet {
    pub name: String,
    pub relations: Vec<String>,
    pub joins: Vec<JoinPair>,
    pub attributes: Vec<String>,
    pub dropped: Vec<String>,
    pub distinct_counts: Vec<u64>,
    /// N used by the criterion: the largest base-table row count.
    pub criterion_n: u64,
    /// Actual row count of the materialized context.
    pub join_cardinality: u64,
    pub scaling_factor: ScalingFactor,
    /// Join cardinality and criterion N differ by more than 10x.
    pub n_diverges: bool,
}

impl PlannedGroupingSet {
    fn context_key(&self) -> ContextKey {
        ContextKey {
            relations: self.relations.clone(),
            joins: self.joins.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "target", content = "name")]
pub enum Target {
    GroupingSet(String),
    Base,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RouteReason {
    Covered,
    /// The context's queries carry no predicates.
    NoCandidateAttributes,
    /// Every attribute of the context was trimmed.
    AllAttributesTrimmed,
    /// The query uses attributes the grouping set does not have.
    Uncovered { missing: Vec<String> },
    /// Equality routing and the attribute sets differ.
    NotEqual,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Route {
    pub query: usize,
    /// Base rendering of the original query, used to match plan and workload.
    pub text: String,
    /// The query with every attribute qualified as `relation.column`.
    #[serde(skip)]
    pub normalized: CountQuery,
    #[serde(flatten)]
    pub target: Target,
    pub reason: RouteReason,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageSummary {
    pub routed_to_grouping_sets: usize,
    pub routed_to_base: usize,
    pub total: usize,
    pub fraction: f64,
}

/// Output of [`analyze`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisPlan {
    pub config: AnalyzerConfig,
    pub candidates: Vec<Candidate>,
    pub built: Vec<PlannedGroupingSet>,
    pub routing: Vec<Route>,
    pub coverage: CoverageSummary,
}

impl AnalysisPlan {
    pub fn coverage(&self) -> f64 {
        self.coverage.fraction
    }

    pub fn grouping_set(&self, name: &str) -> Option<&PlannedGroupingSet> {
        self.built.iter().find(|b| b.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn canonical_attribute(ctx: &Relation, attribute: &str) -> Result<String> {
    let col = ctx.column(attribute)?;
    Ok(if col.name().contains('.') {
        col.name().to_string()
    } else {
        format!("{}.{}", ctx.name(), col.name())
    })
}

fn base_distinct_count(catalog: &Catalog, attribute: &str) -> Result<u64> {
    let (rel, col) = attribute
        .split_once('.')
        .ok_or_else(|| Error::InvalidQuery(format!("attribute `{attribute}` is not qualified")))?;
    Ok(catalog.relation(rel)?.column_stats(col)?.distinct_count)
}

/// Runs the analysis: candidate collection, criterion, trimming, routing.
/// Grouping sets are constructed separately by [`build_grouping_sets`].
pub fn analyze(workload: &Workload, catalog: &Catalog, config: AnalyzerConfig) -> Result<AnalysisPlan> {
    // collect candidate attributes per context
    let mut keys = Vec::with_capacity(workload.len());
    let mut normalized = Vec::with_capacity(workload.len());
    let mut collected: BTreeMap<ContextKey, (BTreeSet<String>, usize)> = BTreeMap::new();
    let mut first_seen: Vec<ContextKey> = Vec::new();
    for q in &workload.queries {
        if q.relations.is_empty() {
            return Err(Error::InvalidQuery("query has no relations".into()));
        }
        let key = catalog.context_key(&q.relation_set(), &q.joins)?;
        let ctx = catalog.context(&key)?;
        let mut nq = q.clone();
        for p in &mut nq.predicates {
            p.attribute = canonical_attribute(&ctx, &p.attribute)?;
        }
        let entry = collected.entry(key.clone()).or_insert_with(|| {
            first_seen.push(key.clone());
            (BTreeSet::new(), 0)
        });
        entry.0.extend(nq.predicates.iter().map(|p| p.attribute.clone()));
        entry.1 += 1;
        keys.push(key);
        normalized.push(nq);
    }

    // criterion and trimming, in first-seen order
    let mut names: BTreeMap<String, usize> = BTreeMap::new();
    let mut candidates = Vec::new();
    let mut built = Vec::new();
    let mut outcome: BTreeMap<ContextKey, std::result::Result<usize, RouteReason>> = BTreeMap::new();
    for key in &first_seen {
        let (attrs, query_count) = &collected[key];
        let attributes: Vec<String> = attrs.iter().cloned().collect();
        candidates.push(Candidate {
            relations: key.relations.clone(),
            joins: key.joins.clone(),
            attributes: attributes.clone(),
            query_count: *query_count,
        });
        if attributes.is_empty() {
            outcome.insert(key.clone(), Err(RouteReason::NoCandidateAttributes));
            continue;
        }
        let criterion_n = key
            .relations
            .iter()
            .map(|r| catalog.relation(r).map(|r| r.row_count() as u64))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .max()
            .unwrap_or(0);
        let dv = attributes
            .iter()
            .map(|a| base_distinct_count(catalog, a))
            .collect::<Result<Vec<_>>>()?;
        let kept = if scaling_factor(criterion_n, &dv).is_beneficial() {
            attributes.clone()
        } else {
            trim_attributes(&attributes, &dv, criterion_n, config.trim)
        };
        if kept.is_empty() {
            outcome.insert(key.clone(), Err(RouteReason::AllAttributesTrimmed));
            continue;
        }
        let kept_dv: Vec<u64> = kept
            .iter()
            .map(|a| dv[attributes.iter().position(|x| x == a).expect("kept attribute")])
            .collect();
        let join_cardinality = catalog.context(key)?.row_count() as u64;
        let n_diverges = {
            let (a, b) = (criterion_n.max(1) as f64, join_cardinality.max(1) as f64);
            a / b > 10.0 || b / a > 10.0
        };
        let base = grouping_set_name(&key.relations);
        let seen = names.entry(base.clone()).or_insert(0);
        *seen += 1;
        let name = if *seen == 1 { base } else { format!("{base}_{seen}") };
        outcome.insert(key.clone(), Ok(built.len()));
        built.push(PlannedGroupingSet {
            name,
            relations: key.relations.clone(),
            joins: key.joins.clone(),
            dropped: attributes.iter().filter(|a| !kept.contains(a)).cloned().collect(),
            scaling_factor: scaling_factor(criterion_n, &kept_dv),
            attributes: kept,
            distinct_counts: kept_dv,
            criterion_n,
            join_cardinality,
            n_diverges,
        });
    }

    // routing
    let mut routing = Vec::with_capacity(workload.len());
    for (i, (q, (key, nq))) in workload.queries.iter().zip(keys.iter().zip(normalized)).enumerate() {
        let text = render_query(q, RenderTarget::Base)?;
        let (target, reason) = match &outcome[key] {
            Err(reason) => (Target::Base, reason.clone()),
            Ok(idx) => {
                let gs = &built[*idx];
                let attrs = nq.predicate_attributes();
                let missing: Vec<String> = attrs.iter().filter(|a| !gs.attributes.contains(a)).cloned().collect();
                if !missing.is_empty() {
                    (Target::Base, RouteReason::Uncovered { missing })
                } else if config.routing == RoutingMode::Equality && attrs.len() != gs.attributes.len() {
                    (Target::Base, RouteReason::NotEqual)
                } else {
                    (Target::GroupingSet(gs.name.clone()), RouteReason::Covered)
                }
            }
        };
        routing.push(Route {
            query: i,
            text,
            normalized: nq,
            target,
            reason,
        });
    }

    let to_gs = routing.iter().filter(|r| r.target != Target::Base).count();
    let total = routing.len();
    Ok(AnalysisPlan {
        config,
        candidates,
        built,
        coverage: CoverageSummary {
            routed_to_grouping_sets: to_gs,
            routed_to_base: total - to_gs,
            total,
            fraction: if total == 0 { 0.0 } else { to_gs as f64 / total as f64 },
        },
        routing,
    })
}

/// Constructs every planned grouping set over its materialized context.
pub fn build_grouping_sets(plan: &AnalysisPlan, catalog: &Catalog, parallel: bool) -> Result<Vec<GroupingSet>> {
    let build = |p: &PlannedGroupingSet| -> Result<GroupingSet> {
        let ctx = catalog.context(&p.context_key())?;
        Ok(build_grouping_set(&ctx, &p.attributes)?.with_name(p.name.clone()))
    };
    if parallel {
        plan.built.par_iter().map(build).collect()
    } else {
        plan.built.iter().map(build).collect()
    }
}
