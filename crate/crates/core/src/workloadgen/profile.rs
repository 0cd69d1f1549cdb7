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

use std::collections::BTreeMap;

use serde::Serialize;

use crate::querylang::{Operator, Workload};

/// Shape statistics of a workload.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorkloadProfile {
    pub query_count: usize,
    /// tables per query → number of queries
    pub table_counts: BTreeMap<usize, usize>,
    /// predicates per query → number of queries
    pub predicate_counts: BTreeMap<usize, usize>,
    pub operator_counts: BTreeMap<Operator, usize>,
    pub total_predicates: usize,
    pub zero_tuple_rejections: u64,
}

pub fn profile_workload(workload: &Workload) -> WorkloadProfile {
    let mut operator_counts: BTreeMap<Operator, usize> = Operator::ALL.iter().map(|&op| (op, 0)).collect();
    let mut table_counts = BTreeMap::new();
    let mut predicate_counts = BTreeMap::new();
    let mut total_predicates = 0;
    for q in &workload.queries {
        *table_counts.entry(q.table_count()).or_insert(0) += 1;
        *predicate_counts.entry(q.predicates.len()).or_insert(0) += 1;
        for p in &q.predicates {
            *operator_counts.get_mut(&p.op).expect("all operators present") += 1;
        }
        total_predicates += q.predicates.len();
    }
    WorkloadProfile {
        query_count: workload.len(),
        table_counts,
        predicate_counts,
        operator_counts,
        total_predicates,
        zero_tuple_rejections: workload.meta.zero_tuple_rejections.unwrap_or(0),
    }
}
