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

//! Rewrites routed queries to `SUM(cnt)` form against their grouping set;
//! everything else is kept as is and runs on base data.

use std::path::Path;

use crate::analyzer::{AnalysisPlan, Target};
use crate::error::{Error, Result};
use crate::querylang::{render_query, CountQuery, RenderTarget, Workload};

#[derive(Debug, Clone, PartialEq)]
pub struct RoutedEntry {
    pub original: CountQuery,
    /// Query with qualified attributes, as executed.
    pub normalized: CountQuery,
    pub target: Target,
    pub executable: String,
}

/// The final mixed workload, in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct RoutedWorkload {
    pub entries: Vec<RoutedEntry>,
    pub coverage: f64,
}

impl RoutedWorkload {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// One line per entry: `<target>\t<executable query>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            match &e.target {
                Target::GroupingSet(name) => out.push_str(name),
                Target::Base => out.push_str("base"),
            }
            out.push('\t');
            out.push_str(&e.executable);
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())
            .map_err(|e| Error::io(format!("writing routed workload {}", path.display()), e))
    }
}

/// Applies the plan's routing to `workload`. The plan must come from the
/// same workload: query count and query texts are checked.
pub fn route_and_rewrite(workload: &Workload, plan: &AnalysisPlan) -> Result<RoutedWorkload> {
    if plan.routing.len() != workload.len() {
        return Err(Error::PlanMismatch(format!(
            "plan routes {} queries, workload has {}",
            plan.routing.len(),
            workload.len()
        )));
    }
    let mut entries = Vec::with_capacity(workload.len());
    for (i, (q, route)) in workload.queries.iter().zip(&plan.routing).enumerate() {
        let base = render_query(q, RenderTarget::Base)?;
        if route.query != i || route.text != base {
            return Err(Error::PlanMismatch(format!("query {i} is absent from the plan routing")));
        }
        let executable = match &route.target {
            Target::Base => base,
            Target::GroupingSet(name) => {
                let gs = plan
                    .grouping_set(name)
                    .ok_or_else(|| Error::PlanMismatch(format!("unknown grouping set `{name}`")))?;
                render_query(
                    &route.normalized,
                    RenderTarget::GroupingSet {
                        name,
                        dimensions: &gs.attributes,
                    },
                )?
            }
        };
        entries.push(RoutedEntry {
            original: q.clone(),
            normalized: route.normalized.clone(),
            target: route.target.clone(),
            executable,
        });
    }
    let covered = entries.iter().filter(|e| e.target != Target::Base).count();
    Ok(RoutedWorkload {
        coverage: if entries.is_empty() { 0.0 } else { covered as f64 / entries.len() as f64 },
        entries,
    })
}
