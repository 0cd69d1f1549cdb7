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

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;
use std::sync::{Arc, Mutex};

use super::ingest::{load_csv, SchemaDescriptor};
use super::join::{materialize_join, JoinPair, JoinSpec};
use super::Relation;
use crate::error::{Error, Result};

/// Identity of a model context: sorted relation names plus normalized join
/// conditions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContextKey {
    pub relations: Vec<String>,
    pub joins: Vec<JoinPair>,
}

/// Base relations, declared join edges, and a cache of materialized joins.
#[derive(Debug, Default)]
pub struct Catalog {
    relations: BTreeMap<String, Arc<Relation>>,
    joins: Vec<JoinPair>,
    contexts: Mutex<HashMap<ContextKey, Arc<Relation>>>,
}

impl Catalog {
    pub fn new(relations: impl IntoIterator<Item = Relation>, joins: Vec<JoinPair>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for r in relations {
            let name = r.name().to_string();
            if map.insert(name.clone(), Arc::new(r)).is_some() {
                return Err(Error::Schema(format!("relation `{name}` defined twice")));
            }
        }
        let catalog = Catalog {
            relations: map,
            joins: joins.iter().map(JoinPair::normalized).collect(),
            contexts: Mutex::default(),
        };
        for j in &catalog.joins {
            let (l, r) = j
                .relations()
                .ok_or_else(|| Error::Schema(format!("join {} = {} is not qualified", j.left, j.right)))?;
            catalog.relation(l)?;
            catalog.relation(r)?;
        }
        Ok(catalog)
    }

    /// Loads `<data_dir>/<name>.csv` for every descriptor in the schema file.
    pub fn load(schema_path: &Path, data_dir: &Path) -> Result<Self> {
        let descriptors = SchemaDescriptor::read_all(schema_path)?;
        let mut relations = Vec::with_capacity(descriptors.len());
        let mut joins = Vec::new();
        for d in &descriptors {
            relations.push(load_csv(&data_dir.join(format!("{}.csv", d.name)), d)?);
            joins.extend(d.joins.iter().cloned());
        }
        Self::new(relations, joins)
    }

    pub fn relation(&self, name: &str) -> Result<&Arc<Relation>> {
        self.relations
            .get(name)
            .ok_or_else(|| Error::UnknownRelation(name.to_string()))
    }

    pub fn relations(&self) -> impl Iterator<Item = &Arc<Relation>> {
        self.relations.values()
    }

    pub fn joins(&self) -> &[JoinPair] {
        &self.joins
    }

    /// Normalizes a context: with no explicit joins, a multi-relation context
    /// uses the declared join edges among its relations.
    pub fn context_key(&self, relations: &BTreeSet<String>, joins: &[JoinPair]) -> Result<ContextKey> {
        for r in relations {
            self.relation(r)?;
        }
        let mut joins: Vec<JoinPair> = if joins.is_empty() && relations.len() > 1 {
            self.joins
                .iter()
                .filter(|j| {
                    j.relations()
                        .is_some_and(|(l, r)| relations.contains(l) && relations.contains(r))
                })
                .cloned()
                .collect()
        } else {
            joins.iter().map(JoinPair::normalized).collect()
        };
        joins.sort();
        joins.dedup();
        Ok(ContextKey {
            relations: relations.iter().cloned().collect(),
            joins,
        })
    }

    /// Returns the relation a context denotes, materializing (and caching)
    /// the join when the context spans several relations.
    pub fn context(&self, key: &ContextKey) -> Result<Arc<Relation>> {
        if key.relations.len() == 1 && key.joins.is_empty() {
            return self.relation(&key.relations[0]).cloned();
        }
        if let Some(r) = self.contexts.lock().expect("context cache poisoned").get(key) {
            return Ok(Arc::clone(r));
        }
        let rels = key
            .relations
            .iter()
            .map(|n| self.relation(n).map(Arc::as_ref))
            .collect::<Result<Vec<_>>>()?;
        let joined = Arc::new(materialize_join(
            &rels,
            &JoinSpec {
                relations: key.relations.clone(),
                conditions: key.joins.clone(),
            },
        )?);
        self.contexts
            .lock()
            .expect("context cache poisoned")
            .insert(key.clone(), Arc::clone(&joined));
        Ok(joined)
    }
}
