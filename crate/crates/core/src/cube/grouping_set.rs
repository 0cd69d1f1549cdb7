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

use std::collections::HashMap;
use std::io::{Read, Write};
use std::sync::Arc;

use serde::Serialize;

use super::scaling::{scaling_factor, ScalingFactor};
use crate::error::{Error, Result};
use crate::executor::{bind_all, scan_count, CodeRange};
use crate::querylang::{grouping_set_name, Predicate};
use crate::storage::{Column, LogicalType, Relation, Value, NULL_CODE};

/// What a grouping set aggregates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupingSetSpec {
    /// Sorted names of the relations the source was built from.
    pub signature: Vec<String>,
    /// Sorted, qualified dimension names.
    pub attributes: Vec<String>,
    /// Source row count.
    pub n: u64,
    pub distinct_counts: Vec<u64>,
}

/// COUNT(*) grouped by every listed attribute at once.
///
/// Stored columnar: one dimension column per attribute (codes share the
/// source dictionaries) plus a count per row. Rows are sorted by key tuple
/// with NULL last in each dimension.
#[derive(Debug, Clone)]
pub struct GroupingSet {
    name: String,
    spec: GroupingSetSpec,
    keys: Relation,
    counts: Vec<u64>,
    scaling_factor: ScalingFactor,
}

fn canonical_name(relation: &Relation, column: &Column) -> String {
    if column.name().contains('.') {
        column.name().to_string()
    } else {
        format!("{}.{}", relation.name(), column.name())
    }
}

fn signature_of(relation: &Relation) -> Vec<String> {
    let mut sig: Vec<String> = relation
        .column_names()
        .filter_map(|c| c.split_once('.').map(|(r, _)| r.to_string()))
        .collect();
    if sig.is_empty() {
        sig.push(relation.name().to_string());
    }
    sig.sort();
    sig.dedup();
    sig
}

/// Builds the grouping set of `relation` over `attributes` in one pass with
/// a key-tuple → counter map.
pub fn build_grouping_set<S: AsRef<str>>(relation: &Relation, attributes: &[S]) -> Result<GroupingSet> {
    if attributes.is_empty() {
        return Err(Error::GroupingSet("attribute list is empty".into()));
    }
    let mut dims: Vec<(String, &Column)> = Vec::with_capacity(attributes.len());
    for a in attributes {
        let col = relation.column(a.as_ref())?;
        dims.push((canonical_name(relation, col), col));
    }
    dims.sort_by(|a, b| a.0.cmp(&b.0));
    if let Some(w) = dims.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::GroupingSet(format!("attribute `{}` listed twice", w[0].0)));
    }

    let n = relation.row_count();
    // NULL is packed as the largest digit of its dimension.
    let radices: Vec<u64> = dims.iter().map(|(_, c)| c.dictionary().len() as u64 + 1).collect();
    let packed_fits = radices
        .iter()
        .try_fold(1u64, |acc, &r| acc.checked_mul(r))
        .is_some();

    let key_codes: Vec<Vec<u32>>;
    let counts: Vec<u64>;
    if packed_fits {
        let mut groups: HashMap<u64, u64> = HashMap::new();
        let cols: Vec<&[u32]> = dims.iter().map(|(_, c)| c.codes()).collect();
        for row in 0..n {
            let mut key = 0u64;
            for (codes, &radix) in cols.iter().zip(&radices) {
                let c = codes[row];
                let digit = if c == NULL_CODE { radix - 1 } else { u64::from(c) };
                key = key * radix + digit;
            }
            *groups.entry(key).or_insert(0) += 1;
        }
        let mut entries: Vec<(u64, u64)> = groups.into_iter().collect();
        entries.sort_unstable_by_key(|e| e.0);
        let mut kc = vec![Vec::with_capacity(entries.len()); dims.len()];
        for &(mut key, _) in &entries {
            for d in (0..dims.len()).rev() {
                let digit = key % radices[d];
                key /= radices[d];
                kc[d].push(if digit == radices[d] - 1 { NULL_CODE } else { digit as u32 });
            }
        }
        key_codes = kc;
        counts = entries.into_iter().map(|e| e.1).collect();
    } else {
        let mut groups: HashMap<Vec<u32>, u64> = HashMap::new();
        for row in 0..n {
            let key: Vec<u32> = dims.iter().map(|(_, c)| c.codes()[row]).collect();
            *groups.entry(key).or_insert(0) += 1;
        }
        let mut entries: Vec<(Vec<u32>, u64)> = groups.into_iter().collect();
        entries.sort_unstable();
        let mut kc = vec![Vec::with_capacity(entries.len()); dims.len()];
        for (key, _) in &entries {
            for (d, &c) in key.iter().enumerate() {
                kc[d].push(c);
            }
        }
        key_codes = kc;
        counts = entries.into_iter().map(|e| e.1).collect();
    }

    let columns = dims
        .iter()
        .zip(key_codes)
        .map(|((name, col), codes)| Column::from_parts(name.clone(), codes, Arc::clone(col.dictionary())))
        .collect::<Result<Vec<_>>>()?;
    let signature = signature_of(relation);
    let distinct_counts: Vec<u64> = dims.iter().map(|(_, c)| c.distinct_count()).collect();
    let name = grouping_set_name(&signature);
    let spec = GroupingSetSpec {
        signature,
        attributes: dims.into_iter().map(|(n, _)| n).collect(),
        n: n as u64,
        distinct_counts,
    };
    GroupingSet::from_parts(name, spec, columns, counts)
}

impl GroupingSet {
    fn from_parts(name: String, spec: GroupingSetSpec, columns: Vec<Column>, counts: Vec<u64>) -> Result<Self> {
        let keys = Relation::new(name.clone(), columns)?;
        if keys.row_count() != counts.len() && !keys.columns().is_empty() {
            return Err(Error::GroupingSet("count column length differs from key columns".into()));
        }
        let scaling_factor = scaling_factor(spec.n, &spec.distinct_counts);
        Ok(GroupingSet {
            name,
            spec,
            keys,
            counts,
            scaling_factor,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Renames the grouping set (the default is `gs_<relations>`).
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn spec(&self) -> &GroupingSetSpec {
        &self.spec
    }

    pub fn attributes(&self) -> &[String] {
        &self.spec.attributes
    }

    pub fn scaling_factor(&self) -> ScalingFactor {
        self.scaling_factor
    }

    /// Number of groups (rows) in the grouping set.
    pub fn row_count(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn dimensions(&self) -> &[Column] {
        self.keys.columns()
    }

    pub fn total_count(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Key tuple of a row as values (`None` for NULL).
    pub fn key(&self, row: usize) -> Vec<Option<Value>> {
        self.keys.columns().iter().map(|c| c.value_at(row)).collect()
    }

    /// Whether `attribute` names one of the dimensions.
    pub fn covers(&self, attribute: &str) -> bool {
        self.keys.column_index(attribute).is_some()
    }

    /// Code payload plus counts, in bytes.
    pub fn payload_bytes(&self) -> usize {
        self.counts.len() * (4 * self.keys.columns().len() + 8)
    }

    pub fn write_csv(&self, writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<&str> = self.spec.attributes.iter().map(String::as_str).collect();
        header.push("cnt");
        w.write_record(&header)?;
        for row in 0..self.row_count() {
            let mut rec: Vec<String> = self
                .key(row)
                .into_iter()
                .map(|v| v.map(|v| v.to_string()).unwrap_or_default())
                .collect();
            rec.push(self.counts[row].to_string());
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io("writing grouping set", e))?;
        Ok(())
    }

    /// Reads a grouping set written by [`GroupingSet::write_csv`]. Column
    /// types are inferred unless given (integer, then float, then string).
    pub fn read_csv(reader: impl Read, types: Option<&[LogicalType]>) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let header = rdr.headers()?.clone();
        let dims = header.len().checked_sub(1).filter(|_| &header[header.len() - 1] == "cnt");
        let Some(dims) = dims.filter(|d| *d > 0) else {
            return Err(Error::GroupingSet("expected attribute columns followed by `cnt`".into()));
        };
        if types.is_some_and(|t| t.len() != dims) {
            return Err(Error::GroupingSet("type list does not match attribute count".into()));
        }
        let mut raw: Vec<Vec<String>> = vec![Vec::new(); dims];
        let mut counts = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let line = rec.position().map_or(0, |p| p.line());
            for (d, col) in raw.iter_mut().enumerate() {
                col.push(rec[d].to_string());
            }
            let cnt: u64 = rec[dims]
                .parse()
                .ok()
                .filter(|c| *c > 0)
                .ok_or_else(|| Error::GroupingSet(format!("line {line}: invalid count `{}`", &rec[dims])))?;
            counts.push(cnt);
        }
        let mut columns = Vec::with_capacity(dims);
        for (d, cells) in raw.iter().enumerate() {
            let ty = types.map_or_else(|| infer_type(cells), |t| t[d]);
            let values = cells
                .iter()
                .map(|c| parse_value(c, ty))
                .collect::<Result<Vec<_>>>()?;
            columns.push(Column::from_values(header[d].to_string(), ty, &values)?);
        }
        let attributes: Vec<String> = header.iter().take(dims).map(str::to_string).collect();
        let mut signature: Vec<String> = attributes
            .iter()
            .filter_map(|a| a.split_once('.').map(|(r, _)| r.to_string()))
            .collect();
        signature.sort();
        signature.dedup();
        let spec = GroupingSetSpec {
            signature: signature.clone(),
            n: counts.iter().sum(),
            distinct_counts: columns.iter().map(Column::distinct_count).collect(),
            attributes,
        };
        if spec.attributes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::GroupingSet("attribute columns must be sorted and unique".into()));
        }
        GroupingSet::from_parts(grouping_set_name(&signature), spec, columns, counts)
    }
}

fn infer_type(cells: &[String]) -> LogicalType {
    let present = || cells.iter().filter(|c| !c.is_empty());
    if present().all(|c| c.parse::<i64>().is_ok()) {
        LogicalType::Integer
    } else if present().all(|c| c.parse::<f64>().is_ok_and(f64::is_finite)) {
        LogicalType::Float
    } else {
        LogicalType::String
    }
}

fn parse_value(cell: &str, ty: LogicalType) -> Result<Option<Value>> {
    if cell.is_empty() {
        return Ok(None);
    }
    let bad = || Error::GroupingSet(format!("`{cell}` is not a valid {ty}"));
    Ok(Some(match ty {
        LogicalType::Integer => Value::Int(cell.parse().map_err(|_| bad())?),
        LogicalType::Float => Value::Float(cell.parse().map_err(|_| bad())?),
        LogicalType::String => Value::Str(cell.to_string()),
    }))
}

/// Sum of counts over the groups whose key satisfies every predicate.
/// An empty selection sums to 0.
pub fn execute_on_grouping_set(gs: &GroupingSet, predicates: &[Predicate]) -> Result<u64> {
    if let Some(p) = predicates.iter().find(|p| !gs.covers(&p.attribute)) {
        return Err(Error::UncoveredAttribute(p.attribute.clone()));
    }
    let bound = bind_all(&gs.keys, predicates)?;
    let cols: Vec<&[u32]> = bound.iter().map(|(c, _)| gs.keys.columns()[*c].codes()).collect();
    let ranges: Vec<CodeRange> = bound.iter().map(|(_, r)| *r).collect();
    Ok(scan_count(&cols, &ranges, Some(&gs.counts), gs.counts.len()))
}
