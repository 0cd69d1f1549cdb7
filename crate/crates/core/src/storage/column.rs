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

use std::cmp::Ordering;
use std::sync::Arc;

use serde::Serialize;

use super::value::{cmp_int_float, LogicalType, Value};
use crate::error::{Error, Result};

/// Code stored for NULL cells. Never indexes the dictionary.
pub const NULL_CODE: u32 = u32::MAX;

/// Sorted distinct values of a column. Position in the vector is the code.
#[derive(Debug, Clone, PartialEq)]
pub enum Dictionary {
    Integer(Vec<i64>),
    Float(Vec<f64>),
    String(Vec<String>),
}

impl Dictionary {
    pub fn empty(ty: LogicalType) -> Self {
        match ty {
            LogicalType::Integer => Dictionary::Integer(Vec::new()),
            LogicalType::Float => Dictionary::Float(Vec::new()),
            LogicalType::String => Dictionary::String(Vec::new()),
        }
    }

    pub fn logical_type(&self) -> LogicalType {
        match self {
            Dictionary::Integer(_) => LogicalType::Integer,
            Dictionary::Float(_) => LogicalType::Float,
            Dictionary::String(_) => LogicalType::String,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Dictionary::Integer(v) => v.len(),
            Dictionary::Float(v) => v.len(),
            Dictionary::String(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn value(&self, code: u32) -> Option<Value> {
        let i = code as usize;
        match self {
            Dictionary::Integer(v) => v.get(i).map(|x| Value::Int(*x)),
            Dictionary::Float(v) => v.get(i).map(|x| Value::Float(*x)),
            Dictionary::String(v) => v.get(i).map(|x| Value::Str(x.clone())),
        }
    }

    pub fn values(&self) -> impl Iterator<Item = Value> + '_ {
        (0..self.len() as u32).filter_map(|c| self.value(c))
    }

    /// Number of entries strictly below `literal` (with `inclusive`, at or
    /// below). This is the insertion point used to turn range predicates
    /// into code ranges.
    pub fn partition(&self, literal: &Value, inclusive: bool) -> Result<usize> {
        let keep = |o: Ordering| o == Ordering::Less || (inclusive && o == Ordering::Equal);
        match (self, literal) {
            (Dictionary::Integer(d), Value::Int(l)) => Ok(d.partition_point(|v| keep(v.cmp(l)))),
            (Dictionary::Integer(d), Value::Float(l)) => {
                Ok(d.partition_point(|v| keep(cmp_int_float(*v, *l))))
            }
            (Dictionary::Float(d), Value::Float(l)) => {
                Ok(d.partition_point(|v| keep(v.total_cmp(l))))
            }
            (Dictionary::Float(d), Value::Int(l)) => {
                Ok(d.partition_point(|v| keep(cmp_int_float(*l, *v).reverse())))
            }
            (Dictionary::String(d), Value::Str(l)) => {
                Ok(d.partition_point(|v| keep(v.as_str().cmp(l.as_str()))))
            }
            _ => Err(Error::TypeMismatch(format!(
                "{} literal `{literal}` against {} column",
                literal.logical_type(),
                self.logical_type()
            ))),
        }
    }

    /// Code of `literal` if it is present.
    pub fn find(&self, literal: &Value) -> Result<Option<u32>> {
        let lo = self.partition(literal, false)?;
        let hi = self.partition(literal, true)?;
        Ok((hi > lo).then_some(lo as u32))
    }

    fn select(&self, codes: &[u32]) -> Dictionary {
        match self {
            Dictionary::Integer(v) => {
                Dictionary::Integer(codes.iter().map(|&c| v[c as usize]).collect())
            }
            Dictionary::Float(v) => Dictionary::Float(codes.iter().map(|&c| v[c as usize]).collect()),
            Dictionary::String(v) => {
                Dictionary::String(codes.iter().map(|&c| v[c as usize].clone()).collect())
            }
        }
    }

    /// Approximate payload size in bytes.
    pub fn payload_bytes(&self) -> usize {
        match self {
            Dictionary::Integer(v) => v.len() * 8,
            Dictionary::Float(v) => v.len() * 8,
            Dictionary::String(v) => v.iter().map(|s| s.len()).sum(),
        }
    }
}

fn encode<T: Clone>(
    values: &[Option<T>],
    cmp: impl Fn(&T, &T) -> Ordering,
) -> (Vec<T>, Vec<u32>, bool) {
    let mut dict: Vec<T> = values.iter().flatten().cloned().collect();
    dict.sort_unstable_by(&cmp);
    dict.dedup_by(|a, b| cmp(a, b) == Ordering::Equal);
    let mut has_null = false;
    let codes = values
        .iter()
        .map(|v| match v {
            Some(v) => dict
                .binary_search_by(|d| cmp(d, v))
                .expect("value present in its own dictionary") as u32,
            None => {
                has_null = true;
                NULL_CODE
            }
        })
        .collect();
    (dict, codes, has_null)
}

/// A dictionary-encoded column. Codes preserve value order.
#[derive(Debug, Clone)]
pub struct Column {
    name: String,
    codes: Vec<u32>,
    dictionary: Arc<Dictionary>,
    has_null: bool,
}

impl Column {
    pub fn from_i64(name: impl Into<String>, values: &[Option<i64>]) -> Self {
        let (dict, codes, has_null) = encode(values, |a, b| a.cmp(b));
        Self::from_parts_unchecked(name.into(), codes, Arc::new(Dictionary::Integer(dict)), has_null)
    }

    pub fn from_f64(name: impl Into<String>, values: &[Option<f64>]) -> Self {
        let (dict, codes, has_null) = encode(values, |a, b| a.total_cmp(b));
        Self::from_parts_unchecked(name.into(), codes, Arc::new(Dictionary::Float(dict)), has_null)
    }

    pub fn from_strings(name: impl Into<String>, values: &[Option<String>]) -> Self {
        let (dict, codes, has_null) = encode(values, |a, b| a.cmp(b));
        Self::from_parts_unchecked(name.into(), codes, Arc::new(Dictionary::String(dict)), has_null)
    }

    /// Builds a column from values of a declared type. Integers are accepted
    /// in float columns; anything else mismatched is an error.
    pub fn from_values(name: impl Into<String>, ty: LogicalType, values: &[Option<Value>]) -> Result<Self> {
        let name = name.into();
        let mismatch = |v: &Value| {
            Error::TypeMismatch(format!("value `{v}` in {ty} column `{name}`"))
        };
        match ty {
            LogicalType::Integer => {
                let vals = values
                    .iter()
                    .map(|v| match v {
                        None => Ok(None),
                        Some(Value::Int(i)) => Ok(Some(*i)),
                        Some(other) => Err(mismatch(other)),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Self::from_i64(name.clone(), &vals))
            }
            LogicalType::Float => {
                let vals = values
                    .iter()
                    .map(|v| match v {
                        None => Ok(None),
                        Some(Value::Int(i)) => Ok(Some(*i as f64)),
                        Some(Value::Float(f)) => Ok(Some(*f)),
                        Some(other) => Err(mismatch(other)),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Self::from_f64(name.clone(), &vals))
            }
            LogicalType::String => {
                let vals = values
                    .iter()
                    .map(|v| match v {
                        None => Ok(None),
                        Some(Value::Str(s)) => Ok(Some(s.clone())),
                        Some(other) => Err(mismatch(other)),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Self::from_strings(name.clone(), &vals))
            }
        }
    }

    /// Validating constructor over pre-encoded data.
    pub fn from_parts(name: impl Into<String>, codes: Vec<u32>, dictionary: Arc<Dictionary>) -> Result<Self> {
        let name = name.into();
        let len = dictionary.len() as u32;
        let mut has_null = false;
        for &c in &codes {
            if c == NULL_CODE {
                has_null = true;
            } else if c >= len {
                return Err(Error::Schema(format!(
                    "column `{name}`: code {c} outside dictionary of length {len}"
                )));
            }
        }
        Ok(Self::from_parts_unchecked(name, codes, dictionary, has_null))
    }

    fn from_parts_unchecked(name: String, codes: Vec<u32>, dictionary: Arc<Dictionary>, has_null: bool) -> Self {
        Column {
            name,
            codes,
            dictionary,
            has_null,
        }
    }

    /// Gathers `rows` from this column and drops dictionary entries that are
    /// no longer referenced, so statistics stay exact.
    pub fn gather_compacted(&self, name: impl Into<String>, rows: &[u32]) -> Column {
        let mut used = vec![false; self.dictionary.len()];
        let mut has_null = false;
        for &r in rows {
            match self.codes[r as usize] {
                NULL_CODE => has_null = true,
                c => used[c as usize] = true,
            }
        }
        let mut remap = vec![NULL_CODE; used.len()];
        let mut kept = Vec::new();
        for (old, _) in used.iter().enumerate().filter(|(_, u)| **u) {
            remap[old] = kept.len() as u32;
            kept.push(old as u32);
        }
        let dictionary = if kept.len() == self.dictionary.len() {
            Arc::clone(&self.dictionary)
        } else {
            Arc::new(self.dictionary.select(&kept))
        };
        let codes = rows
            .iter()
            .map(|&r| match self.codes[r as usize] {
                NULL_CODE => NULL_CODE,
                c => remap[c as usize],
            })
            .collect();
        Column::from_parts_unchecked(name.into(), codes, dictionary, has_null)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn logical_type(&self) -> LogicalType {
        self.dictionary.logical_type()
    }

    pub fn codes(&self) -> &[u32] {
        &self.codes
    }

    pub fn dictionary(&self) -> &Arc<Dictionary> {
        &self.dictionary
    }

    pub fn has_null(&self) -> bool {
        self.has_null
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn value_at(&self, row: usize) -> Option<Value> {
        self.dictionary.value(self.codes[row])
    }

    /// Distinct values, counting the NULL group as one value.
    pub fn distinct_count(&self) -> u64 {
        self.dictionary.len() as u64 + u64::from(self.has_null)
    }

    pub fn stats(&self) -> ColumnStats {
        let len = self.dictionary.len() as u32;
        ColumnStats {
            distinct_count: self.distinct_count(),
            min_value: self.dictionary.value(0),
            max_value: len.checked_sub(1).and_then(|c| self.dictionary.value(c)),
        }
    }
}

/// Exact per-column statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnStats {
    pub distinct_count: u64,
    pub min_value: Option<Value>,
    pub max_value: Option<Value>,
}
