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

//! Columnar in-memory relations.
//!
//! Every column is dictionary encoded with a sorted dictionary, so codes
//! compare exactly like the values they stand for. Range predicates are
//! evaluated on codes after translating the literal with a binary search.

mod catalog;
mod column;
mod ingest;
mod join;
mod value;

use std::collections::HashSet;

pub use catalog::{Catalog, ContextKey};
pub use column::{Column, ColumnStats, Dictionary, NULL_CODE};
pub use ingest::{load_csv, ColumnSchema, SchemaDescriptor};
pub use join::{materialize_join, JoinPair, JoinSpec};
pub use value::{LogicalType, Value};

use crate::error::{Error, Result};

/// Immutable named table (or materialized join) of equally long columns.
#[derive(Debug, Clone)]
pub struct Relation {
    name: String,
    columns: Vec<Column>,
    row_count: usize,
}

impl Relation {
    pub fn new(name: impl Into<String>, columns: Vec<Column>) -> Result<Self> {
        let name = name.into();
        let row_count = columns.first().map_or(0, Column::len);
        let mut seen = HashSet::new();
        for col in &columns {
            if col.len() != row_count {
                return Err(Error::Schema(format!(
                    "relation `{name}`: column `{}` has {} rows, expected {row_count}",
                    col.name(),
                    col.len()
                )));
            }
            if !seen.insert(col.name()) {
                return Err(Error::Schema(format!(
                    "relation `{name}`: duplicate column `{}`",
                    col.name()
                )));
            }
        }
        Ok(Relation {
            name,
            columns,
            row_count,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn row_count(&self) -> usize {
        self.row_count
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(Column::name)
    }

    /// Resolves an attribute reference. Accepts the exact column name,
    /// `<relation>.<column>`, or (for materialized joins) an unqualified
    /// name that matches exactly one `<rel>.<column>` column.
    pub fn column_index(&self, attribute: &str) -> Option<usize> {
        if let Some(i) = self.columns.iter().position(|c| c.name() == attribute) {
            return Some(i);
        }
        if let Some(rest) = attribute
            .strip_prefix(self.name.as_str())
            .and_then(|r| r.strip_prefix('.'))
        {
            if let Some(i) = self.columns.iter().position(|c| c.name() == rest) {
                return Some(i);
            }
        }
        if !attribute.contains('.') {
            let mut hits = self.columns.iter().enumerate().filter(|(_, c)| {
                c.name()
                    .rsplit_once('.')
                    .is_some_and(|(_, col)| col == attribute)
            });
            if let (Some((i, _)), None) = (hits.next(), hits.next()) {
                return Some(i);
            }
        }
        None
    }

    pub fn column(&self, attribute: &str) -> Result<&Column> {
        self.column_index(attribute)
            .map(|i| &self.columns[i])
            .ok_or_else(|| self.unknown(attribute))
    }

    pub fn column_stats(&self, attribute: &str) -> Result<ColumnStats> {
        self.column(attribute).map(Column::stats)
    }

    pub(crate) fn unknown(&self, attribute: &str) -> Error {
        Error::UnknownAttribute {
            relation: self.name.clone(),
            attribute: attribute.to_string(),
        }
    }

    /// Dictionary-code payload in bytes (4 bytes per cell).
    pub fn payload_bytes(&self) -> usize {
        self.columns.len() * self.row_count * 4
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cars() -> Relation {
        Relation::new(
            "cars",
            vec![
                Column::from_strings("brand", &[Some("VW".into()), Some("BMW".into()), Some("VW".into())]),
                Column::from_i64("year", &[Some(2012), Some(2009), None]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn resolves_qualified_and_plain_names() {
        let r = cars();
        assert_eq!(r.column_index("brand"), Some(0));
        assert_eq!(r.column_index("cars.year"), Some(1));
        assert_eq!(r.column_index("other.year"), None);
        assert!(matches!(r.column_stats("color"), Err(Error::UnknownAttribute { .. })));
    }

    #[test]
    fn rejects_ragged_and_duplicate_columns() {
        let a = Column::from_i64("a", &[Some(1)]);
        let b = Column::from_i64("b", &[Some(1), Some(2)]);
        assert!(Relation::new("t", vec![a.clone(), b]).is_err());
        assert!(Relation::new("t", vec![a.clone(), a]).is_err());
    }

    #[test]
    fn stats_count_null_group() {
        let r = cars();
        assert_eq!(r.column_stats("year").unwrap().distinct_count, 3);
        assert_eq!(r.column_stats("brand").unwrap().distinct_count, 2);
        let s = r.column_stats("brand").unwrap();
        assert_eq!(s.min_value, Some(Value::from("BMW")));
        assert_eq!(s.max_value, Some(Value::from("VW")));
    }

    #[test]
    fn empty_relation_has_zero_distinct() {
        let r = Relation::new("e", vec![Column::from_i64("x", &[])]).unwrap();
        assert_eq!(r.row_count(), 0);
        assert_eq!(r.column_stats("x").unwrap().distinct_count, 0);
    }
}
