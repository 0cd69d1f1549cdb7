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

use super::kernel::{bind_all, scan_count, CodeRange};
use crate::error::{Error, Result};
use crate::querylang::Predicate;
use crate::storage::{Relation, NULL_CODE};

/// (code, row id) pairs of the non-NULL rows of one column, sorted by code
/// then row id.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedIndex {
    attribute: String,
    codes: Vec<u32>,
    rows: Vec<u32>,
    distinct_count: u64,
}

impl SortedIndex {
    pub fn attribute(&self) -> &str {
        &self.attribute
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.codes.iter().copied().zip(self.rows.iter().copied())
    }

    /// Row ids whose code lies in `range`, as up to two sorted runs.
    pub fn lookup(&self, range: CodeRange) -> impl Iterator<Item = u32> + '_ {
        let at = |code: u32| self.codes.partition_point(|&c| c < code);
        let (lo, hi) = (at(range.lo), at(range.hi.max(range.lo)));
        let (a, b) = if range.exclude != NULL_CODE && (range.lo..range.hi).contains(&range.exclude) {
            (at(range.exclude), at(range.exclude + 1))
        } else {
            (hi, hi)
        };
        self.rows[lo..a].iter().chain(&self.rows[b..hi]).copied()
    }

    /// Fraction of the column's distinct values the range matches.
    pub fn selectivity(&self, range: CodeRange) -> f64 {
        if self.distinct_count == 0 {
            0.0
        } else {
            range.width() as f64 / self.distinct_count as f64
        }
    }

    pub fn payload_bytes(&self) -> usize {
        self.codes.len() * 8
    }
}

/// Builds a sorted index over one column (counting sort on codes).
pub fn build_index(relation: &Relation, attribute: &str) -> Result<SortedIndex> {
    let col = relation.column(attribute)?;
    let dict_len = col.dictionary().len();
    let mut starts = vec![0usize; dict_len + 1];
    for &c in col.codes() {
        if c != NULL_CODE {
            starts[c as usize + 1] += 1;
        }
    }
    for i in 1..starts.len() {
        starts[i] += starts[i - 1];
    }
    let n = starts[dict_len];
    let mut codes = vec![0u32; n];
    let mut rows = vec![0u32; n];
    for (row, &c) in col.codes().iter().enumerate() {
        if c != NULL_CODE {
            let slot = &mut starts[c as usize];
            codes[*slot] = c;
            rows[*slot] = row as u32;
            *slot += 1;
        }
    }
    Ok(SortedIndex {
        attribute: col.name().to_string(),
        codes,
        rows,
        distinct_count: col.distinct_count(),
    })
}

/// Indexes of one relation, keyed by column name.
#[derive(Debug, Clone, Default)]
pub struct IndexSet {
    relation: String,
    row_count: usize,
    indexes: HashMap<String, SortedIndex>,
}

impl IndexSet {
    pub fn new(relation: &Relation) -> Self {
        IndexSet {
            relation: relation.name().to_string(),
            row_count: relation.row_count(),
            indexes: HashMap::new(),
        }
    }

    /// Indexes every listed attribute (duplicates are built once).
    pub fn build<S: AsRef<str>>(relation: &Relation, attributes: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut set = IndexSet::new(relation);
        for a in attributes {
            let name = relation.column(a.as_ref())?.name().to_string();
            if let std::collections::hash_map::Entry::Vacant(slot) = set.indexes.entry(name) {
                slot.insert(build_index(relation, a.as_ref())?);
            }
        }
        Ok(set)
    }

    pub fn insert(&mut self, index: SortedIndex) {
        self.indexes.insert(index.attribute.clone(), index);
    }

    pub fn get(&self, column: &str) -> Option<&SortedIndex> {
        self.indexes.get(column)
    }

    pub fn len(&self) -> usize {
        self.indexes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indexes.is_empty()
    }

    pub fn payload_bytes(&self) -> usize {
        self.indexes.values().map(SortedIndex::payload_bytes).sum()
    }
}

/// Same result as [`super::execute_count`]. Uses the indexed predicate with
/// the lowest estimated selectivity to fetch candidate rows and checks the
/// remaining predicates per row; falls back to a scan when no predicate has
/// an index.
pub fn execute_count_indexed(relation: &Relation, predicates: &[Predicate], indexes: &IndexSet) -> Result<u64> {
    if predicates.is_empty() {
        return Ok(relation.row_count() as u64);
    }
    if !indexes.is_empty() && (indexes.relation != relation.name() || indexes.row_count != relation.row_count()) {
        return Err(Error::Config(format!(
            "index set built for `{}` used on `{}`",
            indexes.relation,
            relation.name()
        )));
    }
    let bound = bind_all(relation, predicates)?;
    if bound.iter().any(|(_, r)| r.is_empty()) {
        return Ok(0);
    }

    let best = bound
        .iter()
        .enumerate()
        .filter_map(|(i, (col, range))| {
            indexes
                .get(relation.columns()[*col].name())
                .map(|idx| (i, idx, idx.selectivity(*range)))
        })
        .min_by(|a, b| a.2.total_cmp(&b.2));

    let Some((chosen, index, _)) = best else {
        let cols: Vec<&[u32]> = bound.iter().map(|(c, _)| relation.columns()[*c].codes()).collect();
        let ranges: Vec<CodeRange> = bound.iter().map(|(_, r)| *r).collect();
        return Ok(scan_count(&cols, &ranges, None, relation.row_count()));
    };

    let rest: Vec<(&[u32], CodeRange)> = bound
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != chosen)
        .map(|(_, (c, r))| (relation.columns()[*c].codes(), *r))
        .collect();
    let count = index
        .lookup(bound[chosen].1)
        .filter(|&row| rest.iter().all(|(codes, r)| r.matches(codes[row as usize])))
        .count();
    Ok(count as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::executor::execute_count;
    use crate::querylang::Operator;
    use crate::storage::Column;

    #[test]
    fn constant_column() {
        let r = Relation::new("t", vec![Column::from_i64("x", &vec![Some(7); 100])]).unwrap();
        let idx = build_index(&r, "x").unwrap();
        assert_eq!(idx.len(), 100);
        assert!(idx.entries().all(|(c, _)| c == 0));
    }

    #[test]
    fn nulls_are_not_indexed_and_entries_sorted() {
        let r = Relation::new(
            "t",
            vec![Column::from_i64("x", &[Some(3), None, Some(1), Some(3), None, Some(2)])],
        )
        .unwrap();
        let idx = build_index(&r, "x").unwrap();
        let entries: Vec<_> = idx.entries().collect();
        assert_eq!(entries, vec![(0, 2), (1, 5), (2, 0), (2, 3)]);
        assert!(build_index(&r, "y").is_err());
    }

    #[test]
    fn lookup_matches_scan_filter() {
        let vals: Vec<Option<i64>> = (0..500).map(|i| if i % 17 == 0 { None } else { Some((i * 31) % 23) }).collect();
        let r = Relation::new("t", vec![Column::from_i64("x", &vals)]).unwrap();
        let idx = build_index(&r, "x").unwrap();
        for lo in 0..23i64 {
            for hi in lo..23 {
                let range = CodeRange { lo: lo as u32, hi: hi as u32, exclude: NULL_CODE };
                let mut got: Vec<u32> = idx.lookup(range).collect();
                got.sort_unstable();
                let want: Vec<u32> = (0..500u32)
                    .filter(|&row| range.matches(r.columns()[0].codes()[row as usize]))
                    .collect();
                assert_eq!(got, want);
            }
        }
        let ne = CodeRange { lo: 0, hi: 23, exclude: 5 };
        assert_eq!(idx.lookup(ne).count() as u64, execute_count(&r, &[Predicate::new("x", Operator::Ne, 5)]).unwrap());
    }

    #[test]
    fn unique_column_equality() {
        let r = Relation::new("t", vec![Column::from_i64("id", &(0..1000).map(Some).collect::<Vec<_>>())]).unwrap();
        let set = IndexSet::build(&r, ["id"]).unwrap();
        assert_eq!(execute_count_indexed(&r, &[Predicate::new("id", Operator::Eq, 421)], &set).unwrap(), 1);
        assert_eq!(execute_count_indexed(&r, &[], &set).unwrap(), 1000);
    }

    #[test]
    fn falls_back_to_scan_without_index() {
        let r = Relation::new(
            "t",
            vec![
                Column::from_i64("a", &[Some(1), Some(2), Some(3)]),
                Column::from_i64("b", &[Some(1), Some(1), Some(2)]),
            ],
        )
        .unwrap();
        let set = IndexSet::build(&r, ["a"]).unwrap();
        let p = [Predicate::new("b", Operator::Eq, 1)];
        assert_eq!(execute_count_indexed(&r, &p, &set).unwrap(), 2);
        assert_eq!(execute_count_indexed(&r, &p, &IndexSet::default()).unwrap(), 2);
    }
}
