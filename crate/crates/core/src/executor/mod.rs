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

//! Counting executors over base relations: a full scan and a sorted
//! per-column index path. Both evaluate predicates on dictionary codes.

mod index;
mod kernel;

pub use index::{build_index, execute_count_indexed, IndexSet, SortedIndex};
pub use kernel::{bind_predicate, CodeRange};

use crate::error::Result;
use crate::querylang::Predicate;
use crate::storage::Relation;

pub(crate) use kernel::{bind_all, scan_count};

/// Exact number of rows satisfying the conjunction of `predicates`.
pub fn execute_count(relation: &Relation, predicates: &[Predicate]) -> Result<u64> {
    let bound = bind_all(relation, predicates)?;
    let cols: Vec<&[u32]> = bound
        .iter()
        .map(|(c, _)| relation.columns()[*c].codes())
        .collect();
    let ranges: Vec<CodeRange> = bound.iter().map(|(_, r)| *r).collect();
    Ok(scan_count(&cols, &ranges, None, relation.row_count()))
}
