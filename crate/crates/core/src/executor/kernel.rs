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

use crate::error::Result;
use crate::querylang::{Operator, Predicate};
use crate::storage::{Dictionary, Relation, Value, NULL_CODE};

/// Codes `lo..hi` minus `exclude`. NULL never matches since `hi` is bounded
/// by the dictionary length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeRange {
    pub lo: u32,
    pub hi: u32,
    pub exclude: u32,
}

impl CodeRange {
    const EMPTY: CodeRange = CodeRange {
        lo: 0,
        hi: 0,
        exclude: NULL_CODE,
    };

    #[inline(always)]
    pub fn matches(&self, code: u32) -> bool {
        // single unsigned comparison for the range, no short-circuit branches
        (code.wrapping_sub(self.lo) < self.hi.wrapping_sub(self.lo)) & (code != self.exclude)
    }

    pub fn is_empty(&self) -> bool {
        self.width() == 0
    }

    /// Number of codes matched.
    pub fn width(&self) -> u64 {
        let w = u64::from(self.hi.saturating_sub(self.lo));
        if self.exclude != NULL_CODE && (self.lo..self.hi).contains(&self.exclude) {
            w - 1
        } else {
            w
        }
    }
}

/// Translates `op literal` into the code range it matches in `dictionary`.
pub fn bind_predicate(op: Operator, literal: &Value, dictionary: &Dictionary) -> Result<CodeRange> {
    let len = dictionary.len() as u32;
    let range = |lo: usize, hi: usize| CodeRange {
        lo: lo as u32,
        hi: hi as u32,
        exclude: NULL_CODE,
    };
    Ok(match op {
        Operator::Eq => match dictionary.find(literal)? {
            Some(k) => range(k as usize, k as usize + 1),
            None => CodeRange::EMPTY,
        },
        Operator::Ne => CodeRange {
            lo: 0,
            hi: len,
            exclude: dictionary.find(literal)?.unwrap_or(NULL_CODE),
        },
        Operator::Lt => range(0, dictionary.partition(literal, false)?),
        Operator::Le => range(0, dictionary.partition(literal, true)?),
        Operator::Gt => range(dictionary.partition(literal, true)?, len as usize),
        Operator::Ge => range(dictionary.partition(literal, false)?, len as usize),
    })
}

/// Resolves and binds every predicate: (column index, code range).
pub(crate) fn bind_all(relation: &Relation, predicates: &[Predicate]) -> Result<Vec<(usize, CodeRange)>> {
    predicates
        .iter()
        .map(|p| {
            let idx = relation
                .column_index(&p.attribute)
                .ok_or_else(|| relation.unknown(&p.attribute))?;
            let range = bind_predicate(p.op, &p.literal, relation.columns()[idx].dictionary())?;
            Ok((idx, range))
        })
        .collect()
}

const CHUNK: usize = 1024;

/// Counts rows (or sums `weights`) whose codes fall in every range.
///
/// Evaluation is column-at-a-time over fixed-size chunks into a byte mask,
/// so the cost depends on row and predicate counts but not on row order.
pub(crate) fn scan_count(cols: &[&[u32]], ranges: &[CodeRange], weights: Option<&[u64]>, rows: usize) -> u64 {
    debug_assert_eq!(cols.len(), ranges.len());
    if ranges.iter().any(CodeRange::is_empty) {
        return 0;
    }
    let Some((first, rest)) = cols.split_first() else {
        return match weights {
            None => rows as u64,
            Some(w) => w[..rows].iter().sum(),
        };
    };
    let mut mask = [0u8; CHUNK];
    let mut total = 0u64;
    for start in (0..rows).step_by(CHUNK) {
        let end = (start + CHUNK).min(rows);
        let m = &mut mask[..end - start];
        let r = ranges[0];
        for (m, &c) in m.iter_mut().zip(&first[start..end]) {
            *m = u8::from(r.matches(c));
        }
        for (col, &r) in rest.iter().zip(&ranges[1..]) {
            for (m, &c) in m.iter_mut().zip(&col[start..end]) {
                *m &= u8::from(r.matches(c));
            }
        }
        total += match weights {
            None => m.iter().map(|&x| u64::from(x)).sum::<u64>(),
            Some(w) => m.iter().zip(&w[start..end]).map(|(&x, &w)| w * u64::from(x)).sum(),
        };
    }
    total
}
