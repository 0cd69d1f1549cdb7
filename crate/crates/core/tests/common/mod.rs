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

//! Shared fixtures and a value-level oracle that never touches dictionary
//! codes.

#![allow(dead_code)]

use std::cmp::Ordering;

use preagg_core::querylang::{Operator, Predicate};
use preagg_core::storage::{Column, LogicalType, Relation, Value};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn compare(a: &Value, b: &Value) -> Option<Ordering> {
    match (a, b) {
        (Value::Int(x), Value::Int(y)) => Some(x.cmp(y)),
        (Value::Float(x), Value::Float(y)) => x.partial_cmp(y),
        (Value::Int(x), Value::Float(y)) => (*x as f64).partial_cmp(y),
        (Value::Float(x), Value::Int(y)) => x.partial_cmp(&(*y as f64)),
        (Value::Str(x), Value::Str(y)) => Some(x.cmp(y)),
        _ => None,
    }
}

pub fn holds(value: Option<&Value>, op: Operator, literal: &Value) -> bool {
    let Some(ord) = value.and_then(|v| compare(v, literal)) else {
        return false;
    };
    match op {
        Operator::Eq => ord == Ordering::Equal,
        Operator::Ne => ord != Ordering::Equal,
        Operator::Lt => ord == Ordering::Less,
        Operator::Le => ord != Ordering::Greater,
        Operator::Gt => ord == Ordering::Greater,
        Operator::Ge => ord != Ordering::Less,
    }
}

/// Row-at-a-time COUNT(*) over decoded values.
pub fn naive_count(rel: &Relation, preds: &[Predicate]) -> u64 {
    let cols: Vec<&Column> = preds.iter().map(|p| rel.column(&p.attribute).unwrap()).collect();
    (0..rel.row_count())
        .filter(|&row| {
            preds
                .iter()
                .zip(&cols)
                .all(|(p, c)| holds(c.value_at(row).as_ref(), p.op, &p.literal))
        })
        .count() as u64
}

/// A relation named `r` with `c` columns of mixed types, about 10% NULLs
/// where `nulls` is set, and at most `distinct` values per column.
pub fn random_relation(seed: u64, n: usize, c: usize, distinct: u64, nulls: bool) -> Relation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let columns = (0..c)
        .map(|i| {
            let ty = [LogicalType::Integer, LogicalType::Float, LogicalType::String][rng.gen_range(0..3)];
            let values: Vec<Option<Value>> = (0..n)
                .map(|_| {
                    if nulls && rng.gen_ratio(1, 10) {
                        return None;
                    }
                    let k = rng.gen_range(0..distinct) as i64;
                    Some(match ty {
                        LogicalType::Integer => Value::Int(k * 3 - 20),
                        LogicalType::Float => Value::Float(k as f64 * 0.5 - 1.25),
                        LogicalType::String => Value::Str(format!("v{k:03}")),
                    })
                })
                .collect();
            Column::from_values(format!("a{i}"), ty, &values).unwrap()
        })
        .collect();
    Relation::new("r", columns).unwrap()
}

/// A literal for `col`: usually a present value, sometimes one that falls
/// between or outside the stored values.
pub fn random_literal(rng: &mut impl Rng, col: &Column) -> Value {
    let present: Vec<Value> = col.dictionary().values().collect();
    let absent = present.is_empty() || rng.gen_ratio(1, 4);
    if !absent {
        return present.choose(rng).unwrap().clone();
    }
    match col.dictionary().logical_type() {
        LogicalType::Integer => Value::Int(rng.gen_range(-40..200)),
        LogicalType::Float => Value::Float(rng.gen_range(-40..200) as f64 * 0.25 + 0.125),
        LogicalType::String => Value::Str(format!("v{:03}x", rng.gen_range(0..120))),
    }
}

/// Up to `max` predicates over distinct attributes drawn from `attrs`.
pub fn random_predicates(rng: &mut impl Rng, rel: &Relation, attrs: &[String], max: usize) -> Vec<Predicate> {
    let k = rng.gen_range(0..=max.min(attrs.len()));
    attrs
        .choose_multiple(rng, k)
        .map(|a| {
            let col = rel.column(a).unwrap();
            Predicate::new(a.clone(), *Operator::ALL.choose(rng).unwrap(), random_literal(rng, col))
        })
        .collect()
}
