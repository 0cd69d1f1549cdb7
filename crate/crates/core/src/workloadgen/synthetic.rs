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

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::storage::{Column, Relation};

/// `n` rows of `c` integer columns `c0..`, each value uniform in
/// `[0, distinct)`. The relation is named `synthetic`.
pub fn generate_synthetic_relation(n: usize, c: usize, distinct: u64, seed: u64) -> Relation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let distinct = distinct.max(1);
    let columns = (0..c)
        .map(|i| {
            let values: Vec<Option<i64>> = (0..n).map(|_| Some(rng.gen_range(0..distinct) as i64)).collect();
            Column::from_i64(format!("c{i}"), &values)
        })
        .collect();
    Relation::new("synthetic", columns).expect("columns have equal length")
}
