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

mod common;

use preagg_core::executor::{build_index, execute_count, execute_count_indexed, IndexSet};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{naive_count, random_predicates, random_relation};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn indexed_equals_scan(
        seed in any::<u64>(),
        n in 0usize..3000,
        c in 1usize..=5,
        distinct in 1u64..=200,
        nulls in any::<bool>(),
    ) {
        let rel = random_relation(seed, n, c, distinct, nulls);
        let mut rng = ChaCha8Rng::seed_from_u64(!seed);
        let all: Vec<String> = (0..c).map(|i| format!("a{i}")).collect();
        // index a random subset so that both the index path and the scan fallback run
        let k = rng.gen_range(0..=c);
        let indexed: Vec<&String> = all.choose_multiple(&mut rng, k).collect();
        let indexes = IndexSet::build(&rel, indexed).unwrap();
        for _ in 0..3 {
            let preds = random_predicates(&mut rng, &rel, &all, c);
            let expected = naive_count(&rel, &preds);
            prop_assert_eq!(execute_count(&rel, &preds).unwrap(), expected);
            prop_assert_eq!(execute_count_indexed(&rel, &preds, &indexes).unwrap(), expected);
        }
    }
}

#[test]
fn index_entries_are_sorted_and_complete() {
    let rel = random_relation(4, 2000, 2, 30, true);
    let idx = build_index(&rel, "a1").unwrap();
    let entries: Vec<(u32, u32)> = idx.entries().collect();
    let non_null = rel.column("a1").unwrap().codes().iter().filter(|&&c| c != u32::MAX).count();
    assert_eq!(entries.len(), non_null);
    assert!(entries.windows(2).all(|w| w[0] <= w[1]));
    for (code, row) in entries {
        assert_eq!(rel.column("a1").unwrap().codes()[row as usize], code);
    }
}

#[test]
fn index_from_another_relation_is_rejected() {
    let a = random_relation(1, 10, 1, 3, false);
    let b = preagg_core::storage::Relation::new("other", vec![a.columns()[0].clone()]).unwrap();
    let idx = IndexSet::build(&b, ["a0"]).unwrap();
    let pred = preagg_core::querylang::Predicate::new("a0", preagg_core::querylang::Operator::Ne, "zz");
    assert!(matches!(
        execute_count_indexed(&a, &[pred], &idx),
        Err(preagg_core::Error::Config(_))
    ));
}
