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

use std::fmt;

use serde::{Serialize, Serializer};

/// `(∏ distinct counts) / N`, kept as an exact fraction.
///
/// A grouping set is beneficial iff the factor is below one, i.e. the
/// largest possible number of groups is smaller than the source. For
/// `N = 0` the factor is infinite and never beneficial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFactor {
    // None when the product overflows u128
    product: Option<u128>,
    approx_product: f64,
    n: u64,
}

/// Computes the factor for `n` source tuples and per-column distinct counts.
/// An empty list has product one.
pub fn scaling_factor(n: u64, distinct_counts: &[u64]) -> ScalingFactor {
    let product = distinct_counts
        .iter()
        .try_fold(1u128, |acc, &d| acc.checked_mul(u128::from(d)));
    let approx_product = distinct_counts.iter().map(|&d| d as f64).product();
    ScalingFactor {
        product,
        approx_product,
        n,
    }
}

impl ScalingFactor {
    pub fn value(&self) -> f64 {
        if self.n == 0 {
            return f64::INFINITY;
        }
        match self.product {
            Some(p) => p as f64 / self.n as f64,
            None => self.approx_product / self.n as f64,
        }
    }

    pub fn is_beneficial(&self) -> bool {
        self.n > 0 && self.product.is_some_and(|p| p < u128::from(self.n))
    }

    pub fn is_infinite(&self) -> bool {
        self.n == 0
    }

    /// Exact product of distinct counts, if it fits in 128 bits.
    pub fn product(&self) -> Option<u128> {
        self.product
    }

    pub fn n(&self) -> u64 {
        self.n
    }
}

impl fmt::Display for ScalingFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl Serialize for ScalingFactor {
    /// JSON has no infinity; infinite factors serialize as `null`.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let v = self.value();
        if v.is_finite() {
            serializer.serialize_f64(v)
        } else {
            serializer.serialize_none()
        }
    }
}
