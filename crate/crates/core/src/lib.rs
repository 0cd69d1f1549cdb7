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

//! Columnar mini query engine for generating labeled COUNT(*) training
//! workloads, with grouping-set pre-aggregation to speed up labeling.
//!
//! The pipeline is: load relations ([`storage`]), obtain a workload
//! ([`querylang`], [`workloadgen`]), pick beneficial grouping sets
//! ([`analyzer`], [`cube`]), rewrite queries against them ([`rewriter`]),
//! and execute/benchmark everything ([`executor`], [`harness`]).

pub mod analyzer;
pub mod cube;
pub mod error;
pub mod executor;
pub mod harness;
pub mod querylang;
pub mod rewriter;
pub mod storage;
pub mod workloadgen;

pub use error::{Error, Result};
