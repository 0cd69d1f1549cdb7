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

//! Synthetic tables, sampled COUNT(*) workloads, and workload profiles.
//!
//! All randomness comes from ChaCha8 seeded with a 64-bit seed, so the same
//! configuration yields the same output on every platform.

mod generator;
mod profile;
mod synthetic;

pub use generator::{generate_workload, generate_workload_with_stats, sample_workload, GenerationStats, GeneratorConfig};
pub use profile::{profile_workload, WorkloadProfile};
pub use synthetic::generate_synthetic_relation;
