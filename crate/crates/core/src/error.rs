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

use std::path::PathBuf;

use thiserror::Error;

use crate::querylang::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}: {message}")]
    Ingest {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("unknown attribute `{attribute}` in `{relation}`")]
    UnknownAttribute { relation: String, attribute: String },

    #[error("unknown relation `{0}`")]
    UnknownRelation(String),

    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    #[error("join error: {0}")]
    Join(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("predicate attribute `{0}` is not a dimension of the grouping set")]
    UncoveredAttribute(String),

    #[error("invalid grouping set: {0}")]
    GroupingSet(String),

    #[error("plan does not match workload: {0}")]
    PlanMismatch(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("resampling budget exhausted at query {query_index} after {attempts} attempts ({generated} queries generated)")]
    ResampleExhausted {
        query_index: usize,
        attempts: u32,
        generated: usize,
        partial: Box<crate::querylang::Workload>,
    },

    #[error("cardinality disagreement on query {query_index}: {detail}")]
    ModeDisagreement { query_index: usize, detail: String },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}
