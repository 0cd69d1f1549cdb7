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

//! Conjunctive COUNT(*) queries: model, parser, renderer, workload files.
//!
//! Grammar (keywords case-insensitive):
//!
//! ```text
//! query   := SELECT COUNT(*) FROM rel ("," rel)* [WHERE cond (AND cond)*] [";"]
//! cond    := attr op literal | attr "=" attr
//! attr    := ident "." ident | ident
//! op      := "=" | "!=" | "<" | "<=" | ">" | ">="
//! literal := integer | float | "'" string "'"
//! ```
//!
//! Rewritten queries use `SELECT SUM(cnt) FROM gs_...`; they are accepted by
//! [`parse_executable`] only, never by [`parse_query`].

mod ast;
mod parser;
mod render;
mod workload;

pub use ast::{CountQuery, JoinCondition, Operator, Predicate};
pub use parser::{parse_executable, parse_query, Executable, ParseError, ParseErrorKind};
pub use render::{grouping_set_name, render_query, RenderTarget};
pub use workload::{Workload, WorkloadMeta};
