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

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::storage::{JoinPair, Value};

pub type JoinCondition = JoinPair;

/// The six comparison operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Operator {
    #[serde(rename = "!=")]
    Ne,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
}

impl Operator {
    pub const ALL: [Operator; 6] = [
        Operator::Ne,
        Operator::Lt,
        Operator::Le,
        Operator::Eq,
        Operator::Gt,
        Operator::Ge,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Operator::Ne => "!=",
            Operator::Lt => "<",
            Operator::Le => "<=",
            Operator::Eq => "=",
            Operator::Gt => ">",
            Operator::Ge => ">=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Operator> {
        Operator::ALL.into_iter().find(|op| op.symbol() == s)
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Predicate {
    pub attribute: String,
    pub op: Operator,
    pub literal: Value,
}

impl Predicate {
    pub fn new(attribute: impl Into<String>, op: Operator, literal: impl Into<Value>) -> Self {
        Predicate {
            attribute: attribute.into(),
            op,
            literal: literal.into(),
        }
    }
}

/// `SELECT COUNT(*) FROM <relations> WHERE <joins> AND <predicates>`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CountQuery {
    /// FROM-clause order is kept for rendering; semantics use the set.
    pub relations: Vec<String>,
    pub joins: Vec<JoinCondition>,
    pub predicates: Vec<Predicate>,
}

impl CountQuery {
    pub fn relation_set(&self) -> BTreeSet<String> {
        self.relations.iter().cloned().collect()
    }

    pub fn predicate_attributes(&self) -> BTreeSet<String> {
        self.predicates.iter().map(|p| p.attribute.clone()).collect()
    }

    pub fn table_count(&self) -> usize {
        self.relations.len()
    }
}
