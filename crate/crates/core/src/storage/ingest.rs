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

use std::collections::HashMap;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::join::JoinPair;
use super::{Column, LogicalType, Relation, Value};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnSchema {
    pub name: String,
    #[serde(rename = "type")]
    pub logical_type: LogicalType,
}

/// Table description read from JSON:
/// `{"name": .., "columns": [{"name": .., "type": ..}], "joins": [{"left": "t1.a", "right": "t2.b"}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemaDescriptor {
    pub name: String,
    pub columns: Vec<ColumnSchema>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub joins: Vec<JoinPair>,
}

impl SchemaDescriptor {
    /// Reads one descriptor or a JSON array of descriptors.
    pub fn read_all(path: &Path) -> Result<Vec<SchemaDescriptor>> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading schema {}", path.display()), e))?;
        Self::parse_all(&text)
    }

    pub fn parse_all(text: &str) -> Result<Vec<SchemaDescriptor>> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum OneOrMany {
            One(SchemaDescriptor),
            Many(Vec<SchemaDescriptor>),
        }
        Ok(match serde_json::from_str(text)? {
            OneOrMany::One(d) => vec![d],
            OneOrMany::Many(v) => v,
        })
    }
}

/// Loads a CSV file (header line first, empty field = NULL) into a relation.
pub fn load_csv(path: &Path, schema: &SchemaDescriptor) -> Result<Relation> {
    let file = File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
    read_csv(file, path, schema)
}

pub(crate) fn read_csv(reader: impl Read, path: &Path, schema: &SchemaDescriptor) -> Result<Relation> {
    let ingest = |line: u64, message: String| Error::Ingest {
        path: path.to_path_buf(),
        line,
        message,
    };

    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);

    let header = rdr.headers()?.clone();
    let by_name: HashMap<&str, usize> = schema
        .columns
        .iter()
        .enumerate()
        .map(|(i, c)| (c.name.as_str(), i))
        .collect();
    // header position -> schema position
    let mut slots = Vec::with_capacity(header.len());
    for h in header.iter() {
        let h = h.trim();
        match by_name.get(h) {
            Some(&i) if !slots.contains(&i) => slots.push(i),
            Some(_) => return Err(Error::Schema(format!("duplicate header column `{h}`"))),
            None => {
                return Err(Error::Schema(format!(
                    "unknown column `{h}` in {} (schema `{}`)",
                    path.display(),
                    schema.name
                )))
            }
        }
    }
    if slots.len() != schema.columns.len() {
        let missing: Vec<_> = schema
            .columns
            .iter()
            .enumerate()
            .filter(|(i, _)| !slots.contains(i))
            .map(|(_, c)| c.name.as_str())
            .collect();
        return Err(Error::Schema(format!(
            "{} is missing columns {missing:?}",
            path.display()
        )));
    }

    let mut cells: Vec<Vec<Option<Value>>> = vec![Vec::new(); schema.columns.len()];
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != slots.len() {
            return Err(ingest(
                line,
                format!("expected {} fields, found {}", slots.len(), record.len()),
            ));
        }
        for (field, &slot) in record.iter().zip(&slots) {
            let col = &schema.columns[slot];
            let v = parse_cell(field, col.logical_type)
                .map_err(|m| ingest(line, format!("column `{}`: {m}", col.name)))?;
            cells[slot].push(v);
        }
    }

    let columns = schema
        .columns
        .iter()
        .zip(&cells)
        .map(|(c, vals)| Column::from_values(c.name.clone(), c.logical_type, vals))
        .collect::<Result<Vec<_>>>()?;
    Relation::new(schema.name.clone(), columns)
}

fn parse_cell(field: &str, ty: LogicalType) -> std::result::Result<Option<Value>, String> {
    if field.is_empty() {
        return Ok(None);
    }
    match ty {
        LogicalType::Integer => field
            .trim()
            .parse::<i64>()
            .map(|v| Some(Value::Int(v)))
            .map_err(|_| format!("`{field}` is not an integer")),
        LogicalType::Float => match field.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Some(Value::Float(v))),
            _ => Err(format!("`{field}` is not a finite float")),
        },
        LogicalType::String => Ok(Some(Value::Str(field.to_string()))),
    }
}
