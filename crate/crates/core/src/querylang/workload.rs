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

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ast::CountQuery;
use super::parser::parse_query;
use super::render::{render_query, RenderTarget};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct WorkloadMeta {
    pub seed: Option<u64>,
    pub context: Option<String>,
    pub zero_tuple_rejections: Option<u64>,
}

/// Ordered list of count queries.
///
/// File form: one query per line; `#` starts a comment. Metadata is kept in
/// `# seed: ..`, `# context: ..` and `# rejections: ..` comment lines.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Workload {
    pub queries: Vec<CountQuery>,
    pub meta: WorkloadMeta,
}

impl Workload {
    pub fn new(queries: Vec<CountQuery>) -> Self {
        Workload {
            queries,
            meta: WorkloadMeta::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut w = Workload::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((key, value)) = comment.split_once(':') {
                    let value = value.trim();
                    match key.trim() {
                        "seed" => w.meta.seed = value.parse().ok(),
                        "context" => w.meta.context = Some(value.to_string()),
                        "rejections" => w.meta.zero_tuple_rejections = value.parse().ok(),
                        _ => {}
                    }
                }
                continue;
            }
            w.queries.push(parse_query(line).map_err(|e| e.at_line(i + 1))?);
        }
        Ok(w)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(seed) = self.meta.seed {
            out.push_str(&format!("# seed: {seed}\n"));
        }
        if let Some(ctx) = &self.meta.context {
            out.push_str(&format!("# context: {}\n", ctx.replace('\n', " ")));
        }
        if let Some(r) = self.meta.zero_tuple_rejections {
            out.push_str(&format!("# rejections: {r}\n"));
        }
        for q in &self.queries {
            out.push_str(&render_query(q, RenderTarget::Base).expect("base rendering cannot fail"));
            out.push('\n');
        }
        out
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading workload {}", path.display()), e))?;
        Self::parse(&text)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())
            .map_err(|e| Error::io(format!("writing workload {}", path.display()), e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_round_trip_with_metadata() {
        let text = "# seed: 7\n# context: cars\n\nSELECT COUNT(*) FROM cars WHERE cars.year < 2000;\n# a comment\nSELECT COUNT(*) FROM cars;\n";
        let w = Workload::parse(text).unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(w.meta.seed, Some(7));
        assert_eq!(w.meta.context.as_deref(), Some("cars"));
        assert_eq!(Workload::parse(&w.to_text()).unwrap(), w);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = Workload::parse("SELECT COUNT(*) FROM t;\nSELECT COUNT(*) FROM t WHERE a <> 1;\n").unwrap_err();
        match err {
            Error::Parse(e) => assert_eq!(e.line, Some(2)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rewritten_text_is_not_a_workload() {
        assert!(Workload::parse("SELECT SUM(cnt) FROM gs_t WHERE t.a = 1;").is_err());
    }
}
