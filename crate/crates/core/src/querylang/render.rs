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
use std::fmt::Write;

use super::ast::{CountQuery, Predicate};
use crate::error::{Error, Result};
use crate::storage::Value;

/// Where a rendered query runs.
#[derive(Debug, Clone, Copy)]
pub enum RenderTarget<'a> {
    Base,
    GroupingSet {
        name: &'a str,
        dimensions: &'a [String],
    },
}

/// `gs_<sorted relation names joined by "_">`.
pub fn grouping_set_name<S: AsRef<str>>(relations: impl IntoIterator<Item = S>) -> String {
    let names: BTreeSet<String> = relations.into_iter().map(|s| s.as_ref().to_string()).collect();
    let names: Vec<String> = names.into_iter().collect();
    format!("gs_{}", names.join("_"))
}

fn write_literal(out: &mut String, v: &Value) {
    match v {
        Value::Str(s) => {
            out.push('\'');
            out.push_str(&s.replace('\'', "''"));
            out.push('\'');
        }
        other => {
            let _ = write!(out, "{other}");
        }
    }
}

fn write_predicate(out: &mut String, p: &Predicate) {
    let _ = write!(out, "{} {} ", p.attribute, p.op);
    write_literal(out, &p.literal);
}

/// Renders a query for base data (`COUNT(*)`) or for a grouping set
/// (`SUM(cnt)`, join conditions dropped because the grouping set is built
/// over the materialized join).
pub fn render_query(query: &CountQuery, target: RenderTarget<'_>) -> Result<String> {
    let mut out = String::new();
    let mut conds: Vec<String> = Vec::new();
    match target {
        RenderTarget::Base => {
            out.push_str("SELECT COUNT(*) FROM ");
            out.push_str(&query.relations.join(", "));
            conds.extend(query.joins.iter().map(|j| format!("{} = {}", j.left, j.right)));
        }
        RenderTarget::GroupingSet { name, dimensions } => {
            if let Some(p) = query
                .predicates
                .iter()
                .find(|p| !dimensions.contains(&p.attribute))
            {
                return Err(Error::UncoveredAttribute(p.attribute.clone()));
            }
            out.push_str("SELECT SUM(cnt) FROM ");
            out.push_str(name);
        }
    }
    for p in &query.predicates {
        let mut s = String::new();
        write_predicate(&mut s, p);
        conds.push(s);
    }
    if !conds.is_empty() {
        out.push_str(" WHERE ");
        out.push_str(&conds.join(" AND "));
    }
    out.push(';');
    Ok(out)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::querylang::{parse_executable, parse_query, Executable, JoinCondition, Operator};

    fn car_query() -> CountQuery {
        parse_query(
            "SELECT COUNT(*) FROM cars WHERE cars.brand = 'VW' AND cars.color = 'red' AND cars.year > 2010",
        )
        .unwrap()
    }

    #[test]
    fn grouping_set_form_sums_counts() {
        let dims = ["cars.brand", "cars.color", "cars.year"].map(String::from);
        let text = render_query(
            &car_query(),
            RenderTarget::GroupingSet {
                name: &grouping_set_name(["cars"]),
                dimensions: &dims,
            },
        )
        .unwrap();
        assert_eq!(
            text,
            "SELECT SUM(cnt) FROM gs_cars WHERE cars.brand = 'VW' AND cars.color = 'red' AND cars.year > 2010;"
        );
    }

    #[test]
    fn uncovered_attribute_is_an_error() {
        let dims = ["cars.brand".to_string()];
        let err = render_query(&car_query(), RenderTarget::GroupingSet { name: "gs_cars", dimensions: &dims });
        assert!(matches!(err, Err(Error::UncoveredAttribute(a)) if a == "cars.color"));
    }

    #[test]
    fn zero_predicates_base() {
        let q = parse_query("SELECT COUNT(*) FROM t").unwrap();
        assert_eq!(render_query(&q, RenderTarget::Base).unwrap(), "SELECT COUNT(*) FROM t;");
    }

    #[test]
    fn grouping_set_form_drops_joins() {
        let q = parse_query("SELECT COUNT(*) FROM t2, t1 WHERE t1.id = t2.fk AND t2.x < 5").unwrap();
        let name = grouping_set_name(&q.relations);
        assert_eq!(name, "gs_t1_t2");
        let dims = ["t2.x".to_string()];
        let text = render_query(&q, RenderTarget::GroupingSet { name: &name, dimensions: &dims }).unwrap();
        assert_eq!(text, "SELECT SUM(cnt) FROM gs_t1_t2 WHERE t2.x < 5;");
        assert!(!text.contains("t1.id"));
    }

    fn ident() -> impl Strategy<Value = String> {
        "[a-z_][a-z0-9_]{0,6}".prop_filter("keyword", |s| {
            !["select", "count", "from", "where", "and", "sum", "avg", "min", "max"].contains(&s.as_str())
        })
    }

    fn literal() -> impl Strategy<Value = Value> {
        prop_oneof![
            any::<i64>().prop_map(Value::Int),
            (-1e12f64..1e12).prop_map(Value::Float),
            any::<f64>().prop_filter("finite", |f| f.is_finite()).prop_map(Value::Float),
            "[ -~]{0,8}".prop_map(Value::Str),
        ]
    }

    prop_compose! {
        fn arb_query()(rels in proptest::collection::btree_set(ident(), 1..4))
            (preds in proptest::collection::vec(
                (0..rels.len(), ident(), proptest::sample::select(Operator::ALL.to_vec()), literal()), 0..6),
             joins in proptest::collection::vec((0..rels.len(), ident(), 0..rels.len(), ident()), 0..3),
             rels in Just(rels.into_iter().collect::<Vec<_>>()))
            -> CountQuery
        {
            CountQuery {
                predicates: preds.into_iter()
                    .map(|(r, c, op, lit)| Predicate { attribute: format!("{}.{c}", rels[r]), op, literal: lit })
                    .collect(),
                joins: joins.into_iter()
                    .map(|(l, lc, r, rc)| JoinCondition::new(format!("{}.{lc}", rels[l]), format!("{}.{rc}", rels[r])))
                    .collect(),
                relations: rels,
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn parse_inverts_render(q in arb_query()) {
            let text = render_query(&q, RenderTarget::Base).unwrap();
            prop_assert_eq!(parse_query(&text).unwrap(), q.clone());

            let dims: Vec<String> = q.predicates.iter().map(|p| p.attribute.clone()).collect();
            let name = grouping_set_name(&q.relations);
            let gs = render_query(&q, RenderTarget::GroupingSet { name: &name, dimensions: &dims }).unwrap();
            prop_assert_eq!(
                parse_executable(&gs).unwrap(),
                Executable::GroupingSet { name, predicates: q.predicates.clone() }
            );
        }
    }
}
