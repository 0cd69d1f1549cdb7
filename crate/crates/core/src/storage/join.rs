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

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{Relation, NULL_CODE};
use crate::error::{Error, Result};

/// Equi-join condition between two qualified attributes (`rel.column`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct JoinPair {
    pub left: String,
    pub right: String,
}

impl JoinPair {
    pub fn new(left: impl Into<String>, right: impl Into<String>) -> Self {
        JoinPair {
            left: left.into(),
            right: right.into(),
        }
    }

    /// The same condition with its sides in ascending order.
    pub fn normalized(&self) -> JoinPair {
        if self.left <= self.right {
            self.clone()
        } else {
            JoinPair::new(self.right.clone(), self.left.clone())
        }
    }

    /// `((left relation, left column), (right relation, right column))`.
    #[allow(clippy::type_complexity)]
    fn sides(&self) -> Result<((&str, &str), (&str, &str))> {
        fn split(a: &str) -> Result<(&str, &str)> {
            a.split_once('.')
                .ok_or_else(|| Error::Join(format!("join attribute `{a}` must be qualified")))
        }
        Ok((split(&self.left)?, split(&self.right)?))
    }

    pub fn relations(&self) -> Option<(&str, &str)> {
        let (l, r) = self.sides().ok()?;
        Some((l.0, r.0))
    }
}

/// Relations to join and the equi-join conditions connecting them.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct JoinSpec {
    pub relations: Vec<String>,
    pub conditions: Vec<JoinPair>,
}

struct Edge {
    // (relation index, column index) on each side
    a: (usize, usize),
    b: (usize, usize),
}

/// Materializes the inner equi-join of `relations`. Output columns are named
/// `relation.column`, in input relation order; dictionaries are compacted to
/// the values that survive the join.
pub fn materialize_join(relations: &[&Relation], spec: &JoinSpec) -> Result<Relation> {
    let wanted: BTreeSet<&str> = spec.relations.iter().map(String::as_str).collect();
    let given: BTreeSet<&str> = relations.iter().map(|r| r.name()).collect();
    if wanted != given || given.len() != relations.len() {
        return Err(Error::Join(format!(
            "join spec names {wanted:?} but relations {given:?} were supplied"
        )));
    }
    let index: HashMap<&str, usize> = relations.iter().enumerate().map(|(i, r)| (r.name(), i)).collect();

    let mut edges = Vec::with_capacity(spec.conditions.len());
    for cond in &spec.conditions {
        let ((lr, lc), (rr, rc)) = cond.sides()?;
        let li = *index.get(lr).ok_or_else(|| Error::UnknownRelation(lr.to_string()))?;
        let ri = *index.get(rr).ok_or_else(|| Error::UnknownRelation(rr.to_string()))?;
        if li == ri {
            return Err(Error::Join(format!(
                "condition {} = {} joins `{lr}` with itself",
                cond.left, cond.right
            )));
        }
        let lci = relations[li].column_index(lc).ok_or_else(|| relations[li].unknown(lc))?;
        let rci = relations[ri].column_index(rc).ok_or_else(|| relations[ri].unknown(rc))?;
        let (lt, rt) = (
            relations[li].columns()[lci].logical_type(),
            relations[ri].columns()[rci].logical_type(),
        );
        if lt != rt {
            return Err(Error::TypeMismatch(format!(
                "join {} ({lt}) = {} ({rt})",
                cond.left, cond.right
            )));
        }
        edges.push(Edge {
            a: (li, lci),
            b: (ri, rci),
        });
    }

    // BFS order over the join graph; every later relation has an edge into
    // the already joined prefix.
    let mut order = vec![0usize];
    let mut seen = vec![false; relations.len()];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(cur) = queue.pop_front() {
        for e in &edges {
            for (x, y) in [(e.a.0, e.b.0), (e.b.0, e.a.0)] {
                if x == cur && !seen[y] {
                    seen[y] = true;
                    order.push(y);
                    queue.push_back(y);
                }
            }
        }
    }
    if order.len() != relations.len() {
        let missing: Vec<&str> = (0..relations.len())
            .filter(|i| !seen[*i])
            .map(|i| relations[i].name())
            .collect();
        return Err(Error::Join(format!("join graph is disconnected; unreachable: {missing:?}")));
    }

    // rows[i] holds row ids of relations[i] for every joined tuple
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); relations.len()];
    rows[order[0]] = (0..relations[order[0]].row_count() as u32).collect();
    let mut joined = vec![false; relations.len()];
    joined[order[0]] = true;

    for &next in &order[1..] {
        // (probe side: joined relation/column, build side: column of `next`)
        let links: Vec<((usize, usize), usize)> = edges
            .iter()
            .filter_map(|e| {
                if e.b.0 == next && joined[e.a.0] {
                    Some((e.a, e.b.1))
                } else if e.a.0 == next && joined[e.b.0] {
                    Some((e.b, e.a.1))
                } else {
                    None
                }
            })
            .collect();

        // Translate build-side codes into the probe side's dictionary so keys
        // are comparable; values missing there can never match.
        let translations: Vec<Vec<u32>> = links
            .iter()
            .map(|&((pr, pc), bc)| {
                let probe = relations[pr].columns()[pc].dictionary();
                let build = relations[next].columns()[bc].dictionary();
                build
                    .values()
                    .map(|v| probe.find(&v).ok().flatten().unwrap_or(NULL_CODE))
                    .collect()
            })
            .collect();

        let build_rel = relations[next];
        let mut table: HashMap<Vec<u32>, Vec<u32>> = HashMap::new();
        'build: for row in 0..build_rel.row_count() {
            let mut key = Vec::with_capacity(links.len());
            for (k, &(_, bc)) in links.iter().enumerate() {
                let code = build_rel.columns()[bc].codes()[row];
                if code == NULL_CODE {
                    continue 'build;
                }
                let t = translations[k][code as usize];
                if t == NULL_CODE {
                    continue 'build;
                }
                key.push(t);
            }
            table.entry(key).or_default().push(row as u32);
        }

        let tuples = rows[order[0]].len();
        let mut out: Vec<Vec<u32>> = vec![Vec::new(); relations.len()];
        let mut key = Vec::with_capacity(links.len());
        'probe: for t in 0..tuples {
            key.clear();
            for &((pr, pc), _) in &links {
                let code = relations[pr].columns()[pc].codes()[rows[pr][t] as usize];
                if code == NULL_CODE {
                    continue 'probe;
                }
                key.push(code);
            }
            if let Some(matches) = table.get(&key) {
                for &m in matches {
                    for (i, r) in rows.iter().enumerate() {
                        if joined[i] {
                            out[i].push(r[t]);
                        }
                    }
                    out[next].push(m);
                }
            }
        }
        rows = out;
        joined[next] = true;
    }

    let mut columns = Vec::new();
    for (i, rel) in relations.iter().enumerate() {
        for col in rel.columns() {
            columns.push(col.gather_compacted(format!("{}.{}", rel.name(), col.name()), &rows[i]));
        }
    }
    let mut names: Vec<&str> = relations.iter().map(|r| r.name()).collect();
    names.sort_unstable();
    let joined_rel = Relation::new(names.join("_"), columns)?;
    if relations.len() == 1 {
        debug_assert_eq!(joined_rel.row_count(), relations[0].row_count());
    }
    Ok(joined_rel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::storage::{Column, Value};

    fn rel(name: &str, cols: &[(&str, Vec<Option<i64>>)]) -> Relation {
        Relation::new(
            name,
            cols.iter().map(|(n, v)| Column::from_i64(*n, v)).collect(),
        )
        .unwrap()
    }

    fn spec(rels: &[&str], conds: &[(&str, &str)]) -> JoinSpec {
        JoinSpec {
            relations: rels.iter().map(|s| s.to_string()).collect(),
            conditions: conds.iter().map(|(l, r)| JoinPair::new(*l, *r)).collect(),
        }
    }

    #[test]
    fn pk_fk_join_keeps_foreign_side_cardinality() {
        let title = rel("title", &[("id", (0..10).map(Some).collect()), ("year", (0..10).map(|i| Some(1990 + i % 3)).collect())]);
        let mk = rel("mk", &[("movie_id", (0..37).map(|i| Some(i % 10)).collect())]);
        let j = materialize_join(&[&title, &mk], &spec(&["title", "mk"], &[("title.id", "mk.movie_id")])).unwrap();
        assert_eq!(j.row_count(), 37);
        assert_eq!(j.name(), "mk_title");
        assert_eq!(
            j.column_names().collect::<Vec<_>>(),
            ["title.id", "title.year", "mk.movie_id"]
        );
        for r in 0..j.row_count() {
            assert_eq!(j.column("title.id").unwrap().value_at(r), j.column("mk.movie_id").unwrap().value_at(r));
        }
    }

    #[test]
    fn no_matching_keys_gives_empty_result() {
        let a = rel("a", &[("x", vec![Some(1), Some(2)])]);
        let b = rel("b", &[("y", vec![Some(3), None])]);
        let j = materialize_join(&[&a, &b], &spec(&["a", "b"], &[("a.x", "b.y")])).unwrap();
        assert_eq!(j.row_count(), 0);
        assert_eq!(j.column("a.x").unwrap().distinct_count(), 0);
    }

    #[test]
    fn nulls_never_join() {
        let a = rel("a", &[("x", vec![None, Some(1)])]);
        let b = rel("b", &[("y", vec![None, Some(1)])]);
        let j = materialize_join(&[&a, &b], &spec(&["a", "b"], &[("a.x", "b.y")])).unwrap();
        assert_eq!(j.row_count(), 1);
    }

    #[test]
    fn joins_by_value_across_different_dictionaries() {
        let a = rel("a", &[("x", vec![Some(5), Some(7), Some(9)])]);
        let b = rel("b", &[("y", vec![Some(7), Some(1), Some(9), Some(9)])]);
        let j = materialize_join(&[&a, &b], &spec(&["a", "b"], &[("a.x", "b.y")])).unwrap();
        assert_eq!(j.row_count(), 3);
        assert_eq!(j.column("b.y").unwrap().stats().min_value, Some(Value::Int(7)));
    }

    #[test]
    fn disconnected_and_mistyped_joins_fail() {
        let a = rel("a", &[("x", vec![Some(1)])]);
        let b = rel("b", &[("y", vec![Some(1)])]);
        let c = Relation::new("c", vec![Column::from_strings("s", &[Some("1".into())])]).unwrap();
        assert!(matches!(
            materialize_join(&[&a, &b], &spec(&["a", "b"], &[])),
            Err(Error::Join(_))
        ));
        assert!(matches!(
            materialize_join(&[&a, &c], &spec(&["a", "c"], &[("a.x", "c.s")])),
            Err(Error::TypeMismatch(_))
        ));
    }

    #[test]
    fn cyclic_conditions_filter() {
        // a-b on k, b-c on k, and a-c on v closing the cycle
        let a = rel("a", &[("k", vec![Some(1), Some(2)]), ("v", vec![Some(10), Some(20)])]);
        let b = rel("b", &[("k", vec![Some(1), Some(2), Some(2)])]);
        let c = rel("c", &[("k", vec![Some(1), Some(2)]), ("v", vec![Some(10), Some(99)])]);
        let s = spec(&["a", "b", "c"], &[("a.k", "b.k"), ("b.k", "c.k"), ("a.v", "c.v")]);
        let j = materialize_join(&[&a, &b, &c], &s).unwrap();
        assert_eq!(j.row_count(), 1);
    }
}
