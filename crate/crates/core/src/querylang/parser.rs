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

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use super::ast::{CountQuery, JoinCondition, Operator, Predicate};
use crate::storage::Value;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownOperator(String),
    NonCountAggregate(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(m) => f.write_str(m),
            ParseErrorKind::UnknownOperator(op) => write!(f, "unknown operator `{op}`"),
            ParseErrorKind::NonCountAggregate(agg) => {
                write!(f, "unsupported aggregate `{agg}`, only COUNT(*) is allowed")
            }
        }
    }
}

/// Parse failure with its byte offset (and workload line, when known).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub position: usize,
    pub line: Option<usize>,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}, ")?;
        }
        write!(f, "byte {}: {}", self.position, self.kind)
    }
}

impl ParseError {
    fn syntax(position: usize, msg: impl Into<String>) -> Self {
        ParseError {
            position,
            line: None,
            kind: ParseErrorKind::Syntax(msg.into()),
        }
    }

    pub(crate) fn at_line(mut self, line: usize) -> Self {
        self.line = Some(line);
        self
    }
}

type PResult<T> = Result<T, ParseError>;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Str(String),
    Op(String),
    Comma,
    Dot,
    LParen,
    RParen,
    Star,
    Semi,
}

fn describe(t: Option<&(usize, Tok)>) -> String {
    match t {
        None => "end of input".into(),
        Some((_, Tok::Ident(s))) => format!("`{s}`"),
        Some((_, Tok::Number(s))) => format!("number `{s}`"),
        Some((_, Tok::Str(s))) => format!("string '{s}'"),
        Some((_, Tok::Op(s))) => format!("`{s}`"),
        Some((_, Tok::Comma)) => "`,`".into(),
        Some((_, Tok::Dot)) => "`.`".into(),
        Some((_, Tok::LParen)) => "`(`".into(),
        Some((_, Tok::RParen)) => "`)`".into(),
        Some((_, Tok::Star)) => "`*`".into(),
        Some((_, Tok::Semi)) => "`;`".into(),
    }
}

fn tokenize(text: &str) -> PResult<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b',' => {
                out.push((start, Tok::Comma));
                i += 1;
            }
            b'.' if !bytes.get(i + 1).is_some_and(u8::is_ascii_digit) => {
                out.push((start, Tok::Dot));
                i += 1;
            }
            b'(' => {
                out.push((start, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((start, Tok::RParen));
                i += 1;
            }
            b'*' => {
                out.push((start, Tok::Star));
                i += 1;
            }
            b';' => {
                out.push((start, Tok::Semi));
                i += 1;
            }
            b'=' | b'!' | b'<' | b'>' => {
                while i < bytes.len() && matches!(bytes[i], b'=' | b'!' | b'<' | b'>') {
                    i += 1;
                }
                out.push((start, Tok::Op(text[start..i].to_string())));
            }
            b'\'' => {
                let mut s = String::new();
                i += 1;
                loop {
                    match text[i..].find('\'') {
                        None => return Err(ParseError::syntax(start, "unterminated string literal")),
                        Some(off) => {
                            s.push_str(&text[i..i + off]);
                            i += off + 1;
                            if bytes.get(i) == Some(&b'\'') {
                                s.push('\'');
                                i += 1;
                            } else {
                                break;
                            }
                        }
                    }
                }
                out.push((start, Tok::Str(s)));
            }
            b'-' | b'+' | b'0'..=b'9' | b'.' => {
                if matches!(c, b'-' | b'+') {
                    i += 1;
                }
                let digits_start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && matches!(bytes[i], b'e' | b'E') {
                    i += 1;
                    if i < bytes.len() && matches!(bytes[i], b'+' | b'-') {
                        i += 1;
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i == digits_start {
                    return Err(ParseError::syntax(start, "expected a number"));
                }
                out.push((start, Tok::Number(text[start..i].to_string())));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError::syntax(start, format!("unexpected character `{ch}`")));
            }
        }
    }
    Ok(out)
}

/// A parsed statement: an original COUNT(*) query or a rewritten
/// `SUM(cnt)` query against a grouping set.
#[derive(Debug, Clone, PartialEq)]
pub enum Executable {
    Count(CountQuery),
    GroupingSet {
        name: String,
        predicates: Vec<Predicate>,
    },
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(usize, Tok)> {
        self.toks.get(self.pos)
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.end, |(p, _)| *p)
    }

    fn next(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn unexpected<T>(&self, expected: &str) -> PResult<T> {
        Err(ParseError::syntax(
            self.offset(),
            format!("expected {expected}, found {}", describe(self.peek())),
        ))
    }

    fn keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some((_, Tok::Ident(s))) if s.eq_ignore_ascii_case(kw))
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<()> {
        if self.keyword(kw) {
            self.pos += 1;
            Ok(())
        } else {
            self.unexpected(kw)
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if self.peek().map(|(_, t)| t) == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.unexpected(what)
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Some((_, Tok::Ident(s))) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.unexpected("identifier"),
        }
    }

    fn attribute(&mut self) -> PResult<String> {
        let first = self.ident()?;
        if self.peek().map(|(_, t)| t) == Some(&Tok::Dot) {
            self.pos += 1;
            let second = self.ident()?;
            Ok(format!("{first}.{second}"))
        } else {
            Ok(first)
        }
    }

    fn literal(&mut self) -> PResult<Value> {
        match self.next() {
            Some((p, Tok::Number(n))) => {
                let is_float = n.contains(['.', 'e', 'E']);
                if is_float {
                    match n.parse::<f64>() {
                        Ok(v) if v.is_finite() => Ok(Value::Float(v)),
                        _ => Err(ParseError::syntax(p, format!("invalid float `{n}`"))),
                    }
                } else {
                    n.parse::<i64>()
                        .map(Value::Int)
                        .map_err(|_| ParseError::syntax(p, format!("integer `{n}` out of range")))
                }
            }
            Some((_, Tok::Str(s))) => Ok(Value::Str(s)),
            _ => {
                self.pos -= 1;
                self.unexpected("literal or attribute")
            }
        }
    }

    /// `SELECT <agg> FROM` prefix; returns whether the aggregate is SUM(cnt).
    fn head(&mut self) -> PResult<bool> {
        self.expect_keyword("SELECT")?;
        let at = self.offset();
        let agg = self.ident()?;
        if agg.eq_ignore_ascii_case("COUNT") {
            self.expect(Tok::LParen, "`(`")?;
            self.expect(Tok::Star, "`*`")?;
            self.expect(Tok::RParen, "`)`")?;
            Ok(false)
        } else if agg.eq_ignore_ascii_case("SUM") && self.toks.get(self.pos + 1).map(|t| &t.1) == Some(&Tok::Ident("cnt".into())) {
            self.expect(Tok::LParen, "`(`")?;
            self.ident()?;
            self.expect(Tok::RParen, "`)`")?;
            Ok(true)
        } else if matches!(
            agg.to_ascii_uppercase().as_str(),
            "SUM" | "AVG" | "MIN" | "MAX"
        ) {
            Err(ParseError {
                position: at,
                line: None,
                kind: ParseErrorKind::NonCountAggregate(agg),
            })
        } else {
            self.pos -= 1;
            self.unexpected("COUNT(*)")
        }
    }

    fn statement(&mut self) -> PResult<(bool, CountQuery)> {
        let is_sum = self.head()?;
        self.expect_keyword("FROM")?;
        let mut q = CountQuery::default();
        loop {
            let at = self.offset();
            let rel = self.ident()?;
            if q.relations.contains(&rel) {
                return Err(ParseError::syntax(at, format!("relation `{rel}` listed twice")));
            }
            q.relations.push(rel);
            if self.peek().map(|(_, t)| t) == Some(&Tok::Comma) {
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.keyword("WHERE") {
            self.pos += 1;
            loop {
                self.condition(&mut q)?;
                if self.keyword("AND") {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        if self.peek().map(|(_, t)| t) == Some(&Tok::Semi) {
            self.pos += 1;
        }
        if self.peek().is_some() {
            return self.unexpected("end of query");
        }
        Ok((is_sum, q))
    }

    fn condition(&mut self, q: &mut CountQuery) -> PResult<()> {
        let attribute = self.attribute()?;
        let op = match self.next() {
            Some((p, Tok::Op(s))) => {
                Operator::from_symbol(&s).ok_or(ParseError {
                    position: p,
                    line: None,
                    kind: ParseErrorKind::UnknownOperator(s),
                })?
            }
            _ => {
                self.pos -= 1;
                return self.unexpected("comparison operator");
            }
        };
        if let Some((at, Tok::Ident(_))) = self.peek() {
            let at = *at;
            let right = self.attribute()?;
            if op != Operator::Eq {
                return Err(ParseError::syntax(at, "join conditions must use `=`"));
            }
            q.joins.push(JoinCondition::new(attribute, right));
        } else {
            let literal = self.literal()?;
            q.predicates.push(Predicate { attribute, op, literal });
        }
        Ok(())
    }
}

fn run(text: &str) -> PResult<(bool, CountQuery)> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        end: text.len(),
    };
    let (is_sum, mut q) = p.statement()?;

    // Qualify bare attributes in single-relation queries and check that
    // qualifiers name listed relations.
    let rels: HashSet<&str> = q.relations.iter().map(String::as_str).collect();
    let single = (q.relations.len() == 1).then(|| q.relations[0].clone());
    let fix = |attr: &mut String| -> PResult<()> {
        match attr.split_once('.') {
            Some((r, _)) if !rels.contains(r) => Err(ParseError::syntax(
                0,
                format!("attribute `{attr}` refers to a relation not in FROM"),
            )),
            Some(_) => Ok(()),
            None => {
                if let Some(rel) = &single {
                    *attr = format!("{rel}.{attr}");
                }
                Ok(())
            }
        }
    };
    if !is_sum {
        for p in &mut q.predicates {
            fix(&mut p.attribute)?;
        }
        for j in &mut q.joins {
            fix(&mut j.left)?;
            fix(&mut j.right)?;
        }
    }
    Ok((is_sum, q))
}

/// Parses a `SELECT COUNT(*)` query. Rewritten `SUM(cnt)` forms are
/// rejected.
pub fn parse_query(text: &str) -> PResult<CountQuery> {
    match run(text)? {
        (false, q) => Ok(q),
        (true, _) => Err(ParseError {
            position: 0,
            line: None,
            kind: ParseErrorKind::NonCountAggregate("SUM".into()),
        }),
    }
}

/// Parses either an original query or a rewritten grouping-set query.
pub fn parse_executable(text: &str) -> PResult<Executable> {
    match run(text)? {
        (false, q) => Ok(Executable::Count(q)),
        (true, q) => {
            if q.relations.len() != 1 || !q.joins.is_empty() {
                return Err(ParseError::syntax(0, "SUM(cnt) queries read exactly one grouping set"));
            }
            Ok(Executable::GroupingSet {
                name: q.relations[0].clone(),
                predicates: q.predicates,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_table_query() {
        let q = parse_query("SELECT COUNT(*) FROM cars WHERE cars.brand = 'VW' AND cars.year >= 2010;").unwrap();
        assert_eq!(q.relations, ["cars"]);
        assert!(q.joins.is_empty());
        assert_eq!(
            q.predicates,
            vec![
                Predicate::new("cars.brand", Operator::Eq, "VW"),
                Predicate::new("cars.year", Operator::Ge, 2010),
            ]
        );
    }

    #[test]
    fn two_table_query() {
        let q = parse_query("SELECT COUNT(*) FROM t1, t2 WHERE t1.id = t2.fk AND t2.x < 5;").unwrap();
        assert_eq!(q.relations, ["t1", "t2"]);
        assert_eq!(q.joins, vec![JoinCondition::new("t1.id", "t2.fk")]);
        assert_eq!(q.predicates, vec![Predicate::new("t2.x", Operator::Lt, 5)]);
    }

    #[test]
    fn keywords_are_case_insensitive_and_whitespace_free() {
        let a = parse_query("select count ( * )from cars where year<=2010.5").unwrap();
        let b = parse_query("SELECT COUNT(*) FROM cars WHERE cars.year <= 2010.5;").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn literals() {
        let q = parse_query("SELECT COUNT(*) FROM t WHERE a = -3 AND b > 1e3 AND c != 'O''Brien' AND d < .5").unwrap();
        let lits: Vec<_> = q.predicates.iter().map(|p| p.literal.clone()).collect();
        assert_eq!(
            lits,
            vec![
                Value::Int(-3),
                Value::Float(1000.0),
                Value::Str("O'Brien".into()),
                Value::Float(0.5)
            ]
        );
    }

    #[test]
    fn unknown_operator_has_position() {
        let e = parse_query("SELECT COUNT(*) FROM t WHERE a <> 3").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownOperator("<>".into()));
        assert_eq!(e.position, 31);
        let e = parse_query("SELECT COUNT(*) FROM t WHERE a == 3").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::UnknownOperator(_)));
    }

    #[test]
    fn other_aggregates_are_rejected() {
        for text in ["SELECT SUM(x) FROM t", "SELECT MAX(x) FROM t", "SELECT SUM(cnt) FROM gs_t"] {
            let e = parse_query(text).unwrap_err();
            assert!(matches!(e.kind, ParseErrorKind::NonCountAggregate(_)), "{text}");
        }
    }

    #[test]
    fn syntax_errors() {
        for text in [
            "SELECT COUNT(*) t",
            "SELECT COUNT(*) FROM t WHERE",
            "SELECT COUNT(*) FROM t WHERE a = 1 OR b = 2",
            "SELECT COUNT(*) FROM t WHERE a = 'x",
            "SELECT COUNT(*) FROM t, t",
            "SELECT COUNT(*) FROM t1, t2 WHERE t1.a < t2.b",
            "SELECT COUNT(*) FROM t WHERE u.a = 1",
            "SELECT COUNT(*) FROM t WHERE a = 1; extra",
        ] {
            let e = parse_query(text).unwrap_err();
            assert!(matches!(e.kind, ParseErrorKind::Syntax(_)), "{text}: {e}");
        }
    }

    #[test]
    fn executable_forms() {
        match parse_executable("SELECT SUM(cnt) FROM gs_cars WHERE cars.brand = 'VW';").unwrap() {
            Executable::GroupingSet { name, predicates } => {
                assert_eq!(name, "gs_cars");
                assert_eq!(predicates, vec![Predicate::new("cars.brand", Operator::Eq, "VW")]);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_executable("SELECT COUNT(*) FROM t").unwrap(),
            Executable::Count(_)
        ));
    }
}
