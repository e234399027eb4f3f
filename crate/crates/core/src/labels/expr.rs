// Licensed to the Apache Software Foundation (ASF) under one
// or more contributor license agreements.  See the NOTICE file
// distributed with this work for additional information
// regarding copyright ownership.  The ASF licenses this file
// to you under the Apache License, Version 2.0 (the
// "License"); you may not use this file except in compliance
// with the License.  You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing,
// software distributed under the License is distributed on an
// "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, either express or implied.  See the License for the
// specific language governing permissions and limitations
// under the License.

//! Boolean expressions over vertex labels.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr   := term ('|' term)*
//! term   := factor ('&' factor)*
//! factor := '!' factor | '(' expr ')' | IDENT
//! ```

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{GarError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LabelExpr {
    Atom(String),
    Not(Box<LabelExpr>),
    And(Box<LabelExpr>, Box<LabelExpr>),
    Or(Box<LabelExpr>, Box<LabelExpr>),
}

impl LabelExpr {
    pub fn atom(name: impl Into<String>) -> Self {
        LabelExpr::Atom(name.into())
    }

    pub fn negate(e: LabelExpr) -> Self {
        LabelExpr::Not(Box::new(e))
    }

    pub fn and(a: LabelExpr, b: LabelExpr) -> Self {
        LabelExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: LabelExpr, b: LabelExpr) -> Self {
        LabelExpr::Or(Box::new(a), Box::new(b))
    }

    /// Distinct atom names in sorted order.
    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            LabelExpr::Atom(a) => {
                out.insert(a);
            }
            LabelExpr::Not(e) => e.collect_atoms(out),
            LabelExpr::And(a, b) | LabelExpr::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Evaluates with `value(atom)` supplying each label's truth.
    pub fn eval(&self, value: &mut impl FnMut(&str) -> bool) -> bool {
        match self {
            LabelExpr::Atom(a) => value(a),
            LabelExpr::Not(e) => !e.eval(value),
            LabelExpr::And(a, b) => a.eval(value) && b.eval(value),
            LabelExpr::Or(a, b) => a.eval(value) || b.eval(value),
        }
    }
}

impl fmt::Display for LabelExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelExpr::Atom(a) => f.write_str(a),
            LabelExpr::Not(e) => match **e {
                LabelExpr::Atom(_) | LabelExpr::Not(_) => write!(f, "!{e}"),
                _ => write!(f, "!({e})"),
            },
            LabelExpr::And(a, b) => {
                let wrap = |e: &LabelExpr| matches!(e, LabelExpr::Or(..));
                if wrap(a) {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                f.write_str("&")?;
                if wrap(b) || matches!(**b, LabelExpr::And(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            LabelExpr::Or(a, b) => {
                write!(f, "{a}|")?;
                if matches!(**b, LabelExpr::Or(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

impl std::str::FromStr for LabelExpr {
    type Err = GarError;

    fn from_str(s: &str) -> Result<Self> {
        parse_label_expr(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Not,
    And,
    Or,
    Open,
    Close,
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end_column: usize,
}

fn syntax(column: usize, message: impl Into<String>) -> GarError {
    GarError::ExprSyntax {
        column,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '!' => Token::Not,
            '&' => Token::And,
            '|' => Token::Or,
            '(' => Token::Open,
            ')' => Token::Close,
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                tokens.push((Token::Ident(chars[start..i].iter().collect()), column));
                continue;
            }
            other => return Err(syntax(column, format!("unexpected character `{other}`"))),
        };
        tokens.push((tok, column));
        i += 1;
    }
    Ok(tokens)
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_column, |&(_, c)| c)
    }

    fn expr(&mut self) -> Result<LabelExpr> {
        let mut left = self.term()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            left = LabelExpr::or(left, self.term()?);
        }
        Ok(left)
    }

    fn term(&mut self) -> Result<LabelExpr> {
        let mut left = self.factor()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            left = LabelExpr::and(left, self.factor()?);
        }
        Ok(left)
    }

    fn factor(&mut self) -> Result<LabelExpr> {
        let column = self.column();
        match self.tokens.get(self.pos).map(|(t, _)| t.clone()) {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(LabelExpr::negate(self.factor()?))
            }
            Some(Token::Open) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(syntax(self.column(), "expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(LabelExpr::Atom(name))
            }
            Some(_) => Err(syntax(column, "expected a label, `!` or `(`")),
            None => Err(syntax(column, "unexpected end of expression")),
        }
    }
}

/// Parses label-expression text. Unknown labels are only detected when the
/// expression is evaluated against columns.
pub fn parse_label_expr(text: &str) -> Result<LabelExpr> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        end_column: text.chars().count() + 1,
    };
    let e = parser.expr()?;
    if parser.pos < parser.tokens.len() {
        return Err(syntax(parser.column(), "unexpected trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col_of(text: &str) -> usize {
        match parse_label_expr(text) {
            Err(GarError::ExprSyntax { column, .. }) => column,
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn conjunction() {
        assert_eq!(
            parse_label_expr("Asian&Enrollee").unwrap(),
            LabelExpr::and(LabelExpr::atom("Asian"), LabelExpr::atom("Enrollee"))
        );
    }

    #[test]
    fn precedence_and_grouping() {
        let e = parse_label_expr("(Asian&!Enrollee)|Student").unwrap();
        let want = LabelExpr::or(
            LabelExpr::and(LabelExpr::atom("Asian"), LabelExpr::negate(LabelExpr::atom("Enrollee"))),
            LabelExpr::atom("Student"),
        );
        assert_eq!(e, want);
        assert_eq!(parse_label_expr("Asian&!Enrollee|Student").unwrap(), want);
        let tight = parse_label_expr("A|B&C").unwrap();
        assert_eq!(
            tight,
            LabelExpr::or(
                LabelExpr::atom("A"),
                LabelExpr::and(LabelExpr::atom("B"), LabelExpr::atom("C"))
            )
        );
    }

    #[test]
    fn syntax_errors_carry_columns() {
        assert_eq!(col_of("A&&B"), 3);
        assert_eq!(col_of("(A|B"), 5);
        assert_eq!(col_of(""), 1);
        assert_eq!(col_of("A B"), 3);
        assert_eq!(col_of("A$"), 2);
    }

    #[test]
    fn display_reparses() {
        for text in ["(Asian&!Enrollee)|Student", "!(A|B)&C", "A&(B&C)", "!!A", "A|(B|C)"] {
            let e = parse_label_expr(text).unwrap();
            assert_eq!(parse_label_expr(&e.to_string()).unwrap(), e, "{text}");
        }
    }

    #[test]
    fn atoms_are_collected() {
        let e = parse_label_expr("B&!(A|B)").unwrap();
        assert_eq!(e.atoms().into_iter().collect::<Vec<_>>(), vec!["A", "B"]);
    }
}
