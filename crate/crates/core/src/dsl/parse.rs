//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! formula := iff
//! iff     := impl ("<->" impl)*
//! impl    := or ("->" impl)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | "box" unary | atom
//! atom    := "T" | "F" | ident | "@" Name ["(" digits ")"] | "(" formula ")"
//! ident   := [a-z][a-z0-9_]*
//! ```

use super::formula::Formula;
use super::registry;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Named(String),
    KwBox,
    Top,
    Bot,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Named(s) => format!("`@{s}`"),
            Tok::KwBox => "`box`".into(),
            Tok::Top => "`T`".into(),
            Tok::Bot => "`F`".into(),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => {
                i += 1;
                Tok::Not
            }
            b'&' => {
                i += 1;
                Tok::And
            }
            b'|' => {
                i += 1;
                Tok::Or
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::Implies
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 3;
                Tok::Iff
            }
            b'T' if !is_word(bytes.get(i + 1)) => {
                i += 1;
                Tok::Top
            }
            b'F' if !is_word(bytes.get(i + 1)) => {
                i += 1;
                Tok::Bot
            }
            b'a'..=b'z' => {
                while i < bytes.len() && matches!(bytes[i], b'a'..=b'z' | b'0'..=b'9' | b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                if word == "box" {
                    Tok::KwBox
                } else {
                    Tok::Ident(word.to_string())
                }
            }
            b'@' => {
                i += 1;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'(' {
                    let close = text[i..].find(')').map(|k| i + k).ok_or_else(|| Error::Syntax {
                        offset: i,
                        found: "unterminated axiom argument".into(),
                        expected: vec!["`)`".into()],
                    })?;
                    i = close + 1;
                }
                if i == start + 1 {
                    return Err(Error::Syntax {
                        offset: start,
                        found: "`@`".into(),
                        expected: vec!["axiom name".into()],
                    });
                }
                Tok::Named(text[start + 1..i].to_string())
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(Error::Syntax {
                    offset: i,
                    found: format!("character `{ch}`"),
                    expected: atom_starts(),
                });
            }
        };
        out.push((start, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

fn is_word(b: Option<&u8>) -> bool {
    matches!(b, Some(c) if c.is_ascii_alphanumeric() || *c == b'_')
}

fn atom_starts() -> Vec<String> {
    ["`~`", "`box`", "`T`", "`F`", "identifier", "`@`axiom", "`(`"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: Vec<String>) -> Error {
        Error::Syntax {
            offset: self.offset(),
            found: self.peek().describe(),
            expected,
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut parts = vec![self.conjunction()?];
        while *self.peek() == Tok::Or {
            self.bump();
            parts.push(self.conjunction()?);
        }
        Ok(Formula::or(parts))
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut parts = vec![self.unary()?];
        while *self.peek() == Tok::And {
            self.bump();
            parts.push(self.unary()?);
        }
        Ok(Formula::and(parts))
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(self.unary()?.not())
            }
            Tok::KwBox => {
                self.bump();
                Ok(self.unary()?.boxed())
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Top => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::Bot => {
                self.bump();
                Ok(Formula::bot())
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Var(name))
            }
            Tok::Named(name) => {
                self.bump();
                registry::formula_for(&name).map_err(|e| match e {
                    Error::UnknownAxiom(_) => Error::Syntax {
                        offset: at,
                        found: format!("unknown axiom `@{name}`"),
                        expected: vec!["registered axiom name".into()],
                    },
                    other => other,
                })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(vec![
                        "`)`".into(),
                        "`&`".into(),
                        "`|`".into(),
                        "`->`".into(),
                        "`<->`".into(),
                    ]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(atom_starts())),
        }
    }
}

/// Parses a formula in the ASCII grammar.
pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.iff()?;
    if *p.peek() != Tok::End {
        return Err(p.error(vec![
            "`&`".into(),
            "`|`".into(),
            "`->`".into(),
            "`<->`".into(),
            "end of input".into(),
        ]));
    }
    Ok(f)
}
