use std::sync::Arc;

use thiserror::Error;

use super::{Atom, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    fn new(pos: usize, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    QuoteOpen,
    RBrace,
    LParen,
    RParen,
    Arrow,
    Bar,
    Amp,
    Tilde,
    Box,
    False,
    True,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'}' => {
                i += 1;
                Tok::RBrace
            }
            b'|' => {
                i += 1;
                Tok::Bar
            }
            b'&' => {
                i += 1;
                Tok::Amp
            }
            b'~' => {
                i += 1;
                Tok::Tilde
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::Arrow
            }
            b'[' if bytes.get(i + 1) == Some(&b']') => {
                i += 2;
                Tok::Box
            }
            b'a'..=b'z' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &src[start..i];
                match word {
                    "box" => Tok::Box,
                    "false" => Tok::False,
                    "true" => Tok::True,
                    "q" => {
                        let mut j = i;
                        while j < bytes.len() && bytes[j].is_ascii_whitespace() {
                            j += 1;
                        }
                        if bytes.get(j) == Some(&b'{') {
                            i = j + 1;
                            Tok::QuoteOpen
                        } else {
                            Tok::Ident(word.to_string())
                        }
                    }
                    _ => Tok::Ident(word.to_string()),
                }
            }
            b'{' => return Err(ParseError::new(i, "'{' must follow 'q'")),
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(ParseError::new(i, format!("unexpected character {ch:?}")));
            }
        };
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.imp()?;
            Ok(Formula::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Bar) {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Tok::Box) {
            return Ok(Formula::boxed(self.unary()?));
        }
        if self.eat(&Tok::Tilde) {
            return Ok(Formula::not(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return Err(ParseError::new(pos, "unexpected end of input"));
        };
        self.at += 1;
        match tok {
            Tok::False => Ok(Formula::Bot),
            Tok::True => Ok(Formula::top()),
            Tok::Ident(name) => Ok(Formula::Var(Atom::Base(Arc::from(name.as_str())))),
            Tok::QuoteOpen => {
                let inner = self.imp()?;
                if !self.eat(&Tok::RBrace) {
                    return Err(ParseError::new(self.pos(), "unbalanced quote atom: expected '}'"));
                }
                Ok(Formula::quote(inner))
            }
            Tok::LParen => {
                let inner = self.imp()?;
                if !self.eat(&Tok::RParen) {
                    return Err(ParseError::new(self.pos(), "expected ')'"));
                }
                Ok(inner)
            }
            other => Err(ParseError::new(pos, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses a formula. `~φ` becomes `φ → ⊥` and `true` becomes `⊥ → ⊥`.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
    };
    let f = p.imp()?;
    if p.at != p.toks.len() {
        let msg = if p.peek() == Some(&Tok::RBrace) {
            "unbalanced quote atom: unexpected '}'"
        } else {
            "trailing input"
        };
        return Err(ParseError::new(p.pos(), msg));
    }
    Ok(f)
}
