//! Parser for the canonical text rendering.
//!
//! Identifiers bound by an enclosing `∀`/`∃` (or passed in as free
//! variables) read as variables; every other identifier is an atom, except
//! `Any`. Both the ASCII (`->`, `x`, `...`) and Unicode (`→`, `×`, `…`)
//! operators are accepted.

use std::collections::BTreeSet;

use super::expr::{Record, TypeExpr};
use crate::error::TypeError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Forall,
    Exists,
    Dot,
    Comma,
    Colon,
    Sub,
    Arrow,
    Times,
    Plus,
    Ellipsis,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '′'
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, TypeError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let next = chars.get(i + 1).map(|x| x.1);
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '∀' => Tok::Forall,
            '∃' => Tok::Exists,
            '→' => Tok::Arrow,
            '×' => Tok::Times,
            '…' => Tok::Ellipsis,
            '+' => Tok::Plus,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '-' if next == Some('>') => {
                i += 1;
                Tok::Arrow
            }
            '<' if next == Some(':') => {
                i += 1;
                Tok::Sub
            }
            '.' => {
                if next == Some('.') && chars.get(i + 2).map(|x| x.1) == Some('.') {
                    i += 2;
                    Tok::Ellipsis
                } else {
                    Tok::Dot
                }
            }
            c if is_ident_char(c) => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i].1) {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|x| x.1).collect();
                out.push((pos, Tok::Ident(s)));
                continue;
            }
            other => {
                return Err(TypeError::Parse { offset: pos, message: format!("unexpected character {other:?}") });
            }
        };
        out.push((pos, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    scope: Vec<String>,
}

pub fn parse_type(src: &str) -> Result<TypeExpr, TypeError> {
    parse_type_with_vars(src, &BTreeSet::new())
}

/// Parses with `free` treated as type variables in addition to any bound ones.
pub fn parse_type_with_vars(src: &str, free: &BTreeSet<String>) -> Result<TypeExpr, TypeError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end: src.len(), scope: free.iter().cloned().collect() };
    let e = p.quant()?;
    if p.pos != p.toks.len() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn error(&self, message: &str) -> TypeError {
        TypeError::Parse { offset: self.offset(), message: message.to_string() }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), TypeError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {what}")))
        }
    }

    fn ident(&mut self) -> Result<String, TypeError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error("expected identifier")),
        }
    }

    fn is_times(&self) -> bool {
        matches!(self.peek(), Some(Tok::Times)) || matches!(self.peek(), Some(Tok::Ident(s)) if s == "x")
    }

    fn quant(&mut self) -> Result<TypeExpr, TypeError> {
        if self.eat(&Tok::Forall) {
            let mut vars = vec![self.ident()?];
            while self.eat(&Tok::Comma) {
                vars.push(self.ident()?);
            }
            self.expect(&Tok::Dot, "'.' after quantifier")?;
            let n = self.scope.len();
            self.scope.extend(vars.iter().cloned());
            let body = self.quant();
            self.scope.truncate(n);
            return Ok(TypeExpr::Forall(vars, Box::new(body?)));
        }
        if self.eat(&Tok::Exists) {
            let var = self.ident()?;
            self.scope.push(var.clone());
            let result = (|| {
                let bound = if self.eat(&Tok::Sub) { Some(Box::new(self.primary()?)) } else { None };
                self.expect(&Tok::Dot, "'.' after quantifier")?;
                let body = self.quant()?;
                Ok(TypeExpr::Exists { var: var.clone(), bound, body: Box::new(body) })
            })();
            self.scope.pop();
            return result;
        }
        self.arrow()
    }

    fn arrow(&mut self) -> Result<TypeExpr, TypeError> {
        let lhs = self.sum()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.quant()?;
            return Ok(TypeExpr::func(lhs, rhs));
        }
        Ok(lhs)
    }

    fn sum(&mut self) -> Result<TypeExpr, TypeError> {
        let first = self.product()?;
        if self.peek() != Some(&Tok::Plus) {
            return Ok(first);
        }
        let mut alts = vec![first];
        while self.eat(&Tok::Plus) {
            alts.push(self.product()?);
        }
        Ok(TypeExpr::Sum(alts))
    }

    fn product(&mut self) -> Result<TypeExpr, TypeError> {
        let first = self.primary()?;
        if !self.is_times() {
            return Ok(first);
        }
        let mut factors = vec![first];
        while self.is_times() {
            self.pos += 1;
            factors.push(self.primary()?);
        }
        Ok(TypeExpr::Product(factors))
    }

    fn primary(&mut self) -> Result<TypeExpr, TypeError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.quant()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(Tok::LBrace) => {
                self.pos += 1;
                self.record()
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat(&Tok::LBracket) {
                    let mut args = Vec::new();
                    let mut variadic = false;
                    if !self.eat(&Tok::RBracket) {
                        loop {
                            if self.eat(&Tok::Ellipsis) {
                                variadic = true;
                                self.expect(&Tok::RBracket, "']' after '...'")?;
                                break;
                            }
                            args.push(self.quant()?);
                            if self.eat(&Tok::RBracket) {
                                break;
                            }
                            self.expect(&Tok::Comma, "',' or ']'")?;
                        }
                    }
                    if variadic && args.len() != 1 {
                        return Err(self.error("variadic application takes exactly one element type"));
                    }
                    return Ok(TypeExpr::Apply { ctor: name, args, variadic });
                }
                if name == "Any" {
                    Ok(TypeExpr::Any)
                } else if self.scope.contains(&name) {
                    Ok(TypeExpr::Var(name))
                } else {
                    Ok(TypeExpr::Atom(name))
                }
            }
            _ => Err(self.error("expected a type")),
        }
    }

    fn record(&mut self) -> Result<TypeExpr, TypeError> {
        let mut rec = Record::closed();
        if self.eat(&Tok::RBrace) {
            return Ok(rec.into());
        }
        loop {
            if self.eat(&Tok::Ellipsis) {
                rec.open = true;
                self.expect(&Tok::RBrace, "'}' after '...'")?;
                return Ok(rec.into());
            }
            let name = self.ident()?;
            self.expect(&Tok::Colon, "':' after member name")?;
            let ty = self.quant()?;
            if rec.fields.insert(name.clone(), ty).is_some() {
                return Err(self.error(&format!("duplicate member {name}")));
            }
            if self.eat(&Tok::RBrace) {
                return Ok(rec.into());
            }
            self.expect(&Tok::Comma, "',' or '}'")?;
        }
    }
}
