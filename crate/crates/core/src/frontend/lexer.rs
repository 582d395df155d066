//! Indentation-aware tokenizer for the supported Python subset.

use crate::error::{FrontendError, Span};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Name(String),
    Int(String),
    Float(String),
    Imaginary(String),
    Str { value: String, bytes: bool },
    Op(&'static str),
    Newline,
    Indent,
    Dedent,
    Eof,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

const OPS: &[&str] = &[
    "**=", "//=", ">>=", "<<=", "...", "->", ":=", "**", "//", "<<", ">>", "<=", ">=", "==", "!=", "+=", "-=", "*=",
    "/=", "%=", "&=", "|=", "^=", "@=", "+", "-", "*", "/", "%", "@", "&", "|", "^", "~", "<", ">", "(", ")", "[",
    "]", "{", "}", ",", ":", ".", ";", "=", "!",
];

struct Lexer<'a> {
    chars: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
    file: &'a str,
    out: Vec<Token>,
    indents: Vec<usize>,
    depth: usize,
}

pub fn tokenize(src: &str, file: &str) -> Result<Vec<Token>, FrontendError> {
    let mut lx = Lexer {
        chars: src.chars().collect(),
        i: 0,
        line: 1,
        col: 1,
        file,
        out: Vec::new(),
        indents: vec![0],
        depth: 0,
    };
    lx.run()?;
    Ok(lx.out)
}

impl Lexer<'_> {
    fn peek(&self, k: usize) -> Option<char> {
        self.chars.get(self.i + k).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.i).copied()?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn span(&self) -> Span {
        Span { line: self.line, col: self.col }
    }

    fn error(&self, span: Span, message: impl Into<String>) -> FrontendError {
        FrontendError::Syntax { file: self.file.to_string(), span, message: message.into() }
    }

    fn push(&mut self, tok: Tok, span: Span) {
        self.out.push(Token { tok, span });
    }

    fn ends_logical_line(&self) -> bool {
        matches!(
            self.out.last().map(|t| &t.tok),
            None | Some(Tok::Newline) | Some(Tok::Indent) | Some(Tok::Dedent)
        )
    }

    fn run(&mut self) -> Result<(), FrontendError> {
        let mut at_line_start = true;
        loop {
            if at_line_start && self.depth == 0 {
                at_line_start = false;
                if !self.indentation()? {
                    break;
                }
            }
            let Some(c) = self.peek(0) else { break };
            let span = self.span();
            match c {
                ' ' | '\t' | '\x0c' | '\r' => {
                    self.bump();
                }
                '\n' => {
                    self.bump();
                    if self.depth == 0 {
                        if !self.ends_logical_line() {
                            self.push(Tok::Newline, span);
                        }
                        at_line_start = true;
                    }
                }
                '#' => {
                    while let Some(c) = self.peek(0) {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                '\\' if self.peek(1) == Some('\n') || (self.peek(1) == Some('\r') && self.peek(2) == Some('\n')) => {
                    self.bump();
                    while self.peek(0) != Some('\n') {
                        self.bump();
                    }
                    self.bump();
                }
                '"' | '\'' => self.string(String::new(), span)?,
                c if c.is_alphabetic() || c == '_' => {
                    let mut word = String::new();
                    while let Some(c) = self.peek(0) {
                        if c.is_alphanumeric() || c == '_' {
                            word.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    let lower = word.to_ascii_lowercase();
                    let is_prefix = matches!(lower.as_str(), "r" | "b" | "u" | "f" | "rb" | "br" | "fr" | "rf");
                    if is_prefix && matches!(self.peek(0), Some('"') | Some('\'')) {
                        self.string(lower, span)?;
                    } else {
                        self.push(Tok::Name(word), span);
                    }
                }
                c if c.is_ascii_digit() || (c == '.' && self.peek(1).is_some_and(|d| d.is_ascii_digit())) => {
                    self.number(span)
                }
                _ => self.operator(span)?,
            }
        }
        if self.depth > 0 {
            return Err(self.error(self.span(), "unexpected end of file inside brackets"));
        }
        let span = self.span();
        if !self.ends_logical_line() {
            self.push(Tok::Newline, span);
        }
        while self.indents.len() > 1 {
            self.indents.pop();
            self.push(Tok::Dedent, span);
        }
        self.push(Tok::Eof, span);
        Ok(())
    }

    /// Consumes leading whitespace of a line, emitting INDENT/DEDENT. Blank
    /// and comment-only lines are skipped. Returns false at end of input.
    fn indentation(&mut self) -> Result<bool, FrontendError> {
        loop {
            let mut width = 0;
            while let Some(c) = self.peek(0) {
                match c {
                    ' ' => width += 1,
                    '\t' => width = (width / 8 + 1) * 8,
                    '\x0c' | '\r' => {}
                    _ => break,
                }
                self.bump();
            }
            match self.peek(0) {
                None => return Ok(false),
                Some('\n') => {
                    self.bump();
                    continue;
                }
                Some('#') => {
                    while self.peek(0).is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                    continue;
                }
                _ => {}
            }
            let span = self.span();
            let top = *self.indents.last().unwrap();
            if width > top {
                self.indents.push(width);
                self.push(Tok::Indent, span);
            } else if width < top {
                while *self.indents.last().unwrap() > width {
                    self.indents.pop();
                    self.push(Tok::Dedent, span);
                }
                if *self.indents.last().unwrap() != width {
                    return Err(self.error(span, "unindent does not match any outer indentation level"));
                }
            }
            return Ok(true);
        }
    }

    fn string(&mut self, prefix: String, span: Span) -> Result<(), FrontendError> {
        let raw = prefix.contains('r');
        let bytes = prefix.contains('b');
        let quote = self.bump().unwrap();
        let triple = self.peek(0) == Some(quote) && self.peek(1) == Some(quote);
        if triple {
            self.bump();
            self.bump();
        }
        let mut value = String::new();
        loop {
            let Some(c) = self.bump() else {
                return Err(self.error(span, "unterminated string literal"));
            };
            if c == quote {
                if !triple {
                    break;
                }
                if self.peek(0) == Some(quote) && self.peek(1) == Some(quote) {
                    self.bump();
                    self.bump();
                    break;
                }
                value.push(c);
                continue;
            }
            if c == '\n' && !triple {
                return Err(self.error(span, "unterminated string literal"));
            }
            if c == '\\' {
                let Some(next) = self.bump() else {
                    return Err(self.error(span, "unterminated string literal"));
                };
                if raw {
                    value.push('\\');
                    value.push(next);
                } else {
                    match next {
                        'n' => value.push('\n'),
                        't' => value.push('\t'),
                        '\n' => {}
                        other => value.push(other),
                    }
                }
                continue;
            }
            value.push(c);
        }
        self.push(Tok::Str { value, bytes }, span);
        Ok(())
    }

    fn number(&mut self, span: Span) {
        let mut text = String::new();
        let mut is_float = false;
        let radix_prefix = self.peek(0) == Some('0') && matches!(self.peek(1), Some('x' | 'X' | 'o' | 'O' | 'b' | 'B'));
        while let Some(c) = self.peek(0) {
            let exp_sign = (c == '+' || c == '-') && !radix_prefix && text.ends_with(['e', 'E']);
            if c.is_ascii_alphanumeric() || c == '_' || exp_sign || (c == '.' && !radix_prefix) {
                if c == '.' || (!radix_prefix && (c == 'e' || c == 'E')) {
                    is_float = true;
                }
                if c == 'j' || c == 'J' {
                    text.push(c);
                    self.bump();
                    self.push(Tok::Imaginary(text), span);
                    return;
                }
                text.push(c);
                self.bump();
            } else {
                break;
            }
        }
        let tok = if is_float { Tok::Float(text) } else { Tok::Int(text) };
        self.push(tok, span);
    }

    fn operator(&mut self, span: Span) -> Result<(), FrontendError> {
        for op in OPS {
            if op.chars().enumerate().all(|(k, c)| self.peek(k) == Some(c)) {
                for _ in 0..op.chars().count() {
                    self.bump();
                }
                match *op {
                    "(" | "[" | "{" => self.depth += 1,
                    ")" | "]" | "}" => {
                        if self.depth == 0 {
                            return Err(self.error(span, format!("unmatched '{op}'")));
                        }
                        self.depth -= 1;
                    }
                    _ => {}
                }
                self.push(Tok::Op(op), span);
                return Ok(());
            }
        }
        Err(self.error(span, format!("unexpected character {:?}", self.peek(0).unwrap())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Tok> {
        tokenize(src, "t.py").unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn indentation_tokens() {
        let toks = kinds("class A:\n    x = 1\n\n    # c\ny = 2\n");
        assert_eq!(
            toks,
            vec![
                Tok::Name("class".into()),
                Tok::Name("A".into()),
                Tok::Op(":"),
                Tok::Newline,
                Tok::Indent,
                Tok::Name("x".into()),
                Tok::Op("="),
                Tok::Int("1".into()),
                Tok::Newline,
                Tok::Dedent,
                Tok::Name("y".into()),
                Tok::Op("="),
                Tok::Int("2".into()),
                Tok::Newline,
                Tok::Eof,
            ]
        );
    }

    #[test]
    fn brackets_join_lines() {
        let toks = kinds("f(a,\n  b)\n");
        assert!(!toks[..toks.len() - 2].contains(&Tok::Newline));
    }

    #[test]
    fn strings_and_numbers() {
        let toks = kinds("x = f'a{b}' + b\"z\" + '''q\nr''' + 1.5e-3 + 2j + 0x1F\n");
        assert!(toks.contains(&Tok::Str { value: "a{b}".into(), bytes: false }));
        assert!(toks.contains(&Tok::Str { value: "z".into(), bytes: true }));
        assert!(toks.contains(&Tok::Str { value: "q\nr".into(), bytes: false }));
        assert!(toks.contains(&Tok::Float("1.5e-3".into())));
        assert!(toks.contains(&Tok::Imaginary("2j".into())));
        assert!(toks.contains(&Tok::Int("0x1F".into())));
    }

    #[test]
    fn reports_bad_dedent() {
        let err = tokenize("if x:\n    a\n  b\n", "m.py").unwrap_err();
        assert!(matches!(err, FrontendError::Syntax { span: Span { line: 3, .. }, .. }), "{err}");
    }

    #[test]
    fn reports_unterminated_string() {
        assert!(tokenize("x = 'abc\n", "m.py").is_err());
        assert!(tokenize("x = (1,\n", "m.py").is_err());
    }
}
