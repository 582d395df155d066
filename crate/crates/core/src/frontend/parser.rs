//! Recursive-descent parser over the token stream. Module and class bodies
//! are parsed into statements; function bodies are only scanned for
//! assignments to `self` attributes; other compound statements are skipped.

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use crate::error::{FrontendError, Span};

const COMPOUND_SKIPPED: &[&str] = &["if", "while", "for", "try", "with", "elif", "else", "except", "finally"];
const SIMPLE_SKIPPED: &[&str] =
    &["return", "raise", "del", "global", "nonlocal", "assert", "break", "continue", "yield"];
const KEYWORDS: &[&str] = &[
    "False", "None", "True", "and", "as", "assert", "async", "await", "break", "class", "continue", "def", "del", "elif",
    "else", "except", "finally", "for", "from", "global", "if", "import", "in", "is", "lambda", "nonlocal", "not", "or",
    "pass", "raise", "return", "try", "while", "with", "yield",
];

pub fn parse_source(src: &str, file: &str) -> Result<Vec<Stmt>, FrontendError> {
    let toks = tokenize(src, file)?;
    let mut p = Parser { toks, pos: 0, file };
    let mut out = Vec::new();
    while !p.at(&Tok::Eof) {
        p.statement(&mut out)?;
    }
    Ok(out)
}

/// Parses a standalone expression, as found in string annotations.
pub fn parse_expression(src: &str, file: &str) -> Result<Expr, FrontendError> {
    let toks = tokenize(src.trim(), file)?;
    let mut p = Parser { toks, pos: 0, file };
    let e = p.test()?;
    p.eat(&Tok::Newline);
    if !p.at(&Tok::Eof) {
        return Err(p.error("trailing input in expression"));
    }
    Ok(e)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    file: &'a str,
}

type PResult<T> = Result<T, FrontendError>;

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos.min(self.toks.len() - 1)].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos.min(self.toks.len() - 1)].span
    }

    fn advance(&mut self) -> Tok {
        let t = self.peek().clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn at(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    fn at_op(&self, op: &str) -> bool {
        matches!(self.peek(), Tok::Op(o) if *o == op)
    }

    fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Name(n) if n == kw)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn eat_op(&mut self, op: &str) -> bool {
        if self.at_op(op) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.at_kw(kw) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn error(&self, message: impl Into<String>) -> FrontendError {
        FrontendError::Syntax { file: self.file.to_string(), span: self.span(), message: message.into() }
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Name(n) => format!("'{n}'"),
            Tok::Int(s) | Tok::Float(s) | Tok::Imaginary(s) => format!("number {s}"),
            Tok::Str { .. } => "string".into(),
            Tok::Op(o) => format!("'{o}'"),
            Tok::Newline => "end of line".into(),
            Tok::Indent => "indent".into(),
            Tok::Dedent => "dedent".into(),
            Tok::Eof => "end of file".into(),
        }
    }

    fn expect_op(&mut self, op: &str) -> PResult<()> {
        if self.eat_op(op) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{op}', found {}", self.describe())))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Name(n) if !KEYWORDS.contains(&n.as_str()) => {
                self.advance();
                Ok(n)
            }
            _ => Err(self.error(format!("expected a name, found {}", self.describe()))),
        }
    }

    fn end_of_simple(&mut self) -> PResult<()> {
        if self.eat(&Tok::Newline) || self.at(&Tok::Eof) || self.eat_op(";") {
            return Ok(());
        }
        Err(self.error(format!("expected end of statement, found {}", self.describe())))
    }

    /// Skips to the end of the current logical line.
    fn skip_line(&mut self) {
        while !self.at(&Tok::Newline) && !self.at(&Tok::Eof) {
            self.advance();
        }
        self.eat(&Tok::Newline);
    }

    /// Skips a compound statement: its header up to the block colon and its block.
    fn skip_compound(&mut self) -> PResult<()> {
        let mut depth = 0usize;
        loop {
            match self.peek() {
                Tok::Eof | Tok::Newline => return Err(self.error("expected ':' ending a compound statement header")),
                Tok::Op("(" | "[" | "{") => depth += 1,
                Tok::Op(")" | "]" | "}") => depth = depth.saturating_sub(1),
                Tok::Op(":") if depth == 0 => {
                    self.advance();
                    break;
                }
                Tok::Name(n) if n == "lambda" => {
                    // lambda parameters end in their own colon
                    self.advance();
                    while !self.at_op(":") && !self.at(&Tok::Newline) && !self.at(&Tok::Eof) {
                        self.advance();
                    }
                }
                _ => {}
            }
            self.advance();
        }
        self.skip_block()
    }

    fn skip_block(&mut self) -> PResult<()> {
        if !self.eat(&Tok::Newline) {
            self.skip_line();
            return Ok(());
        }
        if !self.eat(&Tok::Indent) {
            return Err(self.error("expected an indented block"));
        }
        let mut depth = 1;
        while depth > 0 {
            match self.advance() {
                Tok::Indent => depth += 1,
                Tok::Dedent => depth -= 1,
                Tok::Eof => break,
                _ => {}
            }
        }
        Ok(())
    }

    fn statement(&mut self, out: &mut Vec<Stmt>) -> PResult<()> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Newline => {
                self.advance();
                Ok(())
            }
            Tok::Indent => Err(self.error("unexpected indent")),
            Tok::Op("@") => {
                let mut decorators = Vec::new();
                while self.eat_op("@") {
                    decorators.push(self.test()?);
                    if !self.eat(&Tok::Newline) {
                        return Err(self.error("expected end of line after decorator"));
                    }
                }
                let kind = if self.at_kw("class") {
                    let mut c = self.class_def()?;
                    c.decorators = decorators;
                    StmtKind::ClassDef(c)
                } else if self.at_kw("def") || self.at_kw("async") {
                    let mut f = self.function_def()?;
                    f.decorators = decorators;
                    StmtKind::FunctionDef(f)
                } else {
                    return Err(self.error("expected class or def after decorators"));
                };
                out.push(Stmt { kind, span });
                Ok(())
            }
            Tok::Name(kw) => match kw.as_str() {
                "class" => {
                    let c = self.class_def()?;
                    out.push(Stmt { kind: StmtKind::ClassDef(c), span });
                    Ok(())
                }
                "def" | "async" if kw == "def" || matches!(self.peek_at(1), Tok::Name(n) if n == "def") => {
                    let f = self.function_def()?;
                    out.push(Stmt { kind: StmtKind::FunctionDef(f), span });
                    Ok(())
                }
                k if COMPOUND_SKIPPED.contains(&k) || (k == "async" || k == "match") && self.is_compound_line() => {
                    self.skip_compound()?;
                    out.push(Stmt { kind: StmtKind::Skipped(format!("'{k}' statement")), span });
                    Ok(())
                }
                k if SIMPLE_SKIPPED.contains(&k) && !self.is_assignment_line() => {
                    self.skip_line();
                    out.push(Stmt { kind: StmtKind::Skipped(format!("'{k}' statement")), span });
                    Ok(())
                }
                "pass" => {
                    self.advance();
                    self.end_of_simple()?;
                    out.push(Stmt { kind: StmtKind::Pass, span });
                    Ok(())
                }
                "import" | "from" => {
                    let s = self.import()?;
                    self.end_of_simple()?;
                    out.push(Stmt { kind: s, span });
                    Ok(())
                }
                _ => self.simple_statement(out, span),
            },
            _ => self.simple_statement(out, span),
        }
    }

    /// True when the current line is a block header (ends in ':' at depth 0).
    fn is_compound_line(&self) -> bool {
        let mut depth = 0usize;
        let mut last_colon = false;
        for t in &self.toks[self.pos..] {
            match &t.tok {
                Tok::Newline | Tok::Eof => return last_colon,
                Tok::Op("(" | "[" | "{") => depth += 1,
                Tok::Op(")" | "]" | "}") => depth = depth.saturating_sub(1),
                _ => {}
            }
            last_colon = depth == 0 && t.tok == Tok::Op(":");
        }
        false
    }

    /// `print = ...` style lines where a soft keyword is an assignment target.
    fn is_assignment_line(&self) -> bool {
        matches!(self.peek_at(1), Tok::Op("=" | ":" | "." | "["))
    }

    fn simple_statement(&mut self, out: &mut Vec<Stmt>, span: Span) -> PResult<()> {
        let first = self.star_expressions()?;
        let kind = if self.eat_op(":") {
            let annotation = self.test()?;
            let value = if self.eat_op("=") { Some(self.star_expressions()?) } else { None };
            StmtKind::AnnAssign { target: first, annotation, value }
        } else if self.at_op("=") {
            let mut targets = vec![first];
            let mut value = None;
            while self.eat_op("=") {
                let e = self.star_expressions()?;
                if let Some(prev) = value.replace(e) {
                    targets.push(prev);
                }
            }
            StmtKind::Assign { targets, value: value.unwrap() }
        } else if let Tok::Op(op) = self.peek() {
            if op.len() >= 2 && op.ends_with('=') && !matches!(*op, "==" | "<=" | ">=" | "!=") {
                self.advance();
                self.star_expressions()?;
                StmtKind::Skipped("augmented assignment".into())
            } else {
                StmtKind::Expr(first)
            }
        } else {
            StmtKind::Expr(first)
        };
        self.end_of_simple()?;
        out.push(Stmt { kind, span });
        Ok(())
    }

    fn dotted_name(&mut self) -> PResult<String> {
        let mut name = String::new();
        while self.at_op(".") || self.at_op("...") {
            name.push_str(if self.eat_op(".") { "." } else { self.advance(); "..." });
        }
        if !name.is_empty() && self.at_kw("import") {
            return Ok(name);
        }
        name.push_str(&self.ident()?);
        while self.eat_op(".") {
            name.push('.');
            name.push_str(&self.ident()?);
        }
        Ok(name)
    }

    fn import(&mut self) -> PResult<StmtKind> {
        if self.eat_kw("import") {
            let mut names = Vec::new();
            loop {
                let module = self.dotted_name()?;
                let alias = if self.eat_kw("as") { self.ident()? } else { module.clone() };
                names.push((module, alias));
                if !self.eat_op(",") {
                    break;
                }
            }
            return Ok(StmtKind::Import { module: None, names });
        }
        self.advance(); // from
        let module = self.dotted_name()?;
        if !self.eat_kw("import") {
            return Err(self.error("expected 'import'"));
        }
        let paren = self.eat_op("(");
        let mut names = Vec::new();
        if self.eat_op("*") {
            names.push(("*".to_string(), "*".to_string()));
        } else {
            loop {
                if paren && self.at_op(")") {
                    break;
                }
                let n = self.ident()?;
                let alias = if self.eat_kw("as") { self.ident()? } else { n.clone() };
                names.push((n, alias));
                if !self.eat_op(",") {
                    break;
                }
            }
        }
        if paren {
            self.expect_op(")")?;
        }
        Ok(StmtKind::Import { module: Some(module), names })
    }

    fn block(&mut self) -> PResult<Vec<Stmt>> {
        self.expect_op(":")?;
        let mut body = Vec::new();
        if !self.eat(&Tok::Newline) {
            // simple statements on the header line
            loop {
                self.statement(&mut body)?;
                if self.toks[self.pos - 1].tok != Tok::Op(";") || self.at(&Tok::Newline) {
                    self.eat(&Tok::Newline);
                    break;
                }
            }
            return Ok(body);
        }
        if !self.eat(&Tok::Indent) {
            return Err(self.error("expected an indented block"));
        }
        while !self.eat(&Tok::Dedent) {
            if self.at(&Tok::Eof) {
                break;
            }
            self.statement(&mut body)?;
        }
        Ok(body)
    }

    fn class_def(&mut self) -> PResult<ClassDef> {
        self.advance(); // class
        let name = self.ident()?;
        let mut bases = Vec::new();
        let mut keywords = Vec::new();
        if self.eat_op("(") {
            let (args, kws) = self.call_args()?;
            bases = args;
            for (k, v) in kws {
                match k {
                    Some(k) => keywords.push((k, v)),
                    None => return Err(self.error("'**' in class bases is not supported")),
                }
            }
        }
        let body = self.block()?;
        Ok(ClassDef { name, bases, keywords, decorators: Vec::new(), body })
    }

    fn function_def(&mut self) -> PResult<FunctionDef> {
        let is_async = self.eat_kw("async");
        self.advance(); // def
        let name = self.ident()?;
        self.expect_op("(")?;
        let params = self.params(")")?;
        self.expect_op(")")?;
        let returns = if self.eat_op("->") { Some(self.test()?) } else { None };
        self.expect_op(":")?;
        let body = self.collect_body()?;
        let self_param = params.first().map(|p| p.name.clone());
        let self_assigns = match self_param {
            Some(s) => scan_self_assigns(&body, &s, self.file),
            None => Vec::new(),
        };
        Ok(FunctionDef { name, params, returns, decorators: Vec::new(), is_async, self_assigns })
    }

    /// Tokens of a function body, without the surrounding INDENT/DEDENT.
    fn collect_body(&mut self) -> PResult<Vec<Token>> {
        let mut body = Vec::new();
        if !self.eat(&Tok::Newline) {
            while !self.at(&Tok::Newline) && !self.at(&Tok::Eof) {
                body.push(self.toks[self.pos].clone());
                self.advance();
            }
            if let Some(t) = self.toks.get(self.pos).cloned() {
                body.push(t);
            }
            self.eat(&Tok::Newline);
            return Ok(body);
        }
        if !self.eat(&Tok::Indent) {
            return Err(self.error("expected an indented block"));
        }
        let mut depth = 1;
        loop {
            let t = self.toks[self.pos].clone();
            match t.tok {
                Tok::Indent => depth += 1,
                Tok::Dedent => {
                    depth -= 1;
                    if depth == 0 {
                        self.advance();
                        break;
                    }
                }
                Tok::Eof => break,
                _ => {}
            }
            body.push(t);
            self.advance();
        }
        Ok(body)
    }

    fn params(&mut self, close: &str) -> PResult<Vec<Param>> {
        let annotated = close == ")";
        let mut params = Vec::new();
        let mut keyword_only = false;
        while !self.at_op(close) {
            if self.eat_op("/") {
            } else if self.eat_op("**") {
                let name = self.ident()?;
                let annotation = if annotated && self.eat_op(":") { Some(self.test()?) } else { None };
                params.push(Param { name, annotation, default: None, kind: ParamKind::VarKeywords });
            } else if self.eat_op("*") {
                keyword_only = true;
                if !self.at_op(",") && !self.at_op(close) {
                    let name = self.ident()?;
                    let annotation = if annotated && self.eat_op(":") { Some(self.star_or_test()?) } else { None };
                    params.push(Param { name, annotation, default: None, kind: ParamKind::VarArgs });
                }
            } else {
                let name = self.ident()?;
                let annotation = if annotated && self.eat_op(":") { Some(self.test()?) } else { None };
                let default = if self.eat_op("=") { Some(self.test()?) } else { None };
                let kind = if keyword_only { ParamKind::KeywordOnly } else { ParamKind::Positional };
                params.push(Param { name, annotation, default, kind });
            }
            if !self.eat_op(",") {
                break;
            }
        }
        Ok(params)
    }

    // ---- expressions ----

    fn star_or_test(&mut self) -> PResult<Expr> {
        if self.eat_op("*") {
            return Ok(Expr::Starred(Box::new(self.bitor()?)));
        }
        self.test()
    }

    /// Comma-separated expressions; a trailing or inner comma makes a tuple.
    fn star_expressions(&mut self) -> PResult<Expr> {
        if self.at_kw("yield") {
            self.advance();
            while !self.at(&Tok::Newline) && !self.at(&Tok::Eof) && !self.at_op("=") && !self.at_op(")") {
                self.advance();
            }
            return Ok(Expr::Opaque("yield"));
        }
        let first = self.star_or_test()?;
        if !self.at_op(",") {
            return Ok(first);
        }
        let mut items = vec![first];
        while self.eat_op(",") {
            if self.ends_expression_list() {
                break;
            }
            items.push(self.star_or_test()?);
        }
        Ok(Expr::Tuple(items))
    }

    fn ends_expression_list(&self) -> bool {
        matches!(self.peek(), Tok::Newline | Tok::Eof | Tok::Op("=" | ")" | "]" | "}" | ":" | ";"))
    }

    fn test(&mut self) -> PResult<Expr> {
        if self.at_kw("lambda") {
            self.advance();
            let params = self.params(":")?;
            self.expect_op(":")?;
            let body = self.test()?;
            return Ok(Expr::Lambda { params, body: Box::new(body) });
        }
        if matches!(self.peek(), Tok::Name(_)) && self.peek_at(1) == &Tok::Op(":=") {
            self.advance();
            self.advance();
            self.test()?;
            return Ok(Expr::Opaque("named expression"));
        }
        let body = self.or_test()?;
        if self.at_kw("if") {
            self.advance();
            let test = self.or_test()?;
            if !self.eat_kw("else") {
                return Err(self.error("expected 'else' in conditional expression"));
            }
            let orelse = self.test()?;
            return Ok(Expr::IfExp { body: Box::new(body), test: Box::new(test), orelse: Box::new(orelse) });
        }
        Ok(body)
    }

    fn or_test(&mut self) -> PResult<Expr> {
        let mut e = self.and_test()?;
        while self.eat_kw("or") {
            let r = self.and_test()?;
            e = Expr::BinOp { op: "or", left: Box::new(e), right: Box::new(r) };
        }
        Ok(e)
    }

    fn and_test(&mut self) -> PResult<Expr> {
        let mut e = self.not_test()?;
        while self.eat_kw("and") {
            let r = self.not_test()?;
            e = Expr::BinOp { op: "and", left: Box::new(e), right: Box::new(r) };
        }
        Ok(e)
    }

    fn not_test(&mut self) -> PResult<Expr> {
        if self.eat_kw("not") {
            let e = self.not_test()?;
            return Ok(Expr::Unary { op: "not", operand: Box::new(e) });
        }
        self.comparison()
    }

    fn comparison(&mut self) -> PResult<Expr> {
        let first = self.bitor()?;
        let mut rest = Vec::new();
        loop {
            let op = match self.peek() {
                Tok::Op(o @ ("<" | ">" | "==" | ">=" | "<=" | "!=")) => {
                    let o = o.to_string();
                    self.advance();
                    o
                }
                Tok::Name(n) if n == "in" => {
                    self.advance();
                    "in".into()
                }
                Tok::Name(n) if n == "not" && matches!(self.peek_at(1), Tok::Name(m) if m == "in") => {
                    self.advance();
                    self.advance();
                    "not in".into()
                }
                Tok::Name(n) if n == "is" => {
                    self.advance();
                    if self.eat_kw("not") {
                        "is not".into()
                    } else {
                        "is".into()
                    }
                }
                _ => break,
            };
            rest.push((op, self.bitor()?));
        }
        if rest.is_empty() {
            Ok(first)
        } else {
            Ok(Expr::Compare(Box::new(first), rest))
        }
    }

    fn binary(&mut self, ops: &[&'static str], next: fn(&mut Self) -> PResult<Expr>) -> PResult<Expr> {
        let mut e = next(self)?;
        while let Some(op) = ops.iter().copied().find(|o| self.at_op(o)) {
            self.advance();
            let r = next(self)?;
            e = Expr::BinOp { op, left: Box::new(e), right: Box::new(r) };
        }
        Ok(e)
    }

    fn bitor(&mut self) -> PResult<Expr> {
        self.binary(&["|"], Self::bitxor)
    }

    fn bitxor(&mut self) -> PResult<Expr> {
        self.binary(&["^"], Self::bitand)
    }

    fn bitand(&mut self) -> PResult<Expr> {
        self.binary(&["&"], Self::shift)
    }

    fn shift(&mut self) -> PResult<Expr> {
        self.binary(&["<<", ">>"], Self::arith)
    }

    fn arith(&mut self) -> PResult<Expr> {
        self.binary(&["+", "-"], Self::term)
    }

    fn term(&mut self) -> PResult<Expr> {
        self.binary(&["*", "/", "//", "%", "@"], Self::factor)
    }

    fn factor(&mut self) -> PResult<Expr> {
        for op in ["+", "-", "~"] {
            if self.eat_op(op) {
                let e = self.factor()?;
                return Ok(Expr::Unary { op, operand: Box::new(e) });
            }
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Expr> {
        let base = if self.eat_kw("await") {
            self.atom_expr()?;
            Expr::Opaque("await")
        } else {
            self.atom_expr()?
        };
        if self.eat_op("**") {
            let exp = self.factor()?;
            return Ok(Expr::BinOp { op: "**", left: Box::new(base), right: Box::new(exp) });
        }
        Ok(base)
    }

    fn atom_expr(&mut self) -> PResult<Expr> {
        let mut e = self.atom()?;
        loop {
            if self.eat_op("(") {
                let (args, keywords) = self.call_args()?;
                e = Expr::Call { func: Box::new(e), args, keywords };
            } else if self.eat_op("[") {
                let mut items = Vec::new();
                loop {
                    if self.at_op("]") {
                        break;
                    }
                    items.push(self.subscript_item()?);
                    if !self.eat_op(",") {
                        break;
                    }
                }
                self.expect_op("]")?;
                e = Expr::Subscript(Box::new(e), items);
            } else if self.eat_op(".") {
                let attr = match self.advance() {
                    Tok::Name(n) => n,
                    _ => return Err(self.error("expected attribute name")),
                };
                e = Expr::Attribute(Box::new(e), attr);
            } else {
                return Ok(e);
            }
        }
    }

    fn subscript_item(&mut self) -> PResult<Expr> {
        let lower = if self.at_op(":") { None } else { Some(self.star_or_test()?) };
        if !self.eat_op(":") {
            return Ok(lower.unwrap());
        }
        let bound = |p: &mut Self| -> PResult<Option<Box<Expr>>> {
            if p.at_op(":") || p.at_op("]") || p.at_op(",") {
                Ok(None)
            } else {
                Ok(Some(Box::new(p.test()?)))
            }
        };
        let upper = bound(self)?;
        let step = if self.eat_op(":") { bound(self)? } else { None };
        Ok(Expr::Slice(lower.map(Box::new), upper, step))
    }

    /// Arguments after an opening parenthesis, consuming the closing one.
    #[allow(clippy::type_complexity)]
    fn call_args(&mut self) -> PResult<(Vec<Expr>, Vec<(Option<String>, Expr)>)> {
        let mut args = Vec::new();
        let mut keywords = Vec::new();
        while !self.at_op(")") {
            if self.eat_op("**") {
                keywords.push((None, self.test()?));
            } else if self.eat_op("*") {
                args.push(Expr::Starred(Box::new(self.test()?)));
            } else if matches!(self.peek(), Tok::Name(_)) && self.peek_at(1) == &Tok::Op("=") {
                let k = self.ident()?;
                self.advance();
                keywords.push((Some(k), self.test()?));
            } else {
                let e = self.test()?;
                if self.at_kw("for") || self.at_kw("async") {
                    self.comp_clauses()?;
                    args.push(Expr::Comprehension { kind: CompKind::Generator, element: Box::new(e) });
                } else {
                    args.push(e);
                }
            }
            if !self.eat_op(",") {
                break;
            }
        }
        self.expect_op(")")?;
        Ok((args, keywords))
    }

    fn comp_clauses(&mut self) -> PResult<()> {
        loop {
            self.eat_kw("async");
            if self.eat_kw("for") {
                self.bitor()?;
                while self.eat_op(",") {
                    if self.at_kw("in") {
                        break;
                    }
                    self.bitor()?;
                }
                if !self.eat_kw("in") {
                    return Err(self.error("expected 'in' in comprehension"));
                }
                self.or_test()?;
            } else if self.eat_kw("if") {
                self.or_test()?;
            } else {
                return Ok(());
            }
        }
    }

    fn sequence(&mut self, close: &str) -> PResult<(Vec<Expr>, bool, bool)> {
        let mut items = Vec::new();
        let mut comma = false;
        while !self.at_op(close) {
            let e = self.star_or_test()?;
            if items.is_empty() && (self.at_kw("for") || self.at_kw("async")) {
                self.comp_clauses()?;
                self.expect_op(close)?;
                return Ok((vec![e], false, true));
            }
            items.push(e);
            if !self.eat_op(",") {
                break;
            }
            comma = true;
        }
        self.expect_op(close)?;
        Ok((items, comma, false))
    }

    fn atom(&mut self) -> PResult<Expr> {
        let t = self.peek().clone();
        match t {
            Tok::Op("(") => {
                self.advance();
                if self.at_kw("yield") {
                    self.star_expressions()?;
                    self.expect_op(")")?;
                    return Ok(Expr::Opaque("yield"));
                }
                let (mut items, comma, comp) = self.sequence(")")?;
                if comp {
                    return Ok(Expr::Comprehension { kind: CompKind::Generator, element: Box::new(items.remove(0)) });
                }
                if items.len() == 1 && !comma {
                    return Ok(items.remove(0));
                }
                Ok(Expr::Tuple(items))
            }
            Tok::Op("[") => {
                self.advance();
                let (mut items, _, comp) = self.sequence("]")?;
                if comp {
                    return Ok(Expr::Comprehension { kind: CompKind::List, element: Box::new(items.remove(0)) });
                }
                Ok(Expr::List(items))
            }
            Tok::Op("{") => {
                self.advance();
                self.brace()
            }
            Tok::Op("...") => {
                self.advance();
                Ok(Expr::Ellipsis)
            }
            Tok::Int(s) => {
                self.advance();
                Ok(Expr::Int(s))
            }
            Tok::Float(s) => {
                self.advance();
                Ok(Expr::Float(s))
            }
            Tok::Imaginary(s) => {
                self.advance();
                Ok(Expr::Imaginary(s))
            }
            Tok::Str { .. } => {
                let mut text = String::new();
                let mut is_bytes = false;
                while let Tok::Str { value, bytes } = self.peek().clone() {
                    self.advance();
                    text.push_str(&value);
                    is_bytes = bytes;
                }
                Ok(if is_bytes { Expr::Bytes(text) } else { Expr::Str(text) })
            }
            Tok::Name(n) => match n.as_str() {
                "None" => {
                    self.advance();
                    Ok(Expr::NoneLit)
                }
                "True" | "False" => {
                    self.advance();
                    Ok(Expr::Bool(n == "True"))
                }
                _ if KEYWORDS.contains(&n.as_str()) => Err(self.error(format!("unexpected keyword '{n}'"))),
                _ => {
                    self.advance();
                    Ok(Expr::Name(n))
                }
            },
            _ => Err(self.error(format!("expected an expression, found {}", self.describe()))),
        }
    }

    fn brace(&mut self) -> PResult<Expr> {
        if self.eat_op("}") {
            return Ok(Expr::Dict(Vec::new()));
        }
        let first_key = if self.eat_op("**") {
            None
        } else {
            Some(self.star_or_test()?)
        };
        let is_dict = first_key.is_none() || self.at_op(":");
        if !is_dict {
            let first = first_key.unwrap();
            if self.at_kw("for") || self.at_kw("async") {
                self.comp_clauses()?;
                self.expect_op("}")?;
                return Ok(Expr::Comprehension { kind: CompKind::Set, element: Box::new(first) });
            }
            let mut items = vec![first];
            while self.eat_op(",") {
                if self.at_op("}") {
                    break;
                }
                items.push(self.star_or_test()?);
            }
            self.expect_op("}")?;
            return Ok(Expr::Set(items));
        }
        let first_value = if first_key.is_some() {
            self.expect_op(":")?;
            self.test()?
        } else {
            self.bitor()?
        };
        if first_key.is_some() && (self.at_kw("for") || self.at_kw("async")) {
            self.comp_clauses()?;
            self.expect_op("}")?;
            return Ok(Expr::Comprehension { kind: CompKind::Dict, element: Box::new(first_value) });
        }
        let mut entries = vec![(first_key, first_value)];
        while self.eat_op(",") {
            if self.at_op("}") {
                break;
            }
            if self.eat_op("**") {
                entries.push((None, self.bitor()?));
            } else {
                let k = self.test()?;
                self.expect_op(":")?;
                entries.push((Some(k), self.test()?));
            }
        }
        self.expect_op("}")?;
        Ok(Expr::Dict(entries))
    }
}

/// Finds `self.x = ...` and `self.x: T = ...` in a method body. Lines that
/// fail to parse are ignored; bodies are not otherwise analysed.
fn scan_self_assigns(body: &[Token], self_name: &str, file: &str) -> Vec<SelfAssign> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut depth = 0usize;
    for (i, t) in body.iter().enumerate() {
        match &t.tok {
            Tok::Op("(" | "[" | "{") => depth += 1,
            Tok::Op(")" | "]" | "}") => depth = depth.saturating_sub(1),
            Tok::Newline | Tok::Indent | Tok::Dedent | Tok::Eof => {
                scan_line(&body[start..i], self_name, file, &mut out);
                start = i + 1;
            }
            Tok::Op(";") if depth == 0 => {
                scan_line(&body[start..i], self_name, file, &mut out);
                start = i + 1;
            }
            Tok::Op(":") if depth == 0 && starts_compound(&body[start..i]) => {
                start = i + 1;
            }
            _ => {}
        }
    }
    scan_line(&body[start..], self_name, file, &mut out);
    out
}

fn starts_compound(line: &[Token]) -> bool {
    matches!(line.first().map(|t| &t.tok), Some(Tok::Name(n)) if COMPOUND_SKIPPED.contains(&n.as_str()) || n == "with")
}

fn scan_line(line: &[Token], self_name: &str, file: &str, out: &mut Vec<SelfAssign>) {
    let is_self_attr = matches!(
        line,
        [Token { tok: Tok::Name(s), .. }, Token { tok: Tok::Op("."), .. }, Token { tok: Tok::Name(_), .. }, Token { tok: Tok::Op("=" | ":"), .. }, ..]
        if s == self_name
    );
    if !is_self_attr {
        return;
    }
    let Tok::Name(attr) = &line[2].tok else { return };
    let span = line[0].span;
    let mut toks: Vec<Token> = line[4..].to_vec();
    toks.push(Token { tok: Tok::Newline, span });
    toks.push(Token { tok: Tok::Eof, span });
    let mut p = Parser { toks, pos: 0, file };
    let (annotation, value) = if line[3].tok == Tok::Op(":") {
        let Ok(ann) = p.test() else { return };
        let value = if p.eat_op("=") { p.star_expressions().ok() } else { None };
        (Some(ann), value)
    } else {
        match p.star_expressions() {
            Ok(v) if p.at(&Tok::Newline) => (None, Some(v)),
            _ => (None, None),
        }
    };
    out.push(SelfAssign { attr: attr.clone(), annotation, value, span });
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(src: &str) -> Vec<Stmt> {
        parse_source(src, "t.py").unwrap_or_else(|e| panic!("{e}"))
    }

    #[test]
    fn class_with_methods_and_decorators() {
        let stmts = parse(
            "from typing import Protocol, runtime_checkable\n\n\
             @runtime_checkable\nclass MyProtocol(Protocol):\n    def foo(self, x: float) -> bool: ...\n",
        );
        assert_eq!(stmts.len(), 2);
        let StmtKind::ClassDef(c) = &stmts[1].kind else { panic!() };
        assert_eq!(c.name, "MyProtocol");
        assert_eq!(c.decorators, vec![Expr::Name("runtime_checkable".into())]);
        let StmtKind::FunctionDef(f) = &c.body[0].kind else { panic!() };
        assert_eq!(f.params.len(), 2);
        assert_eq!(f.params[1].annotation, Some(Expr::Name("float".into())));
        assert_eq!(f.returns, Some(Expr::Name("bool".into())));
    }

    #[test]
    fn metaclass_keyword_and_subscripted_bases() {
        let stmts = parse("class A(Generic[T], metaclass=ABCMeta):\n    pass\n");
        let StmtKind::ClassDef(c) = &stmts[0].kind else { panic!() };
        assert_eq!(c.keywords[0].0, "metaclass");
        assert!(matches!(&c.bases[0], Expr::Subscript(_, args) if args.len() == 1));
    }

    #[test]
    fn self_assignments_in_init() {
        let stmts = parse(
            "class Point:\n    def __init__(self, x: int, y: int):\n        self.x = x\n        if y:\n            self.y: int = y\n        print(x)\n",
        );
        let StmtKind::ClassDef(c) = &stmts[0].kind else { panic!() };
        let StmtKind::FunctionDef(f) = &c.body[0].kind else { panic!() };
        let attrs: Vec<_> = f.self_assigns.iter().map(|a| a.attr.as_str()).collect();
        assert_eq!(attrs, ["x", "y"]);
        assert_eq!(f.self_assigns[1].annotation, Some(Expr::Name("int".into())));
    }

    #[test]
    fn lambda_attribute_and_type_call() {
        let stmts = parse(
            "MyList = type('MyList', (list, ), {'pretty_string': lambda self: 'My list: ' + str(self)})\n",
        );
        let StmtKind::Assign { targets, value } = &stmts[0].kind else { panic!() };
        assert_eq!(targets, &vec![Expr::Name("MyList".into())]);
        let Expr::Call { args, .. } = value else { panic!() };
        assert_eq!(args.len(), 3);
        assert!(matches!(&args[1], Expr::Tuple(items) if items.len() == 1));
        assert!(matches!(&args[2], Expr::Dict(entries) if matches!(entries[0].1, Expr::Lambda { .. })));
    }

    #[test]
    fn skips_unsupported_compound_statements() {
        let stmts = parse("for i in range(3):\n    x = i\nwhile True: break\ny = 1\n");
        assert!(matches!(stmts[0].kind, StmtKind::Skipped(_)));
        assert!(matches!(stmts[1].kind, StmtKind::Skipped(_)));
        assert!(matches!(stmts[2].kind, StmtKind::Assign { .. }));
    }

    #[test]
    fn annotations_and_calls() {
        let stmts = parse(
            "x: Callable[[int], str] = f\nprint(issubclass(A, B), *xs, key=1)\nz = [c for c in cs if c]\nw = a if b else c\n",
        );
        assert!(matches!(stmts[0].kind, StmtKind::AnnAssign { .. }));
        assert!(matches!(&stmts[1].kind, StmtKind::Expr(Expr::Call { keywords, .. }) if keywords.len() == 1));
        assert!(matches!(&stmts[2].kind, StmtKind::Assign { value: Expr::Comprehension { .. }, .. }));
        assert!(matches!(&stmts[3].kind, StmtKind::Assign { value: Expr::IfExp { .. }, .. }));
    }

    #[test]
    fn reports_syntax_errors_with_location() {
        let err = parse_source("class A(:):\n    pass\n", "bad.py").unwrap_err();
        let FrontendError::Syntax { file, span, .. } = err else { panic!() };
        assert_eq!(file, "bad.py");
        assert_eq!(span.line, 1);
        assert!(parse_source("def f(x:\n", "bad.py").is_err());
        assert!(parse_source("class A\n", "bad.py").is_err());
    }

    #[test]
    fn standalone_expression() {
        let e = parse_expression("Optional['Node']", "t.py").unwrap();
        assert!(matches!(e, Expr::Subscript(_, _)));
    }

    #[test]
    fn empty_module() {
        assert!(parse("").is_empty());
        assert!(parse("# only a comment\n\n").is_empty());
    }
}
