//! Syntax tree for the supported Python subset. Function bodies are not
//! kept; only the `self.x = ...` assignments found in them are.

use crate::error::Span;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Name(String),
    Attribute(Box<Expr>, String),
    Subscript(Box<Expr>, Vec<Expr>),
    Call { func: Box<Expr>, args: Vec<Expr>, keywords: Vec<(Option<String>, Expr)> },
    Str(String),
    Bytes(String),
    Int(String),
    Float(String),
    Imaginary(String),
    Bool(bool),
    NoneLit,
    Ellipsis,
    List(Vec<Expr>),
    Tuple(Vec<Expr>),
    Set(Vec<Expr>),
    /// `None` key marks a `**mapping` entry.
    Dict(Vec<(Option<Expr>, Expr)>),
    Comprehension { kind: CompKind, element: Box<Expr> },
    Lambda { params: Vec<Param>, body: Box<Expr> },
    BinOp { op: &'static str, left: Box<Expr>, right: Box<Expr> },
    Unary { op: &'static str, operand: Box<Expr> },
    Compare(Box<Expr>, Vec<(String, Expr)>),
    IfExp { body: Box<Expr>, test: Box<Expr>, orelse: Box<Expr> },
    Starred(Box<Expr>),
    Slice(Option<Box<Expr>>, Option<Box<Expr>>, Option<Box<Expr>>),
    /// Yield, await, walrus and friends: parsed but not interpreted.
    Opaque(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompKind {
    List,
    Set,
    Dict,
    Generator,
}

impl Expr {
    /// `a.b.c` for name/attribute chains.
    pub fn dotted(&self) -> Option<String> {
        match self {
            Expr::Name(n) => Some(n.clone()),
            Expr::Attribute(base, attr) => base.dotted().map(|b| format!("{b}.{attr}")),
            _ => None,
        }
    }

    /// Last component of a name/attribute chain (`typing.Protocol` -> `Protocol`).
    pub fn simple_name(&self) -> Option<&str> {
        match self {
            Expr::Name(n) => Some(n),
            Expr::Attribute(base, attr) if base.dotted().is_some() => Some(attr),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        match self {
            Expr::Str(_)
            | Expr::Bytes(_)
            | Expr::Int(_)
            | Expr::Float(_)
            | Expr::Imaginary(_)
            | Expr::Bool(_)
            | Expr::NoneLit
            | Expr::Ellipsis => true,
            Expr::Unary { operand, .. } => operand.is_literal(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Positional,
    VarArgs,
    KeywordOnly,
    VarKeywords,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub name: String,
    pub annotation: Option<Expr>,
    pub default: Option<Expr>,
    pub kind: ParamKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    /// `import a.b as c` gives `module: None, names: [("a.b", "c")]`;
    /// `from m import x as y` gives `module: Some("m"), names: [("x", "y")]`.
    Import { module: Option<String>, names: Vec<(String, String)> },
    ClassDef(ClassDef),
    FunctionDef(FunctionDef),
    Assign { targets: Vec<Expr>, value: Expr },
    AnnAssign { target: Expr, annotation: Expr, value: Option<Expr> },
    Expr(Expr),
    Pass,
    /// A statement outside the subset, skipped.
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassDef {
    pub name: String,
    pub bases: Vec<Expr>,
    pub keywords: Vec<(String, Expr)>,
    pub decorators: Vec<Expr>,
    pub body: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionDef {
    pub name: String,
    pub params: Vec<Param>,
    pub returns: Option<Expr>,
    pub decorators: Vec<Expr>,
    pub is_async: bool,
    pub self_assigns: Vec<SelfAssign>,
}

/// `self.attr = value` or `self.attr: annotation = value` inside a method.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfAssign {
    pub attr: String,
    pub annotation: Option<Expr>,
    pub value: Option<Expr>,
    pub span: Span,
}
