use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Record signature: member name to member type. `open` marks the trailing
/// ellipsis, i.e. further members exist but are not listed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Record {
    pub fields: BTreeMap<String, TypeExpr>,
    pub open: bool,
}

impl Record {
    pub fn open() -> Self {
        Record { fields: BTreeMap::new(), open: true }
    }

    pub fn closed() -> Self {
        Record { fields: BTreeMap::new(), open: false }
    }

    pub fn with(mut self, name: impl Into<String>, ty: TypeExpr) -> Self {
        self.fields.insert(name.into(), ty);
        self
    }

    pub fn get(&self, name: &str) -> Option<&TypeExpr> {
        self.fields.get(name)
    }
}

/// A type expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "crate::types::json::ExprRepr", from = "crate::types::json::ExprRepr")]
pub enum TypeExpr {
    /// A named existential type (`IntET`) or a representation type (`Duck`).
    Atom(String),
    Var(String),
    /// Generic application. With `variadic` set, `args` holds exactly one
    /// element type and stands for `Name[E, ...]`.
    Apply {
        ctor: String,
        args: Vec<TypeExpr>,
        variadic: bool,
    },
    Record(Record),
    Product(Vec<TypeExpr>),
    Sum(Vec<TypeExpr>),
    Function(Box<TypeExpr>, Box<TypeExpr>),
    Forall(Vec<String>, Box<TypeExpr>),
    /// `∃var<:bound.body`. The bound is in scope of `var`, which admits
    /// F-bounded forms such as `∃P<:GenericET1[P].τ`. A missing bound means
    /// the top type.
    Exists {
        var: String,
        bound: Option<Box<TypeExpr>>,
        body: Box<TypeExpr>,
    },
    Any,
}

pub const OBJECT: &str = "ObjectET";
pub const BOTTOM: &str = "BottomET";
pub const NONE_TYPE: &str = "NoneTypeET";

impl TypeExpr {
    pub fn atom(name: impl Into<String>) -> Self {
        TypeExpr::Atom(name.into())
    }

    pub fn var(name: impl Into<String>) -> Self {
        TypeExpr::Var(name.into())
    }

    pub fn apply(ctor: impl Into<String>, args: Vec<TypeExpr>) -> Self {
        TypeExpr::Apply { ctor: ctor.into(), args, variadic: false }
    }

    pub fn variadic(ctor: impl Into<String>, elem: TypeExpr) -> Self {
        TypeExpr::Apply { ctor: ctor.into(), args: vec![elem], variadic: true }
    }

    pub fn func(domain: TypeExpr, codomain: TypeExpr) -> Self {
        TypeExpr::Function(Box::new(domain), Box::new(codomain))
    }

    /// Product of `factors`; a single factor is returned as is and an empty
    /// list becomes the unit type.
    pub fn product(mut factors: Vec<TypeExpr>) -> Self {
        match factors.len() {
            0 => TypeExpr::atom(NONE_TYPE),
            1 => factors.pop().unwrap(),
            _ => TypeExpr::Product(factors),
        }
    }

    pub fn sum(mut alternatives: Vec<TypeExpr>) -> Self {
        match alternatives.len() {
            0 => TypeExpr::atom(BOTTOM),
            1 => alternatives.pop().unwrap(),
            _ => TypeExpr::Sum(alternatives),
        }
    }

    pub fn record(record: Record) -> Self {
        TypeExpr::Record(record)
    }

    pub fn forall(vars: Vec<String>, body: TypeExpr) -> Self {
        if vars.is_empty() {
            body
        } else {
            TypeExpr::Forall(vars, Box::new(body))
        }
    }

    pub fn exists(var: impl Into<String>, bound: Option<TypeExpr>, body: TypeExpr) -> Self {
        TypeExpr::Exists {
            var: var.into(),
            bound: bound.map(Box::new),
            body: Box::new(body),
        }
    }

    pub fn object() -> Self {
        TypeExpr::atom(OBJECT)
    }

    pub fn bottom() -> Self {
        TypeExpr::atom(BOTTOM)
    }

    pub fn none() -> Self {
        TypeExpr::atom(NONE_TYPE)
    }

    pub fn is_atom(&self, name: &str) -> bool {
        matches!(self, TypeExpr::Atom(n) if n == name)
    }

    /// Head name of a named type (`Atom` or `Apply`).
    pub fn head(&self) -> Option<&str> {
        match self {
            TypeExpr::Atom(n) => Some(n),
            TypeExpr::Apply { ctor, .. } => Some(ctor),
            _ => None,
        }
    }

    /// Arguments of a named type; empty for atoms.
    pub fn head_args(&self) -> &[TypeExpr] {
        match self {
            TypeExpr::Apply { args, .. } => args,
            _ => &[],
        }
    }

    /// Immediate children, in a fixed order.
    pub fn children(&self) -> Vec<&TypeExpr> {
        match self {
            TypeExpr::Atom(_) | TypeExpr::Var(_) | TypeExpr::Any => vec![],
            TypeExpr::Apply { args, .. } => args.iter().collect(),
            TypeExpr::Record(r) => r.fields.values().collect(),
            TypeExpr::Product(xs) | TypeExpr::Sum(xs) => xs.iter().collect(),
            TypeExpr::Function(d, c) => vec![d, c],
            TypeExpr::Forall(_, b) => vec![b],
            TypeExpr::Exists { bound, body, .. } => {
                let mut v: Vec<&TypeExpr> = bound.iter().map(|b| b.as_ref()).collect();
                v.push(body);
                v
            }
        }
    }

    /// Every atom and constructor name referenced anywhere in the expression.
    pub fn referenced_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(e) = stack.pop() {
            if let Some(h) = e.head() {
                out.push(h.to_string());
            }
            stack.extend(e.children());
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }
}

impl From<Record> for TypeExpr {
    fn from(r: Record) -> Self {
        TypeExpr::Record(r)
    }
}
