//! JSON tree encoding: every node is an object with a `kind` tag and its
//! children under named keys.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::expr::{Record, TypeExpr};

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub(crate) enum ExprRepr {
    Atom {
        name: String,
    },
    Var {
        name: String,
    },
    Apply {
        constructor: String,
        args: Vec<TypeExpr>,
        #[serde(default)]
        variadic: bool,
    },
    Record {
        fields: BTreeMap<String, TypeExpr>,
        open: bool,
    },
    Product {
        factors: Vec<TypeExpr>,
    },
    Sum {
        alternatives: Vec<TypeExpr>,
    },
    Function {
        domain: Box<TypeExpr>,
        codomain: Box<TypeExpr>,
    },
    Forall {
        vars: Vec<String>,
        body: Box<TypeExpr>,
    },
    Exists {
        var: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bound: Option<Box<TypeExpr>>,
        body: Box<TypeExpr>,
    },
    Any,
}

impl From<TypeExpr> for ExprRepr {
    fn from(e: TypeExpr) -> Self {
        match e {
            TypeExpr::Atom(name) => ExprRepr::Atom { name },
            TypeExpr::Var(name) => ExprRepr::Var { name },
            TypeExpr::Apply { ctor, args, variadic } => ExprRepr::Apply { constructor: ctor, args, variadic },
            TypeExpr::Record(Record { fields, open }) => ExprRepr::Record { fields, open },
            TypeExpr::Product(factors) => ExprRepr::Product { factors },
            TypeExpr::Sum(alternatives) => ExprRepr::Sum { alternatives },
            TypeExpr::Function(domain, codomain) => ExprRepr::Function { domain, codomain },
            TypeExpr::Forall(vars, body) => ExprRepr::Forall { vars, body },
            TypeExpr::Exists { var, bound, body } => ExprRepr::Exists { var, bound, body },
            TypeExpr::Any => ExprRepr::Any,
        }
    }
}

impl From<ExprRepr> for TypeExpr {
    fn from(r: ExprRepr) -> Self {
        match r {
            ExprRepr::Atom { name } => TypeExpr::Atom(name),
            ExprRepr::Var { name } => TypeExpr::Var(name),
            ExprRepr::Apply { constructor, args, variadic } => TypeExpr::Apply { ctor: constructor, args, variadic },
            ExprRepr::Record { fields, open } => TypeExpr::Record(Record { fields, open }),
            ExprRepr::Product { factors } => TypeExpr::Product(factors),
            ExprRepr::Sum { alternatives } => TypeExpr::Sum(alternatives),
            ExprRepr::Function { domain, codomain } => TypeExpr::Function(domain, codomain),
            ExprRepr::Forall { vars, body } => TypeExpr::Forall(vars, body),
            ExprRepr::Exists { var, bound, body } => TypeExpr::Exists { var, bound, body },
            ExprRepr::Any => TypeExpr::Any,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encodes_variant_tags() {
        let e = TypeExpr::func(TypeExpr::var("Q"), TypeExpr::atom("StrET"));
        let json = serde_json::to_value(&e).unwrap();
        assert_eq!(json["kind"], "function");
        assert_eq!(json["domain"]["kind"], "var");
        assert_eq!(json["codomain"]["name"], "StrET");
        let back: TypeExpr = serde_json::from_value(json).unwrap();
        assert_eq!(back, e);
    }
}
