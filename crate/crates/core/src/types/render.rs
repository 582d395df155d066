//! Canonical text rendering.
//!
//! Precedence from loosest to tightest: quantifiers, `->` (right
//! associative), `+`, ` x `, then atoms, applications and records.

use std::fmt::{self, Display, Write};

use super::expr::TypeExpr;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Quant,
    Arrow,
    Sum,
    Product,
    Primary,
}

fn prec(e: &TypeExpr) -> Prec {
    match e {
        TypeExpr::Forall(..) | TypeExpr::Exists { .. } => Prec::Quant,
        TypeExpr::Function(..) => Prec::Arrow,
        TypeExpr::Sum(_) => Prec::Sum,
        TypeExpr::Product(_) => Prec::Product,
        _ => Prec::Primary,
    }
}

/// Writes `e`, parenthesised unless it binds at least as tightly as `min`.
fn write_at(f: &mut fmt::Formatter<'_>, e: &TypeExpr, min: Prec) -> fmt::Result {
    if prec(e) < min {
        f.write_char('(')?;
        write_expr(f, e)?;
        f.write_char(')')
    } else {
        write_expr(f, e)
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &TypeExpr) -> fmt::Result {
    match e {
        TypeExpr::Atom(n) | TypeExpr::Var(n) => f.write_str(n),
        TypeExpr::Any => f.write_str("Any"),
        TypeExpr::Apply { ctor, args, variadic } => {
            write!(f, "{ctor}[")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write_expr(f, a)?;
            }
            if *variadic {
                f.write_str(", ...")?;
            }
            f.write_char(']')
        }
        TypeExpr::Record(r) => {
            f.write_char('{')?;
            let mut first = true;
            for (name, ty) in &r.fields {
                if !first {
                    f.write_str(", ")?;
                }
                first = false;
                write!(f, "{name}: ")?;
                write_expr(f, ty)?;
            }
            if r.open {
                if !first {
                    f.write_str(", ")?;
                }
                f.write_str("...")?;
            }
            f.write_char('}')
        }
        TypeExpr::Product(xs) => {
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(" x ")?;
                }
                // nested products keep their grouping
                if matches!(x, TypeExpr::Product(_)) {
                    write!(f, "({x})")?;
                } else {
                    write_at(f, x, Prec::Product)?;
                }
            }
            Ok(())
        }
        TypeExpr::Sum(xs) => {
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(" + ")?;
                }
                if matches!(x, TypeExpr::Sum(_)) {
                    write!(f, "({x})")?;
                } else {
                    write_at(f, x, Prec::Sum)?;
                }
            }
            Ok(())
        }
        TypeExpr::Function(d, c) => {
            write_at(f, d, Prec::Sum)?;
            f.write_str(" -> ")?;
            write_at(f, c, Prec::Quant)
        }
        TypeExpr::Forall(vars, body) => {
            write!(f, "∀{}.", vars.join(","))?;
            write_expr(f, body)
        }
        TypeExpr::Exists { var, bound, body } => {
            write!(f, "∃{var}")?;
            if let Some(b) = bound {
                f.write_str("<:")?;
                write_at(f, b, Prec::Primary)?;
            }
            f.write_char('.')?;
            write_expr(f, body)
        }
    }
}

impl Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::expr::Record;

    #[test]
    fn renders_common_shapes() {
        let sa = TypeExpr::forall(
            vec!["T".into()],
            TypeExpr::exists(
                "SA",
                Some(TypeExpr::apply("ProtocolET1", vec![TypeExpr::var("T")])),
                Record::open().with("__abs__", TypeExpr::func(TypeExpr::var("SA"), TypeExpr::var("T"))).into(),
            ),
        );
        assert_eq!(sa.to_string(), "∀T.∃SA<:ProtocolET1[T].{__abs__: SA -> T, ...}");

        let init = TypeExpr::func(
            TypeExpr::Product(vec![
                TypeExpr::var("O"),
                TypeExpr::variadic("TupleET", TypeExpr::object()),
                TypeExpr::apply("DictET", vec![TypeExpr::atom("StrET"), TypeExpr::object()]),
            ]),
            TypeExpr::var("O"),
        );
        assert_eq!(init.to_string(), "O x TupleET[ObjectET, ...] x DictET[StrET, ObjectET] -> O");
    }

    #[test]
    fn parenthesises_by_precedence() {
        let a = TypeExpr::atom("A");
        let b = TypeExpr::atom("B");
        let f = TypeExpr::func(TypeExpr::func(a.clone(), b.clone()), a.clone());
        assert_eq!(f.to_string(), "(A -> B) -> A");
        let g = TypeExpr::func(a.clone(), TypeExpr::func(b.clone(), a.clone()));
        assert_eq!(g.to_string(), "A -> B -> A");
        let p = TypeExpr::Product(vec![TypeExpr::Sum(vec![a.clone(), b.clone()]), a.clone()]);
        assert_eq!(p.to_string(), "(A + B) x A");
        assert_eq!(Record::open().to_string_expr(), "{...}");
        assert_eq!(Record::closed().to_string_expr(), "{}");
    }

    trait Show {
        fn to_string_expr(self) -> String;
    }
    impl Show for Record {
        fn to_string_expr(self) -> String {
            TypeExpr::Record(self).to_string()
        }
    }
}
