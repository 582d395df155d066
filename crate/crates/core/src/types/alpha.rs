//! Alpha-equivalence via a nameless canonical key.
//!
//! Bound variables are written as de Bruijn indices, record fields in name
//! order and sum alternatives as a sorted multiset, so two expressions are
//! alpha-equivalent exactly when their keys are equal.

use std::fmt::Write;

use super::expr::TypeExpr;

pub fn alpha_eq(a: &TypeExpr, b: &TypeExpr) -> bool {
    a == b || canonical_key(a) == canonical_key(b)
}

pub fn canonical_key(e: &TypeExpr) -> String {
    let mut out = String::new();
    write_key(e, &mut Vec::new(), &mut out);
    out
}

fn write_key(e: &TypeExpr, scope: &mut Vec<String>, out: &mut String) {
    match e {
        TypeExpr::Atom(n) => {
            out.push_str(n);
        }
        TypeExpr::Var(v) => match scope.iter().rposition(|s| s == v) {
            Some(pos) => {
                let _ = write!(out, "#{}", scope.len() - 1 - pos);
            }
            None => {
                let _ = write!(out, "${v}");
            }
        },
        TypeExpr::Any => out.push('?'),
        TypeExpr::Apply { ctor, args, variadic } => {
            out.push_str(ctor);
            out.push('[');
            for a in args {
                write_key(a, scope, out);
                out.push(',');
            }
            if *variadic {
                out.push_str("..");
            }
            out.push(']');
        }
        TypeExpr::Record(r) => {
            out.push('{');
            for (k, v) in &r.fields {
                out.push_str(k);
                out.push(':');
                write_key(v, scope, out);
                out.push(',');
            }
            if r.open {
                out.push_str("..");
            }
            out.push('}');
        }
        TypeExpr::Product(xs) => {
            out.push_str("(*");
            for x in xs {
                out.push(' ');
                write_key(x, scope, out);
            }
            out.push(')');
        }
        TypeExpr::Sum(xs) => {
            let mut keys: Vec<String> = xs
                .iter()
                .map(|x| {
                    let mut k = String::new();
                    write_key(x, scope, &mut k);
                    k
                })
                .collect();
            keys.sort();
            out.push_str("(+");
            for k in keys {
                out.push(' ');
                out.push_str(&k);
            }
            out.push(')');
        }
        TypeExpr::Function(d, c) => {
            out.push_str("(->");
            out.push(' ');
            write_key(d, scope, out);
            out.push(' ');
            write_key(c, scope, out);
            out.push(')');
        }
        TypeExpr::Forall(vars, body) => {
            let _ = write!(out, "(A{} ", vars.len());
            let n = scope.len();
            scope.extend(vars.iter().cloned());
            write_key(body, scope, out);
            scope.truncate(n);
            out.push(')');
        }
        TypeExpr::Exists { var, bound, body } => {
            out.push_str("(E ");
            scope.push(var.clone());
            match bound {
                Some(b) => write_key(b, scope, out),
                None => out.push('_'),
            }
            out.push(' ');
            write_key(body, scope, out);
            scope.pop();
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::expr::Record;

    fn f_rec(v: &str) -> TypeExpr {
        Record::closed().with("f", TypeExpr::func(TypeExpr::var(v), TypeExpr::atom("IntET"))).into()
    }

    #[test]
    fn binder_rename_is_equal() {
        let a = TypeExpr::exists("X", None, f_rec("X"));
        let b = TypeExpr::exists("Z", None, f_rec("Z"));
        assert!(alpha_eq(&a, &b));
    }

    #[test]
    fn product_order_is_significant() {
        let a = TypeExpr::Product(vec![TypeExpr::atom("IntET"), TypeExpr::atom("StrET")]);
        let b = TypeExpr::Product(vec![TypeExpr::atom("StrET"), TypeExpr::atom("IntET")]);
        assert!(!alpha_eq(&a, &b));
    }

    #[test]
    fn sum_order_is_not_significant() {
        let a = TypeExpr::Sum(vec![TypeExpr::atom("IntET"), TypeExpr::atom("StrET")]);
        let b = TypeExpr::Sum(vec![TypeExpr::atom("StrET"), TypeExpr::atom("IntET")]);
        assert!(alpha_eq(&a, &b));
    }

    #[test]
    fn free_and_bound_differ() {
        let a = TypeExpr::exists("X", None, f_rec("X"));
        let b = TypeExpr::exists("Z", None, f_rec("X"));
        assert!(!alpha_eq(&a, &b));
    }

    #[test]
    fn shadowing_uses_innermost() {
        // ∀X.∃X.X  vs  ∀Y.∃Z.Z
        let a = TypeExpr::forall(vec!["X".into()], TypeExpr::exists("X", None, TypeExpr::var("X")));
        let b = TypeExpr::forall(vec!["Y".into()], TypeExpr::exists("Z", None, TypeExpr::var("Z")));
        let c = TypeExpr::forall(vec!["Y".into()], TypeExpr::exists("Z", None, TypeExpr::var("Y")));
        assert!(alpha_eq(&a, &b));
        assert!(!alpha_eq(&a, &c));
    }
}
