//! Free variables and capture-avoiding substitution.

use std::collections::{BTreeMap, BTreeSet};

use super::expr::{Record, TypeExpr};
use crate::error::TypeError;

pub fn free_vars(expr: &TypeExpr) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_free(expr, &mut Vec::new(), &mut out);
    out
}

fn collect_free(expr: &TypeExpr, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match expr {
        TypeExpr::Var(v) => {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        }
        TypeExpr::Forall(vars, body) => {
            let n = bound.len();
            bound.extend(vars.iter().cloned());
            collect_free(body, bound, out);
            bound.truncate(n);
        }
        TypeExpr::Exists { var, bound: b, body } => {
            bound.push(var.clone());
            if let Some(b) = b {
                collect_free(b, bound, out);
            }
            collect_free(body, bound, out);
            bound.pop();
        }
        other => {
            for c in other.children() {
                collect_free(c, bound, out);
            }
        }
    }
}

/// Every variable name occurring in `expr`, bound or free.
pub fn all_vars(expr: &TypeExpr) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let mut stack = vec![expr];
    while let Some(e) = stack.pop() {
        match e {
            TypeExpr::Var(v) => {
                out.insert(v.clone());
            }
            TypeExpr::Forall(vs, _) => out.extend(vs.iter().cloned()),
            TypeExpr::Exists { var, .. } => {
                out.insert(var.clone());
            }
            _ => {}
        }
        stack.extend(e.children());
    }
    out
}

/// A variant of `base` not contained in `avoid`: the base with any numeric
/// suffix stripped, followed by the smallest free number.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    if !avoid.contains(base) {
        return base.to_string();
    }
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "X" } else { stem };
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded counter")
}

/// `expr[replacement/var]`.
pub fn substitute(expr: &TypeExpr, var: &str, replacement: &TypeExpr) -> TypeExpr {
    let mut map = BTreeMap::new();
    map.insert(var.to_string(), replacement.clone());
    substitute_all(expr, &map)
}

/// Simultaneous capture-avoiding substitution.
pub fn substitute_all(expr: &TypeExpr, map: &BTreeMap<String, TypeExpr>) -> TypeExpr {
    if map.is_empty() {
        return expr.clone();
    }
    match expr {
        TypeExpr::Var(v) => map.get(v).cloned().unwrap_or_else(|| expr.clone()),
        TypeExpr::Atom(_) | TypeExpr::Any => expr.clone(),
        TypeExpr::Apply { ctor, args, variadic } => TypeExpr::Apply {
            ctor: ctor.clone(),
            args: args.iter().map(|a| substitute_all(a, map)).collect(),
            variadic: *variadic,
        },
        TypeExpr::Record(r) => TypeExpr::Record(Record {
            fields: r.fields.iter().map(|(k, v)| (k.clone(), substitute_all(v, map))).collect(),
            open: r.open,
        }),
        TypeExpr::Product(xs) => TypeExpr::Product(xs.iter().map(|x| substitute_all(x, map)).collect()),
        TypeExpr::Sum(xs) => TypeExpr::Sum(xs.iter().map(|x| substitute_all(x, map)).collect()),
        TypeExpr::Function(d, c) => TypeExpr::func(substitute_all(d, map), substitute_all(c, map)),
        TypeExpr::Forall(vars, body) => {
            let (vars, inner) = enter_binders(vars, &[body.as_ref()], map);
            TypeExpr::Forall(vars, Box::new(substitute_all(body, &inner)))
        }
        TypeExpr::Exists { var, bound, body } => {
            let mut scope: Vec<&TypeExpr> = vec![body.as_ref()];
            if let Some(b) = bound {
                scope.push(b.as_ref());
            }
            let (mut vars, inner) = enter_binders(std::slice::from_ref(var), &scope, map);
            TypeExpr::Exists {
                var: vars.pop().unwrap(),
                bound: bound.as_ref().map(|b| Box::new(substitute_all(b, &inner))),
                body: Box::new(substitute_all(body, &inner)),
            }
        }
    }
}

/// Computes the substitution to apply below a binder group, renaming binders
/// that would capture a free variable of some replacement.
fn enter_binders(
    vars: &[String],
    scope: &[&TypeExpr],
    map: &BTreeMap<String, TypeExpr>,
) -> (Vec<String>, BTreeMap<String, TypeExpr>) {
    let mut inner: BTreeMap<String, TypeExpr> =
        map.iter().filter(|(k, _)| !vars.contains(k)).map(|(k, v)| (k.clone(), v.clone())).collect();

    // only entries whose variable actually occurs free below matter
    let mut body_free = BTreeSet::new();
    for e in scope {
        body_free.extend(free_vars(e));
    }
    inner.retain(|k, _| body_free.contains(k));
    if inner.is_empty() {
        return (vars.to_vec(), inner);
    }

    let repl_free: BTreeSet<String> = inner.values().flat_map(free_vars).collect();
    let mut avoid: BTreeSet<String> = repl_free.clone();
    avoid.extend(body_free.iter().cloned());
    avoid.extend(inner.keys().cloned());
    avoid.extend(vars.iter().cloned());

    let mut out_vars = Vec::with_capacity(vars.len());
    for v in vars {
        if repl_free.contains(v) {
            let fresh = fresh_name(v, &avoid);
            avoid.insert(fresh.clone());
            inner.insert(v.clone(), TypeExpr::Var(fresh.clone()));
            out_vars.push(fresh);
        } else {
            out_vars.push(v.clone());
        }
    }
    (out_vars, inner)
}

/// Applies a generic (`∀`-headed) type to arguments.
pub fn instantiate(generic: &TypeExpr, args: &[TypeExpr]) -> Result<TypeExpr, TypeError> {
    match generic {
        TypeExpr::Forall(vars, body) => {
            if vars.len() != args.len() {
                return Err(TypeError::ArityMismatch { expected: vars.len(), found: args.len() });
            }
            let map: BTreeMap<String, TypeExpr> = vars.iter().cloned().zip(args.iter().cloned()).collect();
            Ok(substitute_all(body, &map))
        }
        _ => Err(TypeError::NotGeneric(generic.to_string())),
    }
}
