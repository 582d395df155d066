use super::alpha::canonical_key;
use super::expr::{Record, TypeExpr};

/// Flattens nested sums, drops alpha-equivalent duplicates, collapses
/// singleton sums and orders alternatives by their printed form (ties broken
/// by canonical key). Record fields are kept in name order by construction.
pub fn normalize(expr: &TypeExpr) -> TypeExpr {
    match expr {
        TypeExpr::Atom(_) | TypeExpr::Var(_) | TypeExpr::Any => expr.clone(),
        TypeExpr::Apply { ctor, args, variadic } => TypeExpr::Apply {
            ctor: ctor.clone(),
            args: args.iter().map(normalize).collect(),
            variadic: *variadic,
        },
        TypeExpr::Record(r) => TypeExpr::Record(Record {
            fields: r.fields.iter().map(|(k, v)| (k.clone(), normalize(v))).collect(),
            open: r.open,
        }),
        TypeExpr::Product(xs) => TypeExpr::Product(xs.iter().map(normalize).collect()),
        TypeExpr::Function(d, c) => TypeExpr::func(normalize(d), normalize(c)),
        TypeExpr::Forall(vars, body) => TypeExpr::Forall(vars.clone(), Box::new(normalize(body))),
        TypeExpr::Exists { var, bound, body } => TypeExpr::Exists {
            var: var.clone(),
            bound: bound.as_ref().map(|b| Box::new(normalize(b))),
            body: Box::new(normalize(body)),
        },
        TypeExpr::Sum(xs) => {
            let mut flat = Vec::new();
            for x in xs {
                match normalize(x) {
                    TypeExpr::Sum(inner) => flat.extend(inner),
                    other => flat.push(other),
                }
            }
            let mut keyed: Vec<(String, String, TypeExpr)> =
                flat.into_iter().map(|t| (t.to_string(), canonical_key(&t), t)).collect();
            keyed.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
            let mut seen = std::collections::BTreeSet::new();
            keyed.retain(|(_, k, _)| seen.insert(k.clone()));
            TypeExpr::sum(keyed.into_iter().map(|(_, _, t)| t).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int() -> TypeExpr {
        TypeExpr::atom("IntET")
    }
    fn s() -> TypeExpr {
        TypeExpr::atom("StrET")
    }

    #[test]
    fn flattens_and_dedupes() {
        let e = TypeExpr::Sum(vec![int(), TypeExpr::Sum(vec![int(), s()])]);
        assert_eq!(normalize(&e), TypeExpr::Sum(vec![int(), s()]));
    }

    #[test]
    fn fixed_order() {
        let e = TypeExpr::Sum(vec![TypeExpr::none(), int()]);
        assert_eq!(normalize(&e), TypeExpr::Sum(vec![int(), TypeExpr::none()]));
    }

    #[test]
    fn collapses_singletons() {
        let e = TypeExpr::Sum(vec![int(), int()]);
        assert_eq!(normalize(&e), int());
    }
}
