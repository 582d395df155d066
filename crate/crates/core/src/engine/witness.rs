//! Packing a representation and its member bindings into an existential.

use super::subtype::{Checker, Derivation, Rule};
use crate::error::EngineError;
use crate::prelude::TypeEnv;
use crate::types::{substitute, TypeExpr, Witness};

/// Checks that `w` inhabits `target`: the representation satisfies the
/// bound and every listed member is bound at a subtype of its field type
/// with the representation for the hidden variable.
pub fn check_witness(w: &Witness, target: &TypeExpr, env: &TypeEnv) -> Result<Derivation, EngineError> {
    let expanded;
    let exists = match target {
        TypeExpr::Exists { .. } => target,
        TypeExpr::Atom(_) | TypeExpr::Apply { .. } => {
            expanded = env.expand(target)?;
            &expanded
        }
        other => return Err(EngineError::NotExistential(other.to_string())),
    };
    let TypeExpr::Exists { var, bound, body } = exists else {
        return Err(EngineError::NotExistential(target.to_string()));
    };
    let TypeExpr::Record(rec) = body.as_ref() else {
        return Err(EngineError::NotExistential(target.to_string()));
    };
    let rep = TypeExpr::atom(w.representation.clone());
    let mut checker = Checker::new(env);
    let mut premises = Vec::new();
    if let Some(b) = bound {
        let b = substitute(b, var, &rep);
        let d = checker.check(&rep, &b)?;
        if !d.verdict {
            return Err(EngineError::BoundViolated { representation: w.representation.clone(), bound: b.to_string() });
        }
        premises.push(d);
    }
    for (name, field) in &rec.fields {
        let Some(bound_ty) = w.bindings.get(name) else {
            return Err(EngineError::MissingMember(name.clone()));
        };
        let mut d = checker.check(bound_ty, &substitute(field, var, &rep))?;
        d.note = Some(format!("member {name}"));
        premises.push(d);
    }
    let verdict = premises.iter().all(|p| p.verdict);
    Ok(Derivation { verdict, rule: Rule::Pack, lhs: rep, rhs: target.clone(), premises, note: None })
}
