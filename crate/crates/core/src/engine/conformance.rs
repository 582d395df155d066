//! Member-level structural conformance (type-instance-of).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::subtype::{full_record, Checker, Derivation};
use crate::error::EngineError;
use crate::prelude::{Origin, TypeEnv};
use crate::types::{all_vars, canonical_key, fresh_name, Record, TypeExpr};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberReport {
    pub name: String,
    pub expected: TypeExpr,
    pub actual: Option<TypeExpr>,
    pub compatible: bool,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConformanceReport {
    pub subject: String,
    pub target: String,
    pub verdict: bool,
    pub members: Vec<MemberReport>,
}

impl ConformanceReport {
    pub fn failures(&self) -> impl Iterator<Item = &MemberReport> {
        self.members.iter().filter(|m| !m.compatible)
    }

    pub fn member(&self, name: &str) -> Option<&MemberReport> {
        self.members.iter().find(|m| m.name == name)
    }
}

impl fmt::Display for ConformanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.verdict { "conforms to" } else { "does not conform to" };
        writeln!(f, "{} {} {}", self.subject, verdict, self.target)?;
        for m in &self.members {
            let mark = if m.compatible { "ok" } else { "FAIL" };
            writeln!(f, "  [{mark}] {}", m.name)?;
            writeln!(f, "      expected: {}", m.expected)?;
            match &m.actual {
                Some(a) => writeln!(f, "      actual:   {a}")?,
                None => writeln!(f, "      actual:   (missing)")?,
            }
            if !m.reason.is_empty() {
                writeln!(f, "      reason:   {}", m.reason)?;
            }
        }
        Ok(())
    }
}

/// Name of the shared self variable, `Self` unless taken.
fn self_var(exprs: &[&TypeExpr], env: &TypeEnv) -> String {
    let mut avoid = BTreeSet::new();
    for e in exprs {
        avoid.extend(all_vars(e));
    }
    for name in exprs.iter().flat_map(|e| e.referenced_names()) {
        if let Ok(def) = env.get(&name) {
            avoid.extend(def.params.iter().cloned());
            avoid.insert(def.self_var.clone());
            avoid.extend(all_vars(&def.to_type()));
        }
    }
    fresh_name("Self", &avoid)
}

/// A named type with `Any` for every parameter of a generic definition.
pub fn at_any(env: &TypeEnv, name: &str) -> Result<TypeExpr, EngineError> {
    let def = env.get(name)?;
    Ok(if def.params.is_empty() {
        TypeExpr::atom(name)
    } else {
        TypeExpr::apply(name, vec![TypeExpr::Any; def.params.len()])
    })
}

/// Members a target requires: its own signature plus what it inherits from
/// other user-defined definitions. Prelude plumbing such as `__new__` of the
/// protocol family is not required.
pub fn required_members(env: &TypeEnv, target: &TypeExpr, self_ty: &TypeExpr) -> Result<Record, EngineError> {
    let mut rec = Record::open();
    let mut seen = BTreeSet::new();
    let mut current = Some(target.clone());
    let mut first = true;
    while let Some(n) = current.take() {
        if !matches!(n, TypeExpr::Atom(_) | TypeExpr::Apply { .. }) || !seen.insert(canonical_key(&n)) {
            break;
        }
        let (def, _) = env.resolve(&n)?;
        let user = def.origin == Origin::User;
        let (bound, sig) = env.open(&n, self_ty)?;
        if first || user {
            for (k, v) in sig.fields {
                rec.fields.entry(k).or_insert(v);
            }
        }
        first = false;
        current = bound;
    }
    Ok(rec)
}

/// Does the class `subject` structurally conform to `target`? Both are ET
/// names; generic parameters left open are taken as `Any`.
pub fn type_instance_of(subject: &str, target: &str, env: &TypeEnv) -> Result<ConformanceReport, EngineError> {
    let s = at_any(env, subject)?;
    let t = at_any(env, target)?;
    let mut report = type_instance_of_at(&s, &t, env)?;
    report.subject = subject.to_string();
    report.target = target.to_string();
    Ok(report)
}

/// As [`type_instance_of`] for applied types such as `SupportsAbsET[FloatET]`.
pub fn type_instance_of_at(
    subject: &TypeExpr,
    target: &TypeExpr,
    env: &TypeEnv,
) -> Result<ConformanceReport, EngineError> {
    let target_def = env.resolve(target)?.0.into_owned();
    let subject_def = env.resolve(subject)?.0.into_owned();
    let me = TypeExpr::var(self_var(&[subject, target], env));
    let required = required_members(env, target, &me)?;
    if required.fields.is_empty() && !target_def.kind.is_interface() {
        return Err(EngineError::NotAnInterface(target.to_string()));
    }
    let offered = full_record(env, subject, &me)?;
    let TypeExpr::Var(me_name) = &me else { unreachable!() };

    let mut members = Vec::new();
    for (name, expected) in &required.fields {
        let Some(actual) = offered.fields.get(name) else {
            members.push(MemberReport {
                name: name.clone(),
                expected: expected.clone(),
                actual: None,
                compatible: false,
                reason: format!("missing member {name}"),
            });
            continue;
        };
        let mut checker = Checker::new(env);
        checker.assume(me_name.clone(), subject.clone());
        let d = checker.check(actual, expected)?;
        let reason = if d.verdict {
            String::new()
        } else {
            let names = target_def
                .param_names
                .get(name)
                .or_else(|| subject_def.param_names.get(name))
                .cloned()
                .unwrap_or_default();
            explain(&d, actual, expected, &names)
        };
        members.push(MemberReport {
            name: name.clone(),
            expected: expected.clone(),
            actual: Some(actual.clone()),
            compatible: d.verdict,
            reason,
        });
    }
    Ok(ConformanceReport {
        subject: subject.to_string(),
        target: target.to_string(),
        verdict: members.iter().all(|m| m.compatible),
        members,
    })
}

/// Names the failing positions of a member comparison.
fn explain(d: &Derivation, actual: &TypeExpr, expected: &TypeExpr, names: &[String]) -> String {
    let (TypeExpr::Function(ad, ac), TypeExpr::Function(ed, ec), [dom, cod]) =
        (actual, expected, d.premises.as_slice())
    else {
        return match d.first_failure().and_then(|f| f.note.as_ref()) {
            Some(note) => format!("{actual} is not a subtype of {expected}: {note}"),
            None => format!("{actual} is not a subtype of {expected}"),
        };
    };
    let mut parts = Vec::new();
    if !dom.verdict {
        match (ad.as_ref(), ed.as_ref()) {
            (TypeExpr::Product(aps), TypeExpr::Product(eps)) if aps.len() == eps.len() => {
                for (i, p) in dom.premises.iter().enumerate() {
                    if !p.verdict {
                        parts.push(param_reason(i, names, &eps[i], &aps[i]));
                    }
                }
            }
            (TypeExpr::Product(aps), TypeExpr::Product(eps)) => {
                parts.push(format!("takes {} parameters, expected {}", aps.len(), eps.len()));
            }
            (a, e) => parts.push(param_reason(0, names, e, a)),
        }
    }
    if !cod.verdict {
        parts.push(format!("return: {ac} is not a subtype of {ec}"));
    }
    if parts.is_empty() {
        parts.push(format!("{actual} is not a subtype of {expected}"));
    }
    parts.join("; ")
}

fn param_reason(i: usize, names: &[String], expected: &TypeExpr, actual: &TypeExpr) -> String {
    let label = match names.get(i) {
        Some(n) => format!("parameter {i} ({n})"),
        None => format!("parameter {i}"),
    };
    format!("{label}: {expected} is not a subtype of {actual}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prelude::{prelude_env, DefKind, Definition};
    use crate::types::parse_type_with_vars;

    fn def(name: &str, self_var: &str, bound: Option<&str>, members: &[(&str, &str)], kind: DefKind) -> Definition {
        let vars = BTreeSet::from([self_var.to_string()]);
        let mut rec = Record::open();
        for (m, ty) in members {
            rec = rec.with(*m, parse_type_with_vars(ty, &vars).unwrap());
        }
        let mut d = Definition::new(name, self_var, rec);
        d.bound = bound.map(|b| parse_type_with_vars(b, &vars).unwrap());
        d.kind = kind;
        d.origin = Origin::User;
        d
    }

    fn corpus() -> TypeEnv {
        let mut env = prelude_env();
        let p = [("foo", "MP x IntET -> BoolET")];
        env.insert(def("MyProtocolET", "MP", Some("ProtocolET0"), &p, DefKind::Protocol)).unwrap();
        for (name, sv, sig) in [
            ("Sub1ET", "S1", "S1 x FloatET -> IntET"),
            ("Sub2ET", "S2", "S2 x StrET -> IntET"),
            ("Sub3ET", "S3", "S3 x IntET -> BoolET"),
        ] {
            let mut d = def(name, sv, Some("ObjectET"), &[("foo", sig)], DefKind::Plain);
            d.param_names.insert("foo".into(), vec!["self".into(), "x".into()]);
            env.insert(d).unwrap();
        }
        env
    }

    #[test]
    fn protocol_members_are_compared_on_a_shared_self() {
        let env = corpus();
        let r = type_instance_of("Sub2ET", "MyProtocolET", &env).unwrap();
        assert!(!r.verdict);
        let foo = r.member("foo").unwrap();
        assert_eq!(foo.expected.to_string(), "Self x IntET -> BoolET");
        assert_eq!(foo.actual.as_ref().unwrap().to_string(), "Self x StrET -> IntET");
        assert_eq!(
            foo.reason,
            "parameter 1 (x): IntET is not a subtype of StrET; return: IntET is not a subtype of BoolET"
        );
        assert!(type_instance_of("Sub3ET", "MyProtocolET", &env).unwrap().verdict);
    }

    #[test]
    fn contravariant_parameter_passes_but_return_fails() {
        let env = corpus();
        let r = type_instance_of("Sub1ET", "MyProtocolET", &env).unwrap();
        assert!(!r.verdict);
        assert_eq!(r.member("foo").unwrap().reason, "return: IntET is not a subtype of BoolET");
    }

    #[test]
    fn missing_members_and_monotonicity() {
        let mut env = corpus();
        env.insert(def("EmptyET", "E", Some("ObjectET"), &[], DefKind::Plain)).unwrap();
        env.insert(def(
            "WiderET",
            "W",
            Some("ObjectET"),
            &[("foo", "W x IntET -> BoolET"), ("bar", "W -> StrET")],
            DefKind::Plain,
        ))
        .unwrap();
        let r = type_instance_of("EmptyET", "MyProtocolET", &env).unwrap();
        assert_eq!(r.member("foo").unwrap().reason, "missing member foo");
        assert!(type_instance_of("WiderET", "MyProtocolET", &env).unwrap().verdict);
    }

    #[test]
    fn plain_targets_without_members_are_rejected() {
        let env = corpus();
        assert!(matches!(
            type_instance_of("Sub1ET", "BoolET", &env),
            Err(EngineError::NotAnInterface(_))
        ));
        assert!(type_instance_of("Sub1ET", "NopeET", &env).is_err());
    }

    #[test]
    fn prelude_protocol_plumbing_is_not_required() {
        let env = corpus();
        let r = type_instance_of("Sub3ET", "MyProtocolET", &env).unwrap();
        assert_eq!(r.members.len(), 1);
    }

    #[test]
    fn builtin_subjects() {
        let mut env = prelude_env();
        env.insert(def("SizedET", "SZ", Some("ObjectET"), &[("__len__", "SZ -> IntET")], DefKind::Abc)).unwrap();
        assert!(type_instance_of("ListET", "SizedET", &env).unwrap().verdict);
        assert!(type_instance_of("StrET", "SizedET", &env).unwrap().verdict);
        assert!(!type_instance_of("IntET", "SizedET", &env).unwrap().verdict);
    }
}
