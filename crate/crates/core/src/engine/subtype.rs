//! Subtyping with derivations.
//!
//! Named types are references into the environment and are unfolded on
//! demand through their bound; a goal met again while it is still being
//! decided is accepted (coinduction), which makes recursive definitions such
//! as `IntET`/`StrET` terminate.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::EngineError;
use crate::prelude::{parse_family, DefKind, Origin, TypeEnv, TUPLE};
use crate::types::{all_vars, alpha_eq, canonical_key, fresh_name, substitute, Record, TypeExpr, BOTTOM, OBJECT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Reflexivity,
    Any,
    Bottom,
    Top,
    AtomEdge,
    /// A goal already under consideration.
    Coinduction,
    VarBound,
    Record,
    Function,
    Product,
    SumLeft,
    SumRight,
    Apply,
    TupleVariadic,
    Invariant,
    Exists,
    Forall,
    /// Named type compared through its bound.
    Unfold,
    /// Named type packed into an existential or protocol.
    Pack,
    /// Named type replaced by the existential it stands for.
    Expand,
    Mismatch,
}

impl Rule {
    pub fn is_leaf(self) -> bool {
        matches!(
            self,
            Rule::Reflexivity | Rule::Any | Rule::Bottom | Rule::Top | Rule::AtomEdge | Rule::Coinduction | Rule::Mismatch
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Rule::Reflexivity => "reflexivity",
            Rule::Any => "any",
            Rule::Bottom => "bottom",
            Rule::Top => "top",
            Rule::AtomEdge => "atom-edge",
            Rule::Coinduction => "coinduction",
            Rule::VarBound => "var-bound",
            Rule::Record => "record",
            Rule::Function => "function",
            Rule::Product => "product",
            Rule::SumLeft => "sum-left",
            Rule::SumRight => "sum-right",
            Rule::Apply => "apply",
            Rule::TupleVariadic => "tuple-variadic",
            Rule::Invariant => "invariant",
            Rule::Exists => "exists",
            Rule::Forall => "forall",
            Rule::Unfold => "unfold",
            Rule::Pack => "pack",
            Rule::Expand => "expand",
            Rule::Mismatch => "mismatch",
        }
    }
}

/// Evidence for a subtype verdict. The verdict of an inner node is the
/// conjunction of its premises; rules with alternatives keep only the
/// successful alternative, or every failed one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Derivation {
    pub verdict: bool,
    pub rule: Rule,
    pub lhs: TypeExpr,
    pub rhs: TypeExpr,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<Derivation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Derivation {
    fn leaf(rule: Rule, verdict: bool, lhs: &TypeExpr, rhs: &TypeExpr) -> Self {
        Derivation { verdict, rule, lhs: lhs.clone(), rhs: rhs.clone(), premises: Vec::new(), note: None }
    }

    fn mismatch(lhs: &TypeExpr, rhs: &TypeExpr, note: impl Into<String>) -> Self {
        Derivation { note: Some(note.into()), ..Derivation::leaf(Rule::Mismatch, false, lhs, rhs) }
    }

    fn node(rule: Rule, lhs: &TypeExpr, rhs: &TypeExpr, premises: Vec<Derivation>) -> Self {
        let verdict = premises.iter().all(|p| p.verdict);
        Derivation { verdict, rule, lhs: lhs.clone(), rhs: rhs.clone(), premises, note: None }
    }

    /// Conjunction over premises holds at every inner node.
    pub fn is_consistent(&self) -> bool {
        if self.premises.is_empty() {
            return self.rule.is_leaf() || self.verdict;
        }
        self.verdict == self.premises.iter().all(|p| p.verdict) && self.premises.iter().all(|p| p.is_consistent())
    }

    /// The innermost failing judgement, following the first failed premise.
    pub fn first_failure(&self) -> Option<&Derivation> {
        if self.verdict {
            return None;
        }
        match self.premises.iter().find(|p| !p.verdict) {
            Some(p) => p.first_failure(),
            None => Some(self),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    /// Indented tree, one judgement per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, depth: usize, out: &mut String) {
        let mark = if self.verdict { "ok" } else { "FAIL" };
        let _ = write!(out, "{:indent$}[{}] {} <: {}  ({})", "", mark, self.lhs, self.rhs, self.rule.name(), indent = depth * 2);
        if let Some(n) = &self.note {
            let _ = write!(out, ": {n}");
        }
        out.push('\n');
        for p in &self.premises {
            p.render_into(depth + 1, out);
        }
    }
}

/// Decides `a <: b` under `assumptions` (variable, bound) pairs.
pub fn subtype(
    a: &TypeExpr,
    b: &TypeExpr,
    env: &TypeEnv,
    assumptions: &[(String, TypeExpr)],
) -> Result<Derivation, EngineError> {
    let mut c = Checker::new(env);
    c.assumptions.extend(assumptions.iter().cloned());
    c.check(a, b)
}

pub fn is_subtype(a: &TypeExpr, b: &TypeExpr, env: &TypeEnv) -> Result<bool, EngineError> {
    Ok(subtype(a, b, env, &[])?.verdict)
}

pub struct Checker<'e> {
    env: &'e TypeEnv,
    assumptions: Vec<(String, TypeExpr)>,
    pending: HashSet<(String, String)>,
}

fn is_named(e: &TypeExpr) -> bool {
    matches!(e, TypeExpr::Atom(_) | TypeExpr::Apply { .. })
}

impl<'e> Checker<'e> {
    pub fn new(env: &'e TypeEnv) -> Self {
        Checker { env, assumptions: Vec::new(), pending: HashSet::new() }
    }

    pub fn assume(&mut self, var: impl Into<String>, bound: TypeExpr) {
        self.assumptions.push((var.into(), bound));
    }

    fn bound_of(&self, var: &str) -> Option<&TypeExpr> {
        self.assumptions.iter().rev().find(|(v, _)| v == var).map(|(_, b)| b)
    }

    pub fn check(&mut self, a: &TypeExpr, b: &TypeExpr) -> Result<Derivation, EngineError> {
        if alpha_eq(a, b) {
            // still reject references to unknown names
            for n in a.referenced_names() {
                if n != TUPLE {
                    self.env.get(&n)?;
                }
            }
            return Ok(Derivation::leaf(Rule::Reflexivity, true, a, b));
        }
        if matches!(a, TypeExpr::Any) || matches!(b, TypeExpr::Any) {
            return Ok(Derivation::leaf(Rule::Any, true, a, b));
        }
        if a.is_atom(BOTTOM) {
            return Ok(Derivation::leaf(Rule::Bottom, true, a, b));
        }
        if b.is_atom(OBJECT) {
            return Ok(Derivation::leaf(Rule::Top, true, a, b));
        }
        if let TypeExpr::Sum(alts) = a {
            let premises = alts.iter().map(|x| self.check(x, b)).collect::<Result<Vec<_>, _>>()?;
            return Ok(Derivation::node(Rule::SumLeft, a, b, premises));
        }
        if let TypeExpr::Sum(alts) = b {
            let mut failed = Vec::new();
            for alt in alts {
                let d = self.check(a, alt)?;
                if d.verdict {
                    return Ok(Derivation::node(Rule::SumRight, a, b, vec![d]));
                }
                failed.push(d);
            }
            if let TypeExpr::Var(v) = a {
                if let Some(bound) = self.bound_of(v).cloned() {
                    let d = self.check(&bound, b)?;
                    if d.verdict {
                        return Ok(Derivation::node(Rule::VarBound, a, b, vec![d]));
                    }
                }
            }
            if is_named(a) {
                if let Some(d) = self.unfold(a, b)? {
                    if d.verdict {
                        return Ok(d);
                    }
                }
            }
            return Ok(Derivation::node(Rule::SumRight, a, b, failed));
        }
        match (a, b) {
            (TypeExpr::Var(v), _) => {
                let Some(bound) = self.bound_of(v).cloned() else {
                    return Ok(Derivation::mismatch(a, b, format!("nothing is known about {v}")));
                };
                let d = self.check(&bound, b)?;
                Ok(Derivation::node(Rule::VarBound, a, b, vec![d]))
            }
            (_, TypeExpr::Var(v)) => Ok(Derivation::mismatch(a, b, format!("only {v} itself is a subtype of {v}"))),
            (TypeExpr::Record(ra), TypeExpr::Record(rb)) => self.record(a, ra, b, rb),
            (TypeExpr::Function(da, ca), TypeExpr::Function(db, cb)) => {
                let dom = self.check(db, da)?;
                let cod = self.check(ca, cb)?;
                Ok(Derivation::node(Rule::Function, a, b, vec![dom, cod]))
            }
            (TypeExpr::Product(xs), TypeExpr::Product(ys)) => {
                if xs.len() != ys.len() {
                    return Ok(Derivation::mismatch(a, b, format!("{} factors against {}", xs.len(), ys.len())));
                }
                let premises = xs.iter().zip(ys).map(|(x, y)| self.check(x, y)).collect::<Result<Vec<_>, _>>()?;
                Ok(Derivation::node(Rule::Product, a, b, premises))
            }
            (TypeExpr::Exists { .. }, TypeExpr::Exists { .. }) => self.exists(a, b),
            (TypeExpr::Forall(va, ba), TypeExpr::Forall(vb, bb)) => {
                if va.len() != vb.len() {
                    return Ok(Derivation::mismatch(a, b, "different numbers of type parameters"));
                }
                let mut avoid = all_vars(a);
                avoid.extend(all_vars(b));
                avoid.extend(self.assumptions.iter().map(|(v, _)| v.clone()));
                let mut body_a = ba.as_ref().clone();
                let mut body_b = bb.as_ref().clone();
                for (x, y) in va.iter().zip(vb) {
                    let z = fresh_name(x, &avoid);
                    avoid.insert(z.clone());
                    body_a = substitute(&body_a, x, &TypeExpr::var(z.clone()));
                    body_b = substitute(&body_b, y, &TypeExpr::var(z));
                }
                let d = self.check(&body_a, &body_b)?;
                Ok(Derivation::node(Rule::Forall, a, b, vec![d]))
            }
            (x, y) if is_named(x) && is_named(y) => self.named(a, b),
            (x, TypeExpr::Exists { .. }) if is_named(x) => self.pack(a, b),
            (TypeExpr::Exists { .. }, y) if is_named(y) => {
                if self.env.resolve(b)?.0.origin == Origin::Prelude {
                    return Ok(Derivation::mismatch(a, b, "built-in types are not abbreviations"));
                }
                let expanded = self.env.expand(b)?;
                let d = self.check(a, &expanded)?;
                Ok(Derivation::node(Rule::Expand, a, b, vec![d]))
            }
            (x, TypeExpr::Record(_)) if is_named(x) => {
                let rec = full_record(self.env, a, a)?;
                let d = self.check(&TypeExpr::Record(rec), b)?;
                Ok(Derivation::node(Rule::Unfold, a, b, vec![d]))
            }
            (x, _) if is_named(x) => match self.unfold(a, b)? {
                Some(d) => Ok(d),
                None => Ok(Derivation::mismatch(a, b, "incompatible type forms")),
            },
            _ => Ok(Derivation::mismatch(a, b, "incompatible type forms")),
        }
    }

    fn record(&mut self, a: &TypeExpr, ra: &Record, b: &TypeExpr, rb: &Record) -> Result<Derivation, EngineError> {
        let mut premises = Vec::new();
        if !rb.open {
            if ra.open {
                premises.push(Derivation::mismatch(a, b, "an open record is not comparable with a closed one"));
            } else {
                for extra in ra.fields.keys().filter(|k| !rb.fields.contains_key(*k)) {
                    premises.push(Derivation::mismatch(a, b, format!("unexpected member {extra}")));
                }
            }
        }
        for (name, tb) in &rb.fields {
            match ra.fields.get(name) {
                Some(ta) => {
                    let mut d = self.check(ta, tb)?;
                    d.note.get_or_insert_with(|| format!("member {name}"));
                    premises.push(d);
                }
                None => premises.push(Derivation::mismatch(a, b, format!("missing member {name}"))),
            }
        }
        Ok(Derivation::node(Rule::Record, a, b, premises))
    }

    fn exists(&mut self, a: &TypeExpr, b: &TypeExpr) -> Result<Derivation, EngineError> {
        let (TypeExpr::Exists { var: xa, bound: ba, body: ta }, TypeExpr::Exists { var: xb, bound: bb, body: tb }) =
            (a, b)
        else {
            unreachable!()
        };
        let mut avoid: BTreeSet<String> = all_vars(a);
        avoid.extend(all_vars(b));
        avoid.extend(self.assumptions.iter().map(|(v, _)| v.clone()));
        let z = fresh_name(xa, &avoid);
        let zv = TypeExpr::var(z.clone());
        let object = TypeExpr::object();
        let bound_a = substitute(ba.as_deref().unwrap_or(&object), xa, &zv);
        let bound_b = substitute(bb.as_deref().unwrap_or(&object), xb, &zv);
        let body_a = substitute(ta, xa, &zv);
        let body_b = substitute(tb, xb, &zv);
        self.assume(z, bound_a.clone());
        let result = (|| {
            let bounds = self.check(&bound_a, &bound_b)?;
            let bodies = self.check(&body_a, &body_b)?;
            Ok(Derivation::node(Rule::Exists, a, b, vec![bounds, bodies]))
        })();
        self.assumptions.pop();
        result
    }

    /// `a` is a subtype of `∃X<:T.τ` when it can serve as the hidden type:
    /// `a <: T[a/X]` and the members of `a` satisfy `τ[a/X]`.
    fn pack(&mut self, a: &TypeExpr, b: &TypeExpr) -> Result<Derivation, EngineError> {
        let TypeExpr::Exists { var, bound, body } = b else { unreachable!() };
        let mut premises = Vec::new();
        if let Some(t) = bound {
            premises.push(self.check(a, &substitute(t, var, a))?);
        }
        let rec = TypeExpr::Record(full_record(self.env, a, a)?);
        premises.push(self.check(&rec, &substitute(body, var, a))?);
        Ok(Derivation::node(Rule::Pack, a, b, premises))
    }

    fn named(&mut self, a: &TypeExpr, b: &TypeExpr) -> Result<Derivation, EngineError> {
        let (ha, hb) = (a.head().unwrap(), b.head().unwrap());
        let def_a = self.env.resolve(a)?.0.into_owned();
        let def_b = self.env.resolve(b)?.0.into_owned();
        if ha == hb {
            return self.same_constructor(a, b);
        }
        if self.env.is_nominal_subtype(ha, hb) && (b.head_args().is_empty() || alpha_eq_args(a, b)) {
            return Ok(Derivation::leaf(Rule::AtomEdge, true, a, b));
        }
        let key = (canonical_key(a), canonical_key(b));
        if self.pending.contains(&key) {
            return Ok(Derivation::leaf(Rule::Coinduction, true, a, b));
        }
        self.pending.insert(key.clone());
        let result = (|| {
            let mut failed = Vec::new();
            if def_a.bound.is_some() {
                if let Some(d) = self.unfold(a, b)? {
                    if d.verdict {
                        return Ok(d);
                    }
                    failed.push(d);
                }
            }
            if def_b.kind == DefKind::Protocol {
                let expanded = protocol_marker_dropped(self.env.expand(b)?);
                let d = self.pack(a, &expanded)?;
                if d.verdict {
                    return Ok(Derivation::node(Rule::Expand, a, b, vec![d]));
                }
                failed.push(d);
            }
            if failed.is_empty() {
                return Ok(Derivation::mismatch(a, b, format!("{ha} is not declared a subtype of {hb}")));
            }
            Ok(Derivation::node(Rule::Unfold, a, b, failed))
        })();
        self.pending.remove(&key);
        result
    }

    /// Compares a named type through its bound.
    fn unfold(&mut self, a: &TypeExpr, b: &TypeExpr) -> Result<Option<Derivation>, EngineError> {
        let (bound, _) = self.env.open(a, a)?;
        let Some(bound) = bound else { return Ok(None) };
        if alpha_eq(&bound, a) {
            return Ok(None);
        }
        let d = self.check(&bound, b)?;
        Ok(Some(Derivation::node(Rule::Unfold, a, b, vec![d])))
    }

    fn same_constructor(&mut self, a: &TypeExpr, b: &TypeExpr) -> Result<Derivation, EngineError> {
        let (
            TypeExpr::Apply { ctor, args: xs, variadic: va },
            TypeExpr::Apply { args: ys, variadic: vb, .. },
        ) = (a, b)
        else {
            // an atom against an application of the same name
            self.env.check_well_formed(a)?;
            self.env.check_well_formed(b)?;
            return Ok(Derivation::mismatch(a, b, "ill-formed application"));
        };
        if ctor == TUPLE {
            match (va, vb) {
                (false, true) => {
                    let premises = xs.iter().map(|x| self.check(x, &ys[0])).collect::<Result<Vec<_>, _>>()?;
                    return Ok(Derivation::node(Rule::TupleVariadic, a, b, premises));
                }
                (true, false) => {
                    return Ok(Derivation::mismatch(a, b, "a variadic tuple is not a fixed-length tuple"));
                }
                _ => {}
            }
        } else {
            self.env.check_well_formed(a)?;
        }
        if xs.len() != ys.len() || va != vb {
            return Ok(Derivation::mismatch(a, b, format!("{} type arguments against {}", xs.len(), ys.len())));
        }
        let mut premises = Vec::new();
        for (x, y) in xs.iter().zip(ys) {
            premises.push(self.invariant(x, y)?);
        }
        Ok(Derivation::node(Rule::Apply, a, b, premises))
    }

    /// Type arguments are invariant: equal up to renaming, or mutual
    /// subtypes (which admits `Any`).
    fn invariant(&mut self, x: &TypeExpr, y: &TypeExpr) -> Result<Derivation, EngineError> {
        if alpha_eq(x, y) {
            return Ok(Derivation::leaf(Rule::Reflexivity, true, x, y));
        }
        let down = self.check(x, y)?;
        if !down.verdict {
            let mut d = Derivation::node(Rule::Invariant, x, y, vec![down]);
            d.note = Some("type arguments are invariant".into());
            return Ok(d);
        }
        let up = self.check(y, x)?;
        let mut d = Derivation::node(Rule::Invariant, x, y, vec![down, up]);
        d.note = Some("type arguments are invariant".into());
        Ok(d)
    }
}

fn alpha_eq_args(a: &TypeExpr, b: &TypeExpr) -> bool {
    let (xs, ys) = (a.head_args(), b.head_args());
    xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_eq(x, y))
}

/// Members of a named type along its bound chain, nearest definition first,
/// with `self_ty` as the self type.
pub fn full_record(env: &TypeEnv, named: &TypeExpr, self_ty: &TypeExpr) -> Result<Record, EngineError> {
    let mut rec = Record::open();
    let mut seen = BTreeSet::new();
    let mut current = Some(named.clone());
    while let Some(n) = current.take() {
        if !is_named(&n) || !seen.insert(canonical_key(&n)) {
            break;
        }
        let (bound, sig) = env.open(&n, self_ty)?;
        for (k, v) in sig.fields {
            rec.fields.entry(k).or_insert(v);
        }
        current = bound;
    }
    Ok(rec)
}

/// Implementors of a protocol need not inherit `Protocol`: a bound from the
/// protocol family only marks the definition as a protocol.
fn protocol_marker_dropped(expanded: TypeExpr) -> TypeExpr {
    match expanded {
        TypeExpr::Exists { var, bound: Some(b), body }
            if b.head().and_then(parse_family).is_some_and(|f| f.et_name().starts_with("ProtocolET")) =>
        {
            TypeExpr::Exists { var, bound: None, body }
        }
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prelude::prelude_env;
    use crate::types::parse_type;

    fn t(s: &str) -> TypeExpr {
        parse_type(s).unwrap()
    }

    fn sub(a: &str, b: &str) -> Derivation {
        let env = prelude_env();
        let d = subtype(&t(a), &t(b), &env, &[]).unwrap();
        assert!(d.is_consistent(), "{}", d.render());
        d
    }

    #[test]
    fn leaf_rules() {
        assert_eq!(sub("IntET", "IntET").rule, Rule::Reflexivity);
        assert_eq!(sub("BottomET", "StrET").rule, Rule::Bottom);
        assert_eq!(sub("StrET -> IntET", "ObjectET").rule, Rule::Top);
        assert_eq!(sub("Any", "StrET").rule, Rule::Any);
        assert_eq!(sub("StrET", "Any").rule, Rule::Any);
        assert_eq!(sub("BoolET", "FloatET").rule, Rule::AtomEdge);
        assert!(!sub("FloatET", "IntET").verdict);
    }

    #[test]
    fn function_variance() {
        let d = sub("FloatET -> IntET", "IntET -> BoolET");
        assert!(!d.verdict);
        let fail = d.first_failure().unwrap();
        assert_eq!((fail.lhs.to_string(), fail.rhs.to_string()), ("IntET".into(), "BoolET".into()));
        assert!(d.premises[0].verdict, "domain passes by contravariance");
        assert!(sub("FloatET -> BoolET", "IntET -> BoolET").verdict);
    }

    #[test]
    fn records() {
        assert!(sub("{a: BoolET, b: StrET, ...}", "{a: IntET, ...}").verdict);
        assert!(sub("{a: BoolET, b: StrET}", "{a: IntET, ...}").verdict);
        assert!(!sub("{b: StrET, ...}", "{a: IntET, ...}").verdict);
        assert!(!sub("{a: IntET, ...}", "{a: IntET}").verdict);
        assert!(!sub("{a: IntET, b: IntET}", "{a: IntET}").verdict);
        assert!(sub("{a: BoolET}", "{a: IntET}").verdict);
    }

    #[test]
    fn sums() {
        assert!(sub("IntET", "IntET + NoneTypeET").verdict);
        assert!(sub("BoolET + IntET", "FloatET").verdict);
        assert!(!sub("IntET + StrET", "IntET").verdict);
        assert!(sub("IntET + StrET", "StrET + IntET + BytesET").verdict);
    }

    #[test]
    fn applications_are_invariant() {
        assert!(sub("ListET[IntET]", "ListET[IntET]").verdict);
        assert!(!sub("ListET[BoolET]", "ListET[IntET]").verdict);
        assert!(sub("ListET[Any]", "ListET[IntET]").verdict);
        assert!(sub("TupleET[BoolET, IntET]", "TupleET[IntET, ...]").verdict);
        assert!(!sub("TupleET[StrET, IntET]", "TupleET[IntET, ...]").verdict);
        assert!(!sub("TupleET[IntET, ...]", "TupleET[IntET]").verdict);
    }

    #[test]
    fn recursive_names_terminate() {
        // IntET and StrET refer to each other through their signatures.
        assert!(sub("IntET", "{__repr__: IntET -> StrET, ...}").verdict);
        assert!(!sub("IntET", "StrET").verdict);
    }

    #[test]
    fn existentials() {
        let quack = "∃Q.{quack: Q -> StrET}";
        assert!(sub(quack, "∃Z.{quack: Z -> StrET}").verdict);
        assert!(sub("∃Q<:IntET.{quack: Q -> StrET, extra: Q -> Q, ...}", "∃Q.{quack: Q -> StrET, ...}").verdict);
        assert!(!sub("∃Q.{quack: Q -> StrET, ...}", "∃Q<:IntET.{quack: Q -> StrET, ...}").verdict);
        assert!(sub("IntET", "∃X.{__repr__: X -> StrET, ...}").verdict);
        assert!(!sub("IntET", "∃X.{__len__: X -> IntET, ...}").verdict);
    }

    #[test]
    fn bounded_variables() {
        let env = prelude_env();
        let x = TypeExpr::var("X");
        let d = subtype(&x, &t("FloatET"), &env, &[("X".into(), t("IntET"))]).unwrap();
        assert_eq!(d.rule, Rule::VarBound);
        assert!(d.verdict);
        assert!(!subtype(&x, &t("FloatET"), &env, &[]).unwrap().verdict);
    }

    #[test]
    fn foralls_rename_to_shared_variables() {
        assert!(sub("∀A.A -> A", "∀B.B -> B").verdict);
        assert!(!sub("∀A,B.A -> B", "∀A.A -> A").verdict);
    }

    #[test]
    fn unknown_names_are_errors() {
        let env = prelude_env();
        assert!(matches!(
            subtype(&t("NopeET"), &t("IntET"), &env, &[]),
            Err(EngineError::Env(crate::error::EnvError::UnknownName(_)))
        ));
        assert!(subtype(&t("NopeET"), &t("NopeET"), &env, &[]).is_err());
    }

    #[test]
    fn numeric_tower_can_be_disabled() {
        let mut env = prelude_env();
        env.set_numeric_tower(false);
        assert!(!is_subtype(&t("BoolET"), &t("IntET"), &env).unwrap());
    }

    #[test]
    fn json_shape() {
        let d = sub("BoolET", "IntET");
        let v = serde_json::to_value(&d).unwrap();
        assert_eq!(v["verdict"], true);
        assert_eq!(v["rule"], "atom-edge");
        assert_eq!(v["lhs"]["kind"], "atom");
    }
}
