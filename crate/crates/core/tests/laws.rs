//! Algebraic laws of the subtype relation on generated closed types.

use std::sync::OnceLock;

use proptest::prelude::*;
use pyts_core::engine::{is_subtype, subtype};
use pyts_core::frontend::{Project, ProjectOptions};
use pyts_core::types::Record;
use pyts_core::{TypeEnv, TypeExpr};

const CORPUS: &str = "
from typing import Protocol

class A:
    def f(self, x: int) -> str: ...

class B(A):
    def g(self) -> float: ...

class C(B):
    pass

class P(Protocol):
    def f(self, x: int) -> str: ...

class Q(Protocol):
    def g(self) -> complex: ...
";

fn env() -> &'static TypeEnv {
    static ENV: OnceLock<TypeEnv> = OnceLock::new();
    ENV.get_or_init(|| {
        let p = Project::from_sources(&[("laws.py".into(), CORPUS.into())], ProjectOptions::default()).unwrap();
        assert!(p.errors.is_empty(), "{:?}", p.errors);
        p.env
    })
}

const ATOMS: [&str; 16] = [
    "IntET", "BoolET", "FloatET", "ComplexET", "StrET", "BytesET", "NoneTypeET", "ObjectET", "BottomET",
    "TypeET", "AET", "BET", "CET", "PET", "QET", "ProtocolET0",
];

fn atom() -> impl Strategy<Value = TypeExpr> {
    prop::sample::select(&ATOMS[..]).prop_map(TypeExpr::atom)
}

/// Closed types without `Any`.
fn closed() -> impl Strategy<Value = TypeExpr> {
    atom().prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| TypeExpr::apply("ListET", vec![t])),
            (inner.clone(), inner.clone()).prop_map(|(k, v)| TypeExpr::apply("DictET", vec![k, v])),
            inner.clone().prop_map(|t| TypeExpr::variadic("TupleET", t)),
            prop::collection::vec(inner.clone(), 2..4).prop_map(|xs| TypeExpr::apply("TupleET", xs)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| TypeExpr::func(a, b)),
            prop::collection::vec(inner.clone(), 2..4).prop_map(TypeExpr::Product),
            prop::collection::vec(inner.clone(), 2..4).prop_map(TypeExpr::Sum),
            (inner.clone(), prop::option::of(inner.clone()), any::<bool>()).prop_map(|(a, b, open)| {
                let r = if open { Record::open() } else { Record::closed() };
                let r = r.with("f", a);
                TypeExpr::record(match b {
                    Some(b) => r.with("g", b),
                    None => r,
                })
            }),
            inner.prop_map(|t| TypeExpr::exists(
                "X",
                None,
                TypeExpr::record(Record::open().with("f", TypeExpr::func(TypeExpr::var("X"), t)))
            )),
        ]
    })
}

/// A supertype of `t` built by rules the relation should admit.
fn widen(t: TypeExpr, steps: Vec<u8>) -> TypeExpr {
    let mut steps = steps.into_iter();
    widen_with(&t, &mut steps)
}

fn widen_with(t: &TypeExpr, steps: &mut impl Iterator<Item = u8>) -> TypeExpr {
    let s = steps.next().unwrap_or(0);
    match (t, s % 8) {
        (_, 0) => t.clone(),
        (_, 1) => TypeExpr::object(),
        (_, 2) => TypeExpr::Sum(vec![t.clone(), TypeExpr::atom(ATOMS[s as usize % ATOMS.len()])]),
        (TypeExpr::Atom(n), _) => TypeExpr::atom(match n.as_str() {
            "BoolET" => "IntET",
            "IntET" => "FloatET",
            "FloatET" => "ComplexET",
            "CET" => "BET",
            "BET" => "AET",
            "AET" => "PET",
            "BottomET" => ATOMS[s as usize % ATOMS.len()],
            other => other,
        }),
        (TypeExpr::Function(d, c), _) => TypeExpr::func(narrow_with(d, steps), widen_with(c, steps)),
        (TypeExpr::Product(xs), _) => TypeExpr::Product(xs.iter().map(|x| widen_with(x, steps)).collect()),
        (TypeExpr::Sum(xs), _) => {
            TypeExpr::Sum(xs.iter().map(|x| widen_with(x, steps)).chain([TypeExpr::none()]).collect())
        }
        (TypeExpr::Record(r), 3) => TypeExpr::record(Record { fields: r.fields.clone(), open: true }),
        (TypeExpr::Record(r), _) => {
            let mut out = Record { fields: Default::default(), open: true };
            for (k, v) in r.fields.iter().skip(1) {
                out.fields.insert(k.clone(), widen_with(v, steps));
            }
            TypeExpr::record(out)
        }
        (TypeExpr::Apply { ctor, args, variadic: false }, _) if ctor == "TupleET" => {
            TypeExpr::variadic("TupleET", TypeExpr::object())
        }
        _ => t.clone(),
    }
}

/// A subtype of `t`, dual to `widen_with`.
fn narrow_with(t: &TypeExpr, steps: &mut impl Iterator<Item = u8>) -> TypeExpr {
    let s = steps.next().unwrap_or(0);
    match (t, s % 6) {
        (_, 0) => t.clone(),
        (_, 1) => TypeExpr::bottom(),
        (TypeExpr::Atom(n), _) => TypeExpr::atom(match n.as_str() {
            "IntET" => "BoolET",
            "FloatET" => "IntET",
            "ComplexET" => "FloatET",
            "AET" => "BET",
            "BET" => "CET",
            "ObjectET" => ATOMS[s as usize % ATOMS.len()],
            other => other,
        }),
        (TypeExpr::Function(d, c), _) => TypeExpr::func(widen_with(d, steps), narrow_with(c, steps)),
        (TypeExpr::Product(xs), _) => TypeExpr::Product(xs.iter().map(|x| narrow_with(x, steps)).collect()),
        (TypeExpr::Sum(xs), _) => TypeExpr::sum(xs.iter().skip(1).cloned().collect()),
        _ => t.clone(),
    }
}

fn triple() -> impl Strategy<Value = (TypeExpr, TypeExpr, TypeExpr)> {
    (closed(), prop::collection::vec(any::<u8>(), 12), prop::collection::vec(any::<u8>(), 12)).prop_map(
        |(a, s1, s2)| {
            let b = widen(a.clone(), s1);
            let c = widen(b.clone(), s2);
            (a, b, c)
        },
    )
}

fn sub(a: &TypeExpr, b: &TypeExpr) -> bool {
    is_subtype(a, b, env()).unwrap_or_else(|e| panic!("{a} <: {b}: {e}"))
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 1000, max_global_rejects: 100_000, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn reflexivity(a in closed()) {
        prop_assert!(sub(&a, &a), "{}", a);
    }

    #[test]
    fn transitivity((a, b, c) in triple()) {
        prop_assume!(sub(&a, &b) && sub(&b, &c));
        prop_assert!(sub(&a, &c), "{} <: {} <: {}", a, b, c);
    }

    #[test]
    fn transitivity_on_arbitrary_triples(a in closed(), b in closed(), c in closed()) {
        if sub(&a, &b) && sub(&b, &c) {
            prop_assert!(sub(&a, &c), "{} <: {} <: {}", a, b, c);
        }
    }

    #[test]
    fn bottom_and_top(a in closed()) {
        prop_assert!(sub(&TypeExpr::bottom(), &a), "BottomET <: {}", a);
        prop_assert!(sub(&a, &TypeExpr::object()), "{} <: ObjectET", a);
    }

    #[test]
    fn function_variance(a1 in closed(), r1 in closed(), a2 in closed(), r2 in closed()) {
        let f = TypeExpr::func(a1.clone(), r1.clone());
        let g = TypeExpr::func(a2.clone(), r2.clone());
        prop_assert_eq!(sub(&f, &g), sub(&a2, &a1) && sub(&r1, &r2), "{} <: {}", f, g);
    }

    #[test]
    fn any_is_compatible_both_ways(a in closed()) {
        prop_assert!(sub(&a, &TypeExpr::Any) && sub(&TypeExpr::Any, &a));
    }

    #[test]
    fn derivations_are_conjunctions(a in closed(), b in closed()) {
        let d = subtype(&a, &b, env(), &[]).unwrap();
        prop_assert!(d.is_consistent(), "{}", d.render());
        prop_assert_eq!(d.verdict, sub(&a, &b));
    }

    #[test]
    fn widening_yields_supertypes((a, b, _c) in triple()) {
        prop_assert!(sub(&a, &b), "{} <: {}", a, b);
    }
}
