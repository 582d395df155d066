//! Surface annotations to type expressions.

use std::collections::{BTreeMap, BTreeSet};

use super::ast::Expr;
use super::model::describe;
use super::parser::parse_expression;
use crate::error::FrontendError;
use crate::prelude::{TUPLE, TYPE_ET};
use crate::types::{normalize, TypeExpr};

/// Elaborated name and parameter count of every class in the run.
#[derive(Debug, Clone, Default)]
pub struct ClassIndex {
    classes: BTreeMap<String, (String, usize)>,
}

impl ClassIndex {
    pub fn insert(&mut self, py_name: impl Into<String>, et_name: impl Into<String>, arity: usize) {
        self.classes.insert(py_name.into(), (et_name.into(), arity));
    }

    pub fn get(&self, py_name: &str) -> Option<(&str, usize)> {
        self.classes.get(py_name).map(|(et, n)| (et.as_str(), *n))
    }
}

/// What an annotation may refer to.
pub struct Scope<'a> {
    pub classes: &'a ClassIndex,
    /// Every TypeVar declared in the module.
    pub declared: &'a BTreeSet<String>,
    /// TypeVars usable here, by source name.
    pub vars: BTreeMap<String, TypeExpr>,
    /// Meaning of `Self`, when inside a class.
    pub self_ty: Option<TypeExpr>,
    /// Diagnostic context, e.g. `MyClass.foo`.
    pub context: String,
}

/// Built-in names and their ET names with parameter counts.
const BUILTINS: &[(&str, &str, usize)] = &[
    ("int", "IntET", 0),
    ("float", "FloatET", 0),
    ("complex", "ComplexET", 0),
    ("bool", "BoolET", 0),
    ("str", "StrET", 0),
    ("bytes", "BytesET", 0),
    ("bytearray", "BytearrayET", 0),
    ("object", "ObjectET", 0),
    ("NoneType", "NoneTypeET", 0),
    ("list", "ListET", 1),
    ("List", "ListET", 1),
    ("set", "SetET", 1),
    ("Set", "SetET", 1),
    ("frozenset", "FrozensetET", 1),
    ("FrozenSet", "FrozensetET", 1),
    ("dict", "DictET", 2),
    ("Dict", "DictET", 2),
    ("TypeVar", "TypeVarET", 0),
];

pub fn builtin_et(name: &str) -> Option<(&'static str, usize)> {
    BUILTINS.iter().find(|(n, _, _)| *n == name).map(|(_, et, k)| (*et, *k))
}

impl Scope<'_> {
    fn unknown(&self, name: impl Into<String>) -> FrontendError {
        FrontendError::UnknownAnnotation { context: self.context.clone(), name: name.into() }
    }

    fn bad(&self, detail: impl Into<String>) -> FrontendError {
        FrontendError::BadAnnotation { context: self.context.clone(), detail: detail.into() }
    }

    pub fn convert(&self, ann: &Expr) -> Result<TypeExpr, FrontendError> {
        match ann {
            Expr::NoneLit => Ok(TypeExpr::none()),
            Expr::Str(src) => {
                let e = parse_expression(src, &self.context).map_err(|_| self.bad(format!("string annotation {src:?}")))?;
                self.convert(&e)
            }
            Expr::BinOp { op: "|", left, right } => {
                Ok(normalize(&TypeExpr::sum(vec![self.convert(left)?, self.convert(right)?])))
            }
            Expr::Subscript(head, args) => self.subscript(head, args),
            Expr::Name(_) | Expr::Attribute(..) => {
                let name = ann.simple_name().ok_or_else(|| self.unknown(describe(ann)))?;
                self.name(name)
            }
            other => Err(self.bad(describe(other))),
        }
    }

    fn name(&self, name: &str) -> Result<TypeExpr, FrontendError> {
        if let Some(v) = self.vars.get(name) {
            return Ok(v.clone());
        }
        if self.declared.contains(name) {
            return Err(FrontendError::MisusedTypeVar { context: self.context.clone(), name: name.to_string() });
        }
        if let Some((et, arity)) = self.classes.get(name) {
            return Ok(applied(et, vec![TypeExpr::Any; arity]));
        }
        match name {
            "None" => return Ok(TypeExpr::none()),
            "Any" => return Ok(TypeExpr::Any),
            "Never" | "NoReturn" => return Ok(TypeExpr::bottom()),
            "type" | "Type" => return Ok(TypeExpr::atom(TYPE_ET)),
            "tuple" | "Tuple" => return Ok(TypeExpr::variadic(TUPLE, TypeExpr::Any)),
            "Callable" => return Ok(TypeExpr::func(TypeExpr::Any, TypeExpr::Any)),
            "Self" => return self.self_ty.clone().ok_or_else(|| self.bad("Self outside a class")),
            _ => {}
        }
        if let Some((et, arity)) = builtin_et(name) {
            return Ok(applied(et, vec![TypeExpr::Any; arity]));
        }
        Err(self.unknown(name))
    }

    fn subscript(&self, head: &Expr, args: &[Expr]) -> Result<TypeExpr, FrontendError> {
        let name = head.simple_name().ok_or_else(|| self.bad(describe(head)))?;
        let all = |xs: &[Expr]| xs.iter().map(|a| self.convert(a)).collect::<Result<Vec<_>, _>>();
        match name {
            "Optional" => {
                let [x] = args else { return Err(self.bad("Optional takes one argument")) };
                Ok(normalize(&TypeExpr::sum(vec![self.convert(x)?, TypeExpr::none()])))
            }
            "Union" => Ok(normalize(&TypeExpr::sum(all(args)?))),
            "ClassVar" | "Final" | "Annotated" | "Required" | "NotRequired" => match args.first() {
                Some(x) => self.convert(x),
                None => Err(self.bad(format!("{name} without an argument"))),
            },
            "Callable" => self.callable(args),
            "tuple" | "Tuple" => match args {
                [Expr::Tuple(xs)] if xs.is_empty() => Ok(TypeExpr::atom(TUPLE)),
                [x, Expr::Ellipsis] => Ok(TypeExpr::variadic(TUPLE, self.convert(x)?)),
                xs => Ok(TypeExpr::apply(TUPLE, all(xs)?)),
            },
            "type" | "Type" => Ok(TypeExpr::atom(TYPE_ET)),
            "Literal" => {
                let tys = args.iter().map(|a| literal_type(a).ok_or_else(|| self.bad(describe(a)))).collect::<Result<Vec<_>, _>>()?;
                Ok(normalize(&TypeExpr::sum(tys)))
            }
            _ => {
                let (et, arity) = match self.classes.get(name) {
                    Some((et, arity)) => (et.to_string(), arity),
                    None => builtin_et(name).map(|(e, k)| (e.to_string(), k)).ok_or_else(|| self.unknown(name))?,
                };
                let args = all(args)?;
                if args.len() != arity {
                    return Err(self.bad(format!("{name} expects {arity} type arguments, got {}", args.len())));
                }
                Ok(applied(&et, args))
            }
        }
    }

    fn callable(&self, args: &[Expr]) -> Result<TypeExpr, FrontendError> {
        let [params, ret] = args else { return Err(self.bad("Callable takes a parameter list and a return type")) };
        let domain = match params {
            Expr::Ellipsis => TypeExpr::Product(vec![
                TypeExpr::variadic(TUPLE, TypeExpr::object()),
                TypeExpr::apply("DictET", vec![TypeExpr::atom("StrET"), TypeExpr::object()]),
            ]),
            Expr::List(xs) => {
                TypeExpr::product(xs.iter().map(|x| self.convert(x)).collect::<Result<Vec<_>, _>>()?)
            }
            other => return Err(self.bad(format!("Callable parameters {}", describe(other)))),
        };
        Ok(TypeExpr::func(domain, self.convert(ret)?))
    }
}

fn applied(et: &str, args: Vec<TypeExpr>) -> TypeExpr {
    if args.is_empty() {
        TypeExpr::atom(et)
    } else {
        TypeExpr::apply(et, args)
    }
}

/// Type of a literal expression, if it is one.
pub fn literal_type(e: &Expr) -> Option<TypeExpr> {
    let name = match e {
        Expr::Str(_) => "StrET",
        Expr::Bytes(_) => "BytesET",
        Expr::Int(_) => "IntET",
        Expr::Float(_) => "FloatET",
        Expr::Imaginary(_) => "ComplexET",
        Expr::Bool(_) => "BoolET",
        Expr::NoneLit => "NoneTypeET",
        Expr::Unary { operand, .. } => return literal_type(operand),
        _ => return None,
    };
    Some(TypeExpr::atom(name))
}

/// TypeVars from `declared` that occur in `e`, in order of appearance.
pub fn type_vars_in(e: &Expr, declared: &BTreeSet<String>, out: &mut Vec<String>) {
    match e {
        Expr::Name(n) if declared.contains(n) && !out.contains(n) => out.push(n.clone()),
        Expr::Subscript(h, xs) => {
            type_vars_in(h, declared, out);
            xs.iter().for_each(|x| type_vars_in(x, declared, out));
        }
        Expr::List(xs) | Expr::Tuple(xs) => xs.iter().for_each(|x| type_vars_in(x, declared, out)),
        Expr::BinOp { left, right, .. } => {
            type_vars_in(left, declared, out);
            type_vars_in(right, declared, out);
        }
        Expr::Str(src) => {
            if let Ok(inner) = parse_expression(src, "") {
                type_vars_in(&inner, declared, out);
            }
        }
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::parse_type_with_vars;

    fn conv(src: &str) -> Result<TypeExpr, FrontendError> {
        let mut classes = ClassIndex::default();
        classes.insert("MyList", "MyListET", 1);
        classes.insert("Point", "PointET", 0);
        let declared = BTreeSet::from(["T".to_string(), "U".to_string()]);
        let scope = Scope {
            classes: &classes,
            declared: &declared,
            vars: BTreeMap::from([("T".to_string(), TypeExpr::var("T"))]),
            self_ty: Some(TypeExpr::var("S")),
            context: "test".into(),
        };
        scope.convert(&parse_expression(src, "t.py").unwrap())
    }

    fn expect(src: &str, ty: &str) {
        let vars = BTreeSet::from(["T".to_string(), "S".to_string()]);
        assert_eq!(conv(src).unwrap(), parse_type_with_vars(ty, &vars).unwrap(), "{src}");
    }

    #[test]
    fn builtin_names_and_generics() {
        expect("int", "IntET");
        expect("None", "NoneTypeET");
        expect("list[int]", "ListET[IntET]");
        expect("typing.Dict[str, list[T]]", "DictET[StrET, ListET[T]]");
        expect("list", "ListET[Any]");
        expect("tuple[int, ...]", "TupleET[IntET, ...]");
        expect("tuple[int, str]", "TupleET[IntET, StrET]");
        expect("Never", "BottomET");
        expect("type", "TypeET");
        expect("Self", "S");
        expect("'Point'", "PointET");
        expect("MyList[int]", "MyListET[IntET]");
        expect("MyList", "MyListET[Any]");
    }

    #[test]
    fn unions_and_callables() {
        expect("Optional[int]", "IntET + NoneTypeET");
        expect("int | None | int", "IntET + NoneTypeET");
        expect("Union[str, int]", "IntET + StrET");
        expect("Callable[[int], str]", "IntET -> StrET");
        expect("Callable[[int, float], str]", "IntET x FloatET -> StrET");
        expect("Callable[[], str]", "NoneTypeET -> StrET");
        expect("Callable[..., str]", "TupleET[ObjectET, ...] x DictET[StrET, ObjectET] -> StrET");
        expect("ClassVar[int]", "IntET");
    }

    #[test]
    fn errors() {
        assert!(matches!(conv("Foo"), Err(FrontendError::UnknownAnnotation { .. })));
        assert!(matches!(conv("list[U]"), Err(FrontendError::MisusedTypeVar { .. })));
        assert!(matches!(conv("MyList[int, str]"), Err(FrontendError::BadAnnotation { .. })));
        assert!(matches!(conv("3"), Err(FrontendError::BadAnnotation { .. })));
    }
}
