//! Class models to existential definitions, plus types for module-level
//! functions and variables.

use std::collections::{BTreeMap, BTreeSet};

use super::annotation::{builtin_et, literal_type, type_vars_in, ClassIndex, Scope};
use super::ast::{CompKind, Expr, Param, ParamKind};
use super::model::{ClassInfo, MemberDecl, ParsedModule};
use crate::engine::mro::Registry;
use crate::engine::subtype::full_record;
use crate::error::{EngineError, FrontendError};
use crate::prelude::{et_name, Definition, FamilyIndex, Origin, TypeEnv, TUPLE, TYPE_ET};
use crate::types::{fresh_name, normalize, Record, TypeExpr};

/// Elaborated state of a run.
#[derive(Debug, Clone, Default)]
pub struct Elaboration {
    pub env: TypeEnv,
    /// Class name to ET name, for every elaborated class.
    pub class_et: BTreeMap<String, String>,
    /// Elaborated classes in elaboration order.
    pub order: Vec<String>,
    pub mros: BTreeMap<String, Vec<String>>,
    pub variables: BTreeMap<String, TypeExpr>,
    pub functions: BTreeMap<String, TypeExpr>,
    pub errors: Vec<FrontendError>,
}

/// Parameters, self variable and base types of a class, fixed before any
/// member is converted.
#[derive(Debug, Clone)]
struct Header {
    et: String,
    /// Source TypeVar name (or implicit name) to parameter variable.
    params: Vec<(String, String)>,
    self_var: String,
    bound: TypeExpr,
    /// Resolved types of the bases other than the bound, in order.
    other_bases: Vec<(String, TypeExpr)>,
    is_meta: bool,
}

const META_BASES: [&str; 3] = ["type", "ABCMeta", "_ProtocolMeta"];

/// `SupportsInt` -> `SI`, `MyList` -> `ML`, `point` -> `P`.
fn initials(name: &str) -> String {
    let caps: String = name.chars().filter(|c| c.is_ascii_uppercase()).collect();
    if caps.is_empty() {
        name.chars().find(|c| c.is_alphabetic()).map(|c| c.to_ascii_uppercase().to_string()).unwrap_or("X".into())
    } else {
        caps
    }
}

fn apply_or_atom(name: &str, args: Vec<TypeExpr>) -> TypeExpr {
    if args.is_empty() {
        TypeExpr::atom(name)
    } else {
        TypeExpr::apply(name, args)
    }
}

struct Elaborator<'a> {
    registry: &'a Registry,
    index: ClassIndex,
    headers: BTreeMap<String, Header>,
    out: Elaboration,
}

pub fn elaborate(modules: &[ParsedModule], env: TypeEnv, registry: &Registry) -> Elaboration {
    let mut el = Elaborator {
        registry,
        index: ClassIndex::default(),
        headers: BTreeMap::new(),
        out: Elaboration { env, ..Default::default() },
    };

    let mut classes: Vec<(&ClassInfo, &BTreeSet<String>)> = Vec::new();
    let mut seen = BTreeSet::new();
    for m in modules {
        for c in &m.classes {
            if !seen.insert(c.name.clone()) {
                el.out.errors.push(FrontendError::DuplicateClass(c.name.clone()));
                continue;
            }
            classes.push((c, &m.type_vars));
        }
    }
    // Bases have strictly shorter linearizations than their subclasses.
    let mut ordered = Vec::new();
    for (i, (c, tv)) in classes.iter().enumerate() {
        match registry.linearize(&c.name) {
            Ok(mro) => {
                ordered.push((mro.len(), i, *c, *tv));
                el.out.mros.insert(c.name.clone(), mro);
            }
            Err(e) => el.out.errors.push((c.name.clone(), e).into()),
        }
    }
    ordered.sort_by_key(|(len, i, _, _)| (*len, *i));

    let mut ready = Vec::new();
    for (_, _, c, tv) in &ordered {
        match el.header(c, tv) {
            Ok(h) => {
                el.index.insert(c.name.clone(), h.et.clone(), h.params.len());
                el.headers.insert(c.name.clone(), h);
                ready.push((*c, *tv));
            }
            Err(e) => el.out.errors.push(e),
        }
    }
    for (c, tv) in ready {
        if let Err(e) = el.class(c, tv) {
            el.out.errors.push(e);
        }
    }
    for m in modules {
        el.module_values(m);
    }
    el.out
}

impl Elaborator<'_> {
    fn scope<'s>(&'s self, declared: &'s BTreeSet<String>, h: Option<&Header>, context: String) -> Scope<'s> {
        Scope {
            classes: &self.index,
            declared,
            vars: h
                .map(|h| h.params.iter().map(|(py, v)| (py.clone(), TypeExpr::var(v.clone()))).collect())
                .unwrap_or_default(),
            self_ty: h.map(|h| TypeExpr::var(h.self_var.clone())),
            context,
        }
    }

    /// Parameter names of a generic base, used for the implicit parameters
    /// of a class that names the base without arguments.
    fn base_params(&self, base: &str) -> Vec<String> {
        if let Some(h) = self.headers.get(base) {
            return h.params.iter().map(|(_, v)| v.clone()).collect();
        }
        match builtin_et(base) {
            Some((et, n)) if n > 0 => {
                self.out.env.get(et).map(|d| d.params.clone()).unwrap_or_else(|_| (1..=n).map(|i| format!("T{i}")).collect())
            }
            _ => Vec::new(),
        }
    }

    fn header(&self, c: &ClassInfo, declared: &BTreeSet<String>) -> Result<Header, FrontendError> {
        let mut params: Vec<(String, String)> = c.type_params.iter().map(|t| (t.clone(), t.clone())).collect();
        let mut implicit: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for (i, b) in c.bases.iter().enumerate() {
            if b.subscripted {
                continue;
            }
            let mut names = Vec::new();
            for p in self.base_params(&b.name) {
                let taken: BTreeSet<String> = params.iter().map(|(_, v)| v.clone()).collect();
                let v = fresh_name(&p, &taken);
                params.push((v.clone(), v.clone()));
                names.push(v);
            }
            if !names.is_empty() {
                implicit.insert(i, names);
            }
        }
        let taken: BTreeSet<String> = params.iter().map(|(_, v)| v.clone()).collect();
        let self_var = fresh_name(&initials(&c.name), &taken);

        let provisional = Header {
            et: et_name(&c.name),
            params,
            self_var,
            bound: TypeExpr::object(),
            other_bases: Vec::new(),
            is_meta: false,
        };
        let scope = self.scope(declared, Some(&provisional), c.name.clone());
        let param_vars: Vec<TypeExpr> = provisional.params.iter().map(|(_, v)| TypeExpr::var(v.clone())).collect();

        let has_real_base = c.bases.iter().any(|b| !matches!(b.name.as_str(), "ABC" | "Generic"));
        let mut resolved: Vec<(String, TypeExpr)> = Vec::new();
        for (i, b) in c.bases.iter().enumerate() {
            let ty = match b.name.as_str() {
                "ABC" => continue,
                "Generic" if has_real_base => continue,
                "Generic" | "Protocol" => {
                    let args = if b.subscripted {
                        b.args.iter().map(|a| scope.convert(a)).collect::<Result<Vec<_>, _>>()?
                    } else {
                        param_vars.clone()
                    };
                    let idx = if b.name == "Generic" {
                        FamilyIndex::generic(args.len())
                    } else {
                        FamilyIndex::protocol(args.len())
                    };
                    if b.name == "Generic" && args.is_empty() {
                        return Err(FrontendError::BadAnnotation {
                            context: c.name.clone(),
                            detail: "Generic needs at least one type parameter".into(),
                        });
                    }
                    apply_or_atom(&idx.et_name(), args)
                }
                n if META_BASES.contains(&n) => TypeExpr::atom(TYPE_ET),
                "object" => TypeExpr::object(),
                n if b.subscripted => {
                    let head = Expr::Name(n.to_string());
                    scope.convert(&Expr::Subscript(Box::new(head), b.args.clone()))?
                }
                n => match implicit.get(&i) {
                    Some(vs) => {
                        let et = self.index.get(n).map(|(e, _)| e.to_string()).or_else(|| builtin_et(n).map(|(e, _)| e.to_string()));
                        let et = et.ok_or_else(|| FrontendError::UnknownAnnotation { context: c.name.clone(), name: n.to_string() })?;
                        TypeExpr::apply(et, vs.iter().map(|v| TypeExpr::var(v.clone())).collect())
                    }
                    None => scope.convert(&Expr::Name(n.to_string()))?,
                },
            };
            resolved.push((b.name.clone(), ty));
        }
        let mut iter = resolved.into_iter();
        let bound = iter.next().map(|(_, t)| t).unwrap_or_else(TypeExpr::object);
        let other_bases = iter.filter(|(n, _)| !matches!(n.as_str(), "Generic" | "Protocol")).collect();
        let is_meta = self.registry.subclass_of(&c.name, "type", &Default::default()).unwrap_or(false);
        Ok(Header { bound, other_bases, is_meta, ..provisional })
    }

    fn class(&mut self, c: &ClassInfo, declared: &BTreeSet<String>) -> Result<(), FrontendError> {
        let h = self.headers[&c.name].clone();
        let self_ty = TypeExpr::var(h.self_var.clone());
        let mut record = Record::open();
        let mut param_names = BTreeMap::new();
        for (name, m) in &c.members {
            let scope = self.scope(declared, Some(&h), format!("{}.{}", c.name, name));
            let ty = match &m.decl {
                MemberDecl::Method { params, returns, .. } => {
                    param_names.insert(name.clone(), m.param_names());
                    self.signature(params, returns.as_ref(), &scope, true, name == "__init__")
                }
                MemberDecl::Lambda { params, body } => {
                    param_names.insert(name.clone(), m.param_names());
                    let ret = literal_type(body).unwrap_or(TypeExpr::Any);
                    self.signature(params, None, &scope, true, false).map(|t| match t {
                        TypeExpr::Function(d, _) => TypeExpr::Function(d, Box::new(ret)),
                        other => other,
                    })
                }
                MemberDecl::Attribute { annotation, value } | MemberDecl::InstanceAttribute { annotation, value } => {
                    match annotation {
                        Some(a) => scope.convert(a),
                        None => Ok(value.as_ref().map(|v| self.value_type(v, &BTreeMap::new())).unwrap_or(TypeExpr::Any)),
                    }
                }
            };
            match ty {
                Ok(t) => {
                    record.fields.insert(name.clone(), t);
                }
                Err(e) => {
                    self.out.errors.push(e);
                    record.fields.insert(name.clone(), TypeExpr::Any);
                }
            }
        }

        // Members of bases outside the bound's linearization.
        let mro = &self.out.mros[&c.name];
        let first_base = c.bases.iter().map(|b| b.name.as_str()).find(|n| !matches!(*n, "ABC" | "Generic"));
        let covered: BTreeSet<String> = match first_base.and_then(|b| self.registry.linearize(b).ok()) {
            Some(l) => l.into_iter().collect(),
            None => BTreeSet::new(),
        };
        // Names defined earlier in the MRO through the bound shadow later ones.
        let mut shadowed: BTreeSet<String> = BTreeSet::new();
        for ancestor in mro.iter().skip(1) {
            if covered.contains(ancestor) {
                let et = match self.headers.get(ancestor) {
                    Some(ah) => Some(ah.et.clone()),
                    None => super::annotation::builtin_et(ancestor).map(|(et, _)| et.to_string()),
                };
                if let Some(def) = et.and_then(|et| self.out.env.get(&et).ok()) {
                    shadowed.extend(def.signature.fields.keys().cloned());
                }
                continue;
            }
            let Some(ah) = self.headers.get(ancestor) else { continue };
            let args = match h.other_bases.iter().find(|(n, _)| n == ancestor) {
                Some((_, t)) => t.head_args().to_vec(),
                None => vec![TypeExpr::Any; ah.params.len()],
            };
            let named = apply_or_atom(&ah.et, args);
            let Ok((_, sig)) = self.out.env.open(&named, &self_ty) else { continue };
            for (k, v) in sig.fields {
                if !shadowed.contains(&k) {
                    record.fields.entry(k).or_insert(v);
                }
            }
        }

        let mut def = Definition::new(h.et.clone(), h.self_var.clone(), record);
        def.params = h.params.iter().map(|(_, v)| v.clone()).collect();
        def.bound = Some(h.bound.clone());
        def.is_meta = h.is_meta;
        def.kind = c.kind;
        def.origin = Origin::User;
        def.param_names = param_names;
        self.out.env.insert(def).map_err(|e| FrontendError::Class { class: c.name.clone(), source: Box::new(EngineError::Env(e)) })?;
        for (_, t) in &h.other_bases {
            if let Some(head) = t.head() {
                self.out.env.add_edge(h.et.clone(), head.to_string());
            }
        }
        self.out.class_et.insert(c.name.clone(), h.et.clone());
        self.out.order.push(c.name.clone());
        Ok(())
    }

    /// `Function(params, return)` for a def. For methods the first
    /// positional parameter is the self type and `__init__` returns it.
    /// TypeVars not bound by the enclosing scope are quantified here.
    fn signature(
        &self,
        params: &[Param],
        returns: Option<&Expr>,
        scope: &Scope,
        method: bool,
        init: bool,
    ) -> Result<TypeExpr, FrontendError> {
        let mut local = Vec::new();
        for e in params.iter().filter_map(|p| p.annotation.as_ref()).chain(returns) {
            type_vars_in(e, scope.declared, &mut local);
        }
        local.retain(|v| !scope.vars.contains_key(v));
        let mut vars = scope.vars.clone();
        let mut taken: BTreeSet<String> = scope.vars.values().flat_map(crate::types::free_vars).collect();
        if let Some(s) = &scope.self_ty {
            taken.extend(crate::types::free_vars(s));
        }
        let mut bound = Vec::new();
        for v in &local {
            let name = fresh_name(v, &taken);
            taken.insert(name.clone());
            vars.insert(v.clone(), TypeExpr::var(name.clone()));
            bound.push(name);
        }
        let inner = Scope {
            classes: scope.classes,
            declared: scope.declared,
            vars,
            self_ty: scope.self_ty.clone(),
            context: scope.context.clone(),
        };
        let ann = |p: &Param| p.annotation.as_ref().map(|a| inner.convert(a)).transpose();
        let mut factors = Vec::new();
        for (i, p) in params.iter().enumerate() {
            let ty = match p.kind {
                ParamKind::Positional if method && i == 0 => {
                    inner.self_ty.clone().unwrap_or(TypeExpr::Any)
                }
                ParamKind::Positional | ParamKind::KeywordOnly => ann(p)?.unwrap_or(TypeExpr::Any),
                ParamKind::VarArgs => TypeExpr::variadic(TUPLE, ann(p)?.unwrap_or_else(TypeExpr::object)),
                ParamKind::VarKeywords => {
                    TypeExpr::apply("DictET", vec![TypeExpr::atom("StrET"), ann(p)?.unwrap_or_else(TypeExpr::object)])
                }
            };
            factors.push(ty);
        }
        let ret = if init && inner.self_ty.is_some() {
            inner.self_ty.clone().unwrap()
        } else {
            match returns {
                Some(r) => inner.convert(r)?,
                None => TypeExpr::Any,
            }
        };
        Ok(TypeExpr::forall(bound, TypeExpr::func(TypeExpr::product(factors), ret)))
    }

    fn module_values(&mut self, m: &ParsedModule) {
        for f in &m.functions {
            let scope = self.scope(&m.type_vars, None, f.name.clone());
            match self.signature(&f.params, f.returns.as_ref(), &scope, false, false) {
                Ok(t) => {
                    self.out.functions.insert(f.name.clone(), t);
                }
                Err(e) => self.out.errors.push(e),
            }
        }
        let mut vars: BTreeMap<String, TypeExpr> = BTreeMap::new();
        for v in &m.variables {
            let ty = match &v.annotation {
                Some(a) => {
                    let scope = self.scope(&m.type_vars, None, v.name.clone());
                    match scope.convert(a) {
                        Ok(t) => t,
                        Err(e) => {
                            self.out.errors.push(e);
                            TypeExpr::Any
                        }
                    }
                }
                None => match &v.value {
                    Some(e) => self.value_type(e, &vars),
                    None => TypeExpr::Any,
                },
            };
            vars.insert(v.name.clone(), ty);
        }
        self.out.variables.extend(vars);
    }

    fn is_class_name(&self, n: &str) -> bool {
        self.index.get(n).is_some() || builtin_et(n).is_some() || matches!(n, "type" | "object" | "tuple" | "Tuple")
    }

    /// Best-effort type of an expression used as a value.
    fn value_type(&self, e: &Expr, vars: &BTreeMap<String, TypeExpr>) -> TypeExpr {
        if let Some(t) = literal_type(e) {
            return t;
        }
        let join = |xs: &[Expr]| -> TypeExpr {
            if xs.is_empty() {
                return TypeExpr::Any;
            }
            normalize(&TypeExpr::sum(xs.iter().map(|x| self.value_type(x, vars)).collect()))
        };
        match e {
            Expr::Name(_) | Expr::Attribute(..) => {
                let Some(n) = e.simple_name() else { return TypeExpr::Any };
                if let Some(t) = vars.get(n) {
                    return t.clone();
                }
                if self.is_class_name(n) {
                    return TypeExpr::atom(TYPE_ET);
                }
                self.out.functions.get(n).cloned().unwrap_or(TypeExpr::Any)
            }
            Expr::List(xs) => TypeExpr::apply("ListET", vec![join(xs)]),
            Expr::Set(xs) => TypeExpr::apply("SetET", vec![join(xs)]),
            Expr::Tuple(xs) if xs.is_empty() => TypeExpr::atom(TUPLE),
            Expr::Tuple(xs) => TypeExpr::apply(TUPLE, xs.iter().map(|x| self.value_type(x, vars)).collect()),
            Expr::Dict(entries) => {
                if entries.iter().any(|(k, _)| k.is_none()) {
                    return TypeExpr::apply("DictET", vec![TypeExpr::Any, TypeExpr::Any]);
                }
                let keys: Vec<Expr> = entries.iter().filter_map(|(k, _)| k.clone()).collect();
                let values: Vec<Expr> = entries.iter().map(|(_, v)| v.clone()).collect();
                TypeExpr::apply("DictET", vec![join(&keys), join(&values)])
            }
            Expr::Comprehension { kind, .. } => match kind {
                CompKind::List => TypeExpr::apply("ListET", vec![TypeExpr::Any]),
                CompKind::Set => TypeExpr::apply("SetET", vec![TypeExpr::Any]),
                CompKind::Dict => TypeExpr::apply("DictET", vec![TypeExpr::Any, TypeExpr::Any]),
                CompKind::Generator => TypeExpr::Any,
            },
            Expr::Lambda { params, body } => {
                let ret = literal_type(body).unwrap_or(TypeExpr::Any);
                TypeExpr::func(TypeExpr::product(vec![TypeExpr::Any; params.len()]), ret)
            }
            Expr::Call { func, args, .. } => {
                let Some(n) = func.simple_name() else { return TypeExpr::Any };
                let arg_types: Vec<TypeExpr> = args.iter().map(|a| self.value_type(a, vars)).collect();
                if let Some((et, _)) = self.index.get(n) {
                    return self.construct(et, &arg_types);
                }
                match n {
                    "type" if args.len() == 1 => return TypeExpr::atom(TYPE_ET),
                    "tuple" => return TypeExpr::variadic(TUPLE, TypeExpr::Any),
                    _ => {}
                }
                if let Some((et, arity)) = builtin_et(n) {
                    return match (arity, arg_types.first()) {
                        (0, _) => TypeExpr::atom(et),
                        (1, Some(TypeExpr::Apply { args, variadic: false, .. })) if args.len() == 1 => {
                            TypeExpr::apply(et, args.clone())
                        }
                        (1, Some(TypeExpr::Apply { ctor, args, .. })) if ctor == TUPLE && args.len() == 1 => {
                            TypeExpr::apply(et, args.clone())
                        }
                        (k, _) => TypeExpr::apply(et, vec![TypeExpr::Any; k]),
                    };
                }
                match self.out.functions.get(n).or_else(|| vars.get(n)) {
                    Some(TypeExpr::Function(_, ret)) => ret.as_ref().clone(),
                    _ => TypeExpr::Any,
                }
            }
            _ => TypeExpr::Any,
        }
    }

    /// Instance type of a call to a class, inferring type arguments from
    /// `__init__` parameters or, failing that, from a container bound.
    fn construct(&self, et: &str, args: &[TypeExpr]) -> TypeExpr {
        let Ok(def) = self.out.env.get(et) else { return TypeExpr::atom(et) };
        if def.params.is_empty() {
            return TypeExpr::atom(et);
        }
        let params: Vec<String> = def.params.clone();
        let generic = TypeExpr::apply(et, params.iter().map(|p| TypeExpr::var(p.clone())).collect());
        let me = TypeExpr::var(fresh_name("Self", &params.iter().cloned().collect()));
        let mut bindings: BTreeMap<String, TypeExpr> = BTreeMap::new();
        if let Ok(rec) = full_record(&self.out.env, &generic, &me) {
            if let Some(TypeExpr::Function(dom, _)) = rec.fields.get("__init__") {
                let formals = match dom.as_ref() {
                    TypeExpr::Product(xs) => xs[1..].to_vec(),
                    _ => Vec::new(),
                };
                for (f, a) in formals.iter().zip(args) {
                    unify(f, a, &params, &mut bindings);
                }
            }
        }
        if bindings.len() < params.len() {
            if let (Some(bound), Some(first)) = (&def.bound, args.first()) {
                unify(bound, first, &params, &mut bindings);
            }
        }
        let resolved: Vec<TypeExpr> = params.iter().map(|p| bindings.get(p).cloned().unwrap_or(TypeExpr::Any)).collect();
        TypeExpr::apply(et, resolved)
    }
}

/// One-way first-order matching of `pattern` against `actual`, binding the
/// variables in `params`.
fn unify(pattern: &TypeExpr, actual: &TypeExpr, params: &[String], out: &mut BTreeMap<String, TypeExpr>) {
    match (pattern, actual) {
        (TypeExpr::Var(v), _) if params.contains(v) => {
            if !matches!(actual, TypeExpr::Any) {
                out.entry(v.clone()).or_insert_with(|| actual.clone());
            }
        }
        (TypeExpr::Apply { ctor: c1, args: a1, .. }, TypeExpr::Apply { ctor: c2, args: a2, .. })
            if c1 == c2 && a1.len() == a2.len() =>
        {
            for (p, a) in a1.iter().zip(a2) {
                unify(p, a, params, out);
            }
        }
        (TypeExpr::Function(d1, r1), TypeExpr::Function(d2, r2)) => {
            unify(d1, d2, params, out);
            unify(r1, r2, params, out);
        }
        (TypeExpr::Product(xs), TypeExpr::Product(ys)) if xs.len() == ys.len() => {
            for (p, a) in xs.iter().zip(ys) {
                unify(p, a, params, out);
            }
        }
        _ => {}
    }
}
