//! Surface model of a parsed module: classes, functions, module variables,
//! TypeVar declarations and ABC registrations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::ast::*;
use super::parser::parse_source;
use crate::error::{FrontendError, Span};
use crate::prelude::DefKind;

#[derive(Debug, Clone, PartialEq)]
pub struct BaseRef {
    /// Last component of the base expression (`typing.Protocol` -> `Protocol`).
    pub name: String,
    pub args: Vec<Expr>,
    pub subscripted: bool,
}

/// How a member was declared. Annotations are kept in surface form and
/// resolved during elaboration, once every class name is known.
#[derive(Debug, Clone, PartialEq)]
pub enum MemberDecl {
    Method { params: Vec<Param>, returns: Option<Expr>, is_abstract: bool },
    /// `name = lambda self, ...: body`
    Lambda { params: Vec<Param>, body: Expr },
    /// Class-level attribute, annotated and/or assigned.
    Attribute { annotation: Option<Expr>, value: Option<Expr> },
    /// Attribute assigned on `self` in `__init__`.
    InstanceAttribute { annotation: Option<Expr>, value: Option<Expr> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MemberSig {
    pub name: String,
    pub decl: MemberDecl,
    pub span: Span,
}

impl MemberSig {
    pub fn is_method(&self) -> bool {
        match &self.decl {
            MemberDecl::Method { params, .. } | MemberDecl::Lambda { params, .. } => !params.is_empty(),
            _ => false,
        }
    }

    /// Source names of the parameters, self included.
    pub fn param_names(&self) -> Vec<String> {
        match &self.decl {
            MemberDecl::Method { params, .. } | MemberDecl::Lambda { params, .. } => {
                params.iter().map(|p| p.name.clone()).collect()
            }
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassInfo {
    pub name: String,
    pub file: String,
    pub bases: Vec<BaseRef>,
    pub type_params: Vec<String>,
    pub members: BTreeMap<String, MemberSig>,
    pub kind: DefKind,
    pub metaclass: Option<String>,
    pub runtime_checkable: bool,
    /// Members present at runtime but outside the modelled subset
    /// (class methods, properties, ...).
    pub skipped_members: BTreeSet<String>,
    pub span: Span,
}

impl ClassInfo {
    pub fn new(name: impl Into<String>, bases: &[&str]) -> Self {
        let mut c = ClassInfo {
            name: name.into(),
            file: String::new(),
            bases: bases
                .iter()
                .map(|b| BaseRef { name: b.to_string(), args: Vec::new(), subscripted: false })
                .collect(),
            type_params: Vec::new(),
            members: BTreeMap::new(),
            kind: DefKind::Plain,
            metaclass: None,
            runtime_checkable: false,
            skipped_members: BTreeSet::new(),
            span: Span::default(),
        };
        c.kind = c.infer_kind();
        c
    }

    pub fn base_names(&self) -> Vec<&str> {
        self.bases.iter().map(|b| b.name.as_str()).collect()
    }

    pub fn defines_subclasshook(&self) -> bool {
        self.members.contains_key("__subclasshook__") || self.skipped_members.contains("__subclasshook__")
    }

    fn infer_kind(&self) -> DefKind {
        if self.bases.iter().any(|b| b.name == "Protocol") {
            DefKind::Protocol
        } else if self.bases.iter().any(|b| b.name == "ABC") || self.metaclass.as_deref() == Some("ABCMeta") {
            DefKind::Abc
        } else {
            DefKind::Plain
        }
    }

    /// Type variables of `Generic[...]`/`Protocol[...]` bases in order, or,
    /// when neither lists any, those of the other subscripted bases.
    pub fn infer_type_params(&mut self, type_vars: &BTreeSet<String>) {
        let collect = |bases: &mut dyn Iterator<Item = &BaseRef>| {
            let mut out = Vec::new();
            for b in bases {
                for a in &b.args {
                    collect_type_vars(a, type_vars, &mut out);
                }
            }
            out
        };
        let explicit = collect(&mut self.bases.iter().filter(|b| b.name == "Generic" || b.name == "Protocol"));
        self.type_params = if explicit.is_empty() { collect(&mut self.bases.iter()) } else { explicit };
    }
}

fn collect_type_vars(e: &Expr, type_vars: &BTreeSet<String>, out: &mut Vec<String>) {
    match e {
        Expr::Name(n) if type_vars.contains(n) => {
            if !out.contains(n) {
                out.push(n.clone());
            }
        }
        Expr::Subscript(head, args) => {
            collect_type_vars(head, type_vars, out);
            args.iter().for_each(|a| collect_type_vars(a, type_vars, out));
        }
        Expr::BinOp { left, right, .. } => {
            collect_type_vars(left, type_vars, out);
            collect_type_vars(right, type_vars, out);
        }
        Expr::List(xs) | Expr::Tuple(xs) => xs.iter().for_each(|a| collect_type_vars(a, type_vars, out)),
        _ => {}
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSig {
    pub name: String,
    pub params: Vec<Param>,
    pub returns: Option<Expr>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub annotation: Option<Expr>,
    pub value: Option<Expr>,
    pub span: Span,
}

/// `Abc.register(Sub)` call or `@Abc.register` decorator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Registration {
    pub abc: String,
    pub subclass: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Warning {
    pub file: String,
    pub span: Span,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: warning: {}", self.file, self.span, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParsedModule {
    pub file: String,
    pub classes: Vec<ClassInfo>,
    pub functions: Vec<FunctionSig>,
    pub variables: Vec<Variable>,
    pub type_vars: BTreeSet<String>,
    /// Local name to imported qualified name.
    pub imports: BTreeMap<String, String>,
    pub registrations: Vec<Registration>,
    pub warnings: Vec<Warning>,
}

pub fn parse_module(source: &str, file: &str) -> Result<ParsedModule, FrontendError> {
    let stmts = parse_source(source, file)?;
    let mut m = ParsedModule { file: file.to_string(), ..Default::default() };
    for s in &stmts {
        if let StmtKind::Assign { targets, value } = &s.kind {
            if is_call_to(value, "TypeVar") {
                for t in targets {
                    if let Expr::Name(n) = t {
                        m.type_vars.insert(n.clone());
                    }
                }
            }
        }
    }
    let mut defined_functions: BTreeMap<String, FunctionDef> = BTreeMap::new();
    for s in stmts {
        m.statement(s, &mut defined_functions)?;
    }
    let type_vars = m.type_vars.clone();
    for c in &mut m.classes {
        c.infer_type_params(&type_vars);
    }
    Ok(m)
}

fn is_call_to(e: &Expr, name: &str) -> bool {
    matches!(e, Expr::Call { func, .. } if func.simple_name() == Some(name))
}

impl ParsedModule {
    fn warn(&mut self, span: Span, message: impl Into<String>) {
        self.warnings.push(Warning { file: self.file.clone(), span, message: message.into() });
    }

    fn statement(&mut self, s: Stmt, functions: &mut BTreeMap<String, FunctionDef>) -> Result<(), FrontendError> {
        let span = s.span;
        match s.kind {
            StmtKind::ClassDef(c) => {
                let info = self.class(c, span)?;
                self.add_class(info);
            }
            StmtKind::FunctionDef(f) => {
                if let Some(d) = f.decorators.iter().find(|d| !is_ignorable_function_decorator(d)) {
                    self.warn(span, format!("function {} skipped: unsupported decorator {}", f.name, describe(d)));
                    return Ok(());
                }
                self.functions.push(FunctionSig {
                    name: f.name.clone(),
                    params: f.params.clone(),
                    returns: f.returns.clone(),
                    span,
                });
                functions.insert(f.name.clone(), f);
            }
            StmtKind::Import { module, names } => {
                for (name, alias) in names {
                    let qualified = match &module {
                        Some(m) => format!("{m}.{name}"),
                        None => name.clone(),
                    };
                    if alias != "*" {
                        self.imports.insert(alias, qualified);
                    }
                }
            }
            StmtKind::Assign { targets, value } => {
                if is_call_to(&value, "TypeVar") {
                    return Ok(());
                }
                if is_call_to(&value, "type") {
                    if let Expr::Call { args, .. } = &value {
                        if args.len() == 3 {
                            match self.type_call(args, functions, span) {
                                Ok(info) => {
                                    for t in &targets {
                                        if t.simple_name() != Some(info.name.as_str()) {
                                            self.warn(span, format!("class {} bound to a different name", info.name));
                                        }
                                    }
                                    self.add_class(info);
                                }
                                Err(msg) => self.warn(span, format!("unsupported type(...) call: {msg}")),
                            }
                            return Ok(());
                        }
                    }
                }
                for t in targets {
                    match t {
                        Expr::Name(name) => self.variables.push(Variable {
                            name,
                            annotation: None,
                            value: Some(value.clone()),
                            span,
                        }),
                        other => self.warn(span, format!("assignment to {} skipped", describe(&other))),
                    }
                }
            }
            StmtKind::AnnAssign { target, annotation, value } => match target {
                Expr::Name(name) => self.variables.push(Variable { name, annotation: Some(annotation), value, span }),
                other => self.warn(span, format!("annotated assignment to {} skipped", describe(&other))),
            },
            StmtKind::Expr(e) => {
                if let Some(r) = registration(&e) {
                    self.registrations.push(r);
                }
            }
            StmtKind::Pass => {}
            StmtKind::Skipped(what) => self.warn(span, format!("unsupported construct skipped: {what}")),
        }
        Ok(())
    }

    fn add_class(&mut self, info: ClassInfo) {
        if let Some(pos) = self.classes.iter().position(|c| c.name == info.name) {
            self.warn(info.span, format!("class {} redefined; the later definition is used", info.name));
            self.classes.remove(pos);
        }
        self.classes.push(info);
    }

    fn class(&mut self, c: ClassDef, span: Span) -> Result<ClassInfo, FrontendError> {
        let mut info = ClassInfo::new(c.name.clone(), &[]);
        info.file = self.file.clone();
        info.span = span;
        for b in &c.bases {
            info.bases.push(self.base_ref(b, &c.name, span)?);
        }
        for (k, v) in &c.keywords {
            if k == "metaclass" {
                info.metaclass = v.simple_name().map(str::to_string);
                if info.metaclass.is_none() {
                    return Err(FrontendError::BadAnnotation {
                        context: c.name.clone(),
                        detail: format!("metaclass must be a name, got {}", describe(v)),
                    });
                }
            } else {
                self.warn(span, format!("class keyword {k} ignored"));
            }
        }
        for d in &c.decorators {
            match d.simple_name() {
                Some("runtime_checkable") => info.runtime_checkable = true,
                _ => {
                    if let Some(r) = decorator_registration(d, &c.name) {
                        self.registrations.push(r);
                    } else {
                        self.warn(span, format!("class decorator {} ignored", describe(d)));
                    }
                }
            }
        }
        for s in c.body {
            self.class_member(&mut info, s);
        }
        info.kind = info.infer_kind();
        Ok(info)
    }

    fn base_ref(&self, e: &Expr, class: &str, span: Span) -> Result<BaseRef, FrontendError> {
        let (head, args, subscripted) = match e {
            Expr::Subscript(head, args) => (head.as_ref(), args.clone(), true),
            other => (other, Vec::new(), false),
        };
        match head.simple_name() {
            Some(n) => Ok(BaseRef { name: n.to_string(), args, subscripted }),
            None => Err(FrontendError::Syntax {
                file: self.file.clone(),
                span,
                message: format!("base of class {class} must be a name, got {}", describe(e)),
            }),
        }
    }

    fn class_member(&mut self, info: &mut ClassInfo, s: Stmt) {
        let span = s.span;
        match s.kind {
            StmtKind::FunctionDef(f) => {
                let mut is_abstract = false;
                for d in &f.decorators {
                    match d.simple_name() {
                        Some("abstractmethod") => is_abstract = true,
                        Some("override" | "final") => {}
                        _ => {
                            self.warn(span, format!("member {}.{} skipped: unsupported decorator {}", info.name, f.name, describe(d)));
                            info.skipped_members.insert(f.name.clone());
                            return;
                        }
                    }
                }
                if f.name == "__init__" {
                    for a in &f.self_assigns {
                        if info.members.contains_key(&a.attr) {
                            continue;
                        }
                        let annotation = a.annotation.clone().or_else(|| param_annotation(&f.params, a.value.as_ref()));
                        let value = match &a.value {
                            Some(Expr::Name(n)) if f.params.iter().any(|p| &p.name == n) => None,
                            v => v.clone(),
                        };
                        info.members.insert(
                            a.attr.clone(),
                            MemberSig {
                                name: a.attr.clone(),
                                decl: MemberDecl::InstanceAttribute { annotation, value },
                                span: a.span,
                            },
                        );
                    }
                }
                let decl = MemberDecl::Method { params: f.params, returns: f.returns, is_abstract };
                info.members.insert(f.name.clone(), MemberSig { name: f.name, decl, span });
            }
            StmtKind::Assign { targets, value } => {
                for t in targets {
                    let Expr::Name(name) = t else {
                        self.warn(span, format!("assignment to {} in class {} skipped", describe(&t), info.name));
                        continue;
                    };
                    let decl = match &value {
                        Expr::Lambda { params, body } => {
                            MemberDecl::Lambda { params: params.clone(), body: body.as_ref().clone() }
                        }
                        v => MemberDecl::Attribute { annotation: None, value: Some(v.clone()) },
                    };
                    info.members.insert(name.clone(), MemberSig { name, decl, span });
                }
            }
            StmtKind::AnnAssign { target: Expr::Name(name), annotation, value } => {
                let decl = MemberDecl::Attribute { annotation: Some(annotation), value };
                info.members.insert(name.clone(), MemberSig { name, decl, span });
            }
            StmtKind::AnnAssign { target, .. } => {
                self.warn(span, format!("annotated assignment to {} in class {} skipped", describe(&target), info.name))
            }
            StmtKind::ClassDef(c) => self.warn(span, format!("nested class {}.{} skipped", info.name, c.name)),
            StmtKind::Skipped(what) => self.warn(span, format!("unsupported construct skipped: {what}")),
            StmtKind::Import { .. } => self.warn(span, "import inside class body skipped"),
            StmtKind::Expr(_) | StmtKind::Pass => {}
        }
    }

    /// `type('Name', (bases,), {members})` with literal arguments.
    fn type_call(
        &mut self,
        args: &[Expr],
        functions: &BTreeMap<String, FunctionDef>,
        span: Span,
    ) -> Result<ClassInfo, String> {
        let Expr::Str(name) = &args[0] else { return Err("class name is not a string literal".into()) };
        let bases = match &args[1] {
            Expr::Tuple(items) => items,
            _ => return Err("bases are not a tuple literal".into()),
        };
        let Expr::Dict(entries) = &args[2] else { return Err("namespace is not a dict literal".into()) };
        let mut info = ClassInfo::new(name.clone(), &[]);
        info.file = self.file.clone();
        info.span = span;
        for b in bases {
            info.bases.push(self.base_ref(b, name, span).map_err(|e| e.to_string())?);
        }
        for (k, v) in entries {
            let Some(Expr::Str(member)) = k else { return Err("namespace keys must be string literals".into()) };
            let decl = match v {
                Expr::Lambda { params, body } => MemberDecl::Lambda { params: params.clone(), body: body.as_ref().clone() },
                Expr::Name(f) if functions.contains_key(f) => {
                    let f = &functions[f];
                    MemberDecl::Method { params: f.params.clone(), returns: f.returns.clone(), is_abstract: false }
                }
                v if v.is_literal() => MemberDecl::Attribute { annotation: None, value: Some(v.clone()) },
                v => return Err(format!("member {member} is not a literal ({})", describe(v))),
            };
            info.members.insert(member.clone(), MemberSig { name: member.clone(), decl, span });
        }
        info.kind = info.infer_kind();
        Ok(info)
    }
}

fn param_annotation(params: &[Param], value: Option<&Expr>) -> Option<Expr> {
    let Some(Expr::Name(n)) = value else { return None };
    params.iter().find(|p| &p.name == n).and_then(|p| p.annotation.clone())
}

fn is_ignorable_function_decorator(d: &Expr) -> bool {
    matches!(d.simple_name(), Some("overload" | "final" | "override"))
}

fn registration(e: &Expr) -> Option<Registration> {
    let Expr::Call { func, args, .. } = e else { return None };
    let Expr::Attribute(abc, method) = func.as_ref() else { return None };
    if method != "register" || args.len() != 1 {
        return None;
    }
    Some(Registration { abc: abc.simple_name()?.to_string(), subclass: args[0].simple_name()?.to_string() })
}

fn decorator_registration(d: &Expr, class: &str) -> Option<Registration> {
    let Expr::Attribute(abc, method) = d else { return None };
    if method != "register" {
        return None;
    }
    Some(Registration { abc: abc.simple_name()?.to_string(), subclass: class.to_string() })
}

/// Short description of an expression for diagnostics.
pub fn describe(e: &Expr) -> String {
    if let Some(d) = e.dotted() {
        return d;
    }
    match e {
        Expr::Call { func, .. } => format!("{}(...)", describe(func)),
        Expr::Subscript(head, _) => format!("{}[...]", describe(head)),
        Expr::Str(_) => "a string".into(),
        Expr::Tuple(_) => "a tuple".into(),
        Expr::List(_) => "a list".into(),
        Expr::Lambda { .. } => "a lambda".into(),
        _ => "an expression".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PROTOCOLS: &str = "\
from typing import Protocol, runtime_checkable

@runtime_checkable
class MyProtocol(Protocol):
    def foo(self, x: int) -> bool: ...

class Sub1:
    def foo(self, x: float) -> int:
        return 1

def f1(x: MyProtocol):
    return None

f1(Sub1())
";

    #[test]
    fn protocol_listing() {
        let m = parse_module(PROTOCOLS, "p.py").unwrap();
        assert_eq!(m.classes.len(), 2);
        let p = &m.classes[0];
        assert_eq!(p.kind, DefKind::Protocol);
        assert!(p.runtime_checkable);
        assert!(p.members["foo"].is_method());
        assert_eq!(m.classes[1].kind, DefKind::Plain);
        assert_eq!(m.functions.len(), 1);
        assert_eq!(m.imports["Protocol"], "typing.Protocol");
        assert!(m.warnings.is_empty(), "{:?}", m.warnings);
    }

    #[test]
    fn abc_listing() {
        let src = "\
from abc import ABCMeta, abstractmethod

class MyABC(metaclass=ABCMeta):
    @abstractmethod
    def foo(self): ...

class MyABCHooked(metaclass=ABCMeta):
    @abstractmethod
    def foo(self): ...

    @classmethod
    def __subclasshook__(cls, subclass):
        return NotImplemented

class Sub2:
    def foo(self):
        return 2

MyABC.register(Sub2)
";
        let m = parse_module(src, "a.py").unwrap();
        assert_eq!(m.classes[0].kind, DefKind::Abc);
        assert_eq!(m.classes[0].metaclass.as_deref(), Some("ABCMeta"));
        assert!(!m.classes[0].defines_subclasshook());
        assert!(m.classes[1].defines_subclasshook());
        assert_eq!(m.registrations, vec![Registration { abc: "MyABC".into(), subclass: "Sub2".into() }]);
        assert_eq!(m.warnings.len(), 1);
    }

    #[test]
    fn generic_params_and_instance_attributes() {
        let src = "\
T = TypeVar('T')
K = TypeVar('K')

class Box(Mapping[K, T], Generic[T]):
    pass

class Point:
    def __init__(self, x: int, y: int, z):
        self.x = x
        self.y = y
        self.z = z
        self.w = 1.5
";
        let m = parse_module(src, "g.py").unwrap();
        assert_eq!(m.classes[0].type_params, ["T"]);
        let point = &m.classes[1];
        let MemberDecl::InstanceAttribute { annotation, value } = &point.members["x"].decl else { panic!() };
        assert_eq!(annotation, &Some(Expr::Name("int".into())));
        assert!(value.is_none());
        let MemberDecl::InstanceAttribute { annotation, value } = &point.members["z"].decl else { panic!() };
        assert!(annotation.is_none() && value.is_none());
        let MemberDecl::InstanceAttribute { value, .. } = &point.members["w"].decl else { panic!() };
        assert_eq!(value, &Some(Expr::Float("1.5".into())));
    }

    #[test]
    fn type_call_form() {
        let src = "MyList = type('MyList', (list, ), {'pretty_string': lambda self: \"test\"})\nbar = [MyList]\n";
        let m = parse_module(src, "t.py").unwrap();
        assert_eq!(m.classes.len(), 1);
        let c = &m.classes[0];
        assert_eq!(c.base_names(), ["list"]);
        assert!(matches!(c.members["pretty_string"].decl, MemberDecl::Lambda { .. }));
        assert_eq!(m.variables.len(), 1);

        let m = parse_module("X = type(name, (list,), {})\n", "t.py").unwrap();
        assert!(m.classes.is_empty());
        assert_eq!(m.warnings.len(), 1);
    }

    #[test]
    fn empty_module() {
        let m = parse_module("", "e.py").unwrap();
        assert!(m.classes.is_empty() && m.functions.is_empty());
    }
}
