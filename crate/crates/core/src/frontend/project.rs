//! A set of source files parsed, linearized and elaborated together.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use super::ast::{Expr, Param};
use super::elaborate::elaborate;
use super::model::{parse_module, ClassInfo, MemberDecl, ParsedModule, Registration, Warning};
use crate::engine::conformance::{type_instance_of, ConformanceReport};
use crate::engine::mro::Registry;
use crate::engine::relations::{relations_graph, RelationsGraph};
use crate::error::{EngineError, EnvError, FrontendError, MroError};
use crate::par::{self, Exec};
use crate::prelude::{prelude_env, Definition, TypeEnv, VirtualTable};
use crate::types::TypeExpr;

const STUBS: &str = include_str!("stubs.pyi");
const STUB_FILE: &str = "<typing>";

#[derive(Debug, Clone)]
pub struct ProjectOptions {
    pub numeric_tower: bool,
    pub virtual_table: VirtualTable,
    pub exec: Exec,
}

impl Default for ProjectOptions {
    fn default() -> Self {
        ProjectOptions { numeric_tower: true, virtual_table: VirtualTable::default(), exec: Exec::default() }
    }
}

#[derive(Debug, Clone)]
pub struct Project {
    pub env: TypeEnv,
    pub registry: Registry,
    /// User classes followed by the library interfaces they mention.
    pub classes: Vec<ClassInfo>,
    pub class_et: BTreeMap<String, String>,
    pub mros: BTreeMap<String, Vec<String>>,
    pub variables: BTreeMap<String, TypeExpr>,
    pub functions: BTreeMap<String, TypeExpr>,
    pub registrations: Vec<Registration>,
    pub warnings: Vec<Warning>,
    /// Elaboration failures; the affected classes or members are left out
    /// or typed `Any`.
    pub errors: Vec<FrontendError>,
    pub virtual_table: VirtualTable,
    pub options: ProjectOptions,
    /// Library interfaces pulled in because user code names them.
    pub library: BTreeSet<String>,
}

impl Project {
    /// Parses every `(file name, source)` pair. Syntax errors are fatal;
    /// elaboration problems are collected in `errors`.
    pub fn from_sources(sources: &[(String, String)], options: ProjectOptions) -> Result<Project, FrontendError> {
        let parsed = par::map(options.exec, sources, |(file, src)| parse_module(src, file));
        let mut modules = parsed.into_iter().collect::<Result<Vec<_>, _>>()?;

        let defined: BTreeSet<String> = modules.iter().flat_map(|m| m.classes.iter().map(|c| c.name.clone())).collect();
        let mut mentioned = BTreeSet::new();
        for m in &modules {
            module_names(m, &mut mentioned);
        }
        let mut stubs = parse_module(STUBS, STUB_FILE).expect("embedded stubs parse");
        stubs.classes.retain(|c| mentioned.contains(&c.name) && !defined.contains(&c.name));
        stubs.warnings.clear();
        let library: BTreeSet<String> = stubs.classes.iter().map(|c| c.name.clone()).collect();
        if !library.is_empty() {
            modules.push(stubs);
        }

        let registry = Registry::with_classes(modules.iter().flat_map(|m| m.classes.iter()));
        let mut env = prelude_env();
        env.set_numeric_tower(options.numeric_tower);
        env.apply_virtual_table(&options.virtual_table);
        let el = elaborate(&modules, env, &registry);

        let mut warnings = Vec::new();
        let mut registrations = Vec::new();
        let mut classes = Vec::new();
        for m in &mut modules {
            warnings.append(&mut m.warnings);
            registrations.append(&mut m.registrations);
            classes.extend(m.classes.iter().cloned());
        }
        Ok(Project {
            env: el.env,
            registry,
            classes,
            class_et: el.class_et,
            mros: el.mros,
            variables: el.variables,
            functions: el.functions,
            registrations,
            warnings,
            errors: el.errors,
            virtual_table: options.virtual_table.clone(),
            options,
            library,
        })
    }

    pub fn load_files<P: AsRef<Path>>(paths: &[P], options: ProjectOptions) -> Result<Project, FrontendError> {
        let mut sources = Vec::new();
        for p in paths {
            let p = p.as_ref();
            let file = p.display().to_string();
            let text = std::fs::read_to_string(p).map_err(|e| FrontendError::Io { file: file.clone(), message: e.to_string() })?;
            sources.push((file, text));
        }
        Project::from_sources(&sources, options)
    }

    pub fn class(&self, name: &str) -> Option<&ClassInfo> {
        self.classes.iter().find(|c| c.name == name)
    }

    pub fn is_library(&self, name: &str) -> bool {
        self.library.contains(name)
    }

    /// Elaborated definition of a class, by class name.
    pub fn definition(&self, class: &str) -> Option<&Definition> {
        let et = self.class_et.get(class)?;
        self.env.definitions().find(|d| &d.name == et)
    }

    /// Definitions of the user's classes, in source order.
    pub fn user_definitions(&self) -> Vec<&Definition> {
        self.classes.iter().filter(|c| !self.is_library(&c.name)).filter_map(|c| self.definition(&c.name)).collect()
    }

    /// ET name for a class name, a built-in name or an ET name.
    pub fn resolve_name(&self, name: &str) -> Result<String, EngineError> {
        if let Some(et) = self.class_et.get(name) {
            return Ok(et.clone());
        }
        if let Some((et, _)) = super::annotation::builtin_et(name) {
            return Ok(et.to_string());
        }
        if self.env.contains(name) {
            return Ok(name.to_string());
        }
        Err(EngineError::Env(EnvError::UnknownName(name.to_string())))
    }

    /// Structural conformance of class `subject` to class `target`.
    pub fn check(&self, subject: &str, target: &str) -> Result<ConformanceReport, EngineError> {
        let s = self.resolve_name(subject)?;
        let t = self.resolve_name(target)?;
        let mut r = type_instance_of(&s, &t, &self.env)?;
        r.subject = subject.to_string();
        r.target = target.to_string();
        Ok(r)
    }

    pub fn mro(&self, class: &str) -> Result<Vec<String>, MroError> {
        self.registry.linearize(class)
    }

    pub fn subclass_of(&self, sub: &str, sup: &str) -> Result<bool, MroError> {
        self.registry.subclass_of(sub, sup, &self.virtual_table)
    }

    pub fn metaclass_of(&self, class: &str) -> Result<String, MroError> {
        self.registry.metaclass_of(class)
    }

    /// Relation graph over the elaborated classes.
    pub fn relations(&self) -> RelationsGraph {
        let classes: Vec<ClassInfo> =
            self.classes.iter().filter(|c| self.class_et.contains_key(&c.name)).cloned().collect();
        relations_graph(&classes, &self.class_et, &self.env, &self.registry, &self.virtual_table, self.options.exec)
    }
}

/// Every simple name a module mentions in bases, annotations and values.
fn module_names(m: &ParsedModule, out: &mut BTreeSet<String>) {
    let params = |ps: &[Param], out: &mut BTreeSet<String>| {
        for p in ps {
            p.annotation.iter().chain(&p.default).for_each(|e| expr_names(e, out));
        }
    };
    for c in &m.classes {
        for b in &c.bases {
            out.insert(b.name.clone());
            b.args.iter().for_each(|a| expr_names(a, out));
        }
        for mem in c.members.values() {
            match &mem.decl {
                MemberDecl::Method { params: ps, returns, .. } => {
                    params(ps, out);
                    returns.iter().for_each(|e| expr_names(e, out));
                }
                MemberDecl::Lambda { params: ps, body } => {
                    params(ps, out);
                    expr_names(body, out);
                }
                MemberDecl::Attribute { annotation, value } | MemberDecl::InstanceAttribute { annotation, value } => {
                    annotation.iter().chain(value).for_each(|e| expr_names(e, out));
                }
            }
        }
    }
    for f in &m.functions {
        params(&f.params, out);
        f.returns.iter().for_each(|e| expr_names(e, out));
    }
    for v in &m.variables {
        v.annotation.iter().chain(&v.value).for_each(|e| expr_names(e, out));
    }
    for r in &m.registrations {
        out.insert(r.abc.clone());
        out.insert(r.subclass.clone());
    }
}

fn expr_names(e: &Expr, out: &mut BTreeSet<String>) {
    match e {
        Expr::Name(n) => {
            out.insert(n.clone());
        }
        Expr::Attribute(base, attr) => {
            out.insert(attr.clone());
            expr_names(base, out);
        }
        Expr::Str(s) => {
            if let Ok(inner) = super::parser::parse_expression(s, "") {
                expr_names(&inner, out);
            }
        }
        Expr::Subscript(h, xs) => {
            expr_names(h, out);
            xs.iter().for_each(|x| expr_names(x, out));
        }
        Expr::Call { func, args, keywords } => {
            expr_names(func, out);
            args.iter().for_each(|x| expr_names(x, out));
            keywords.iter().for_each(|(_, x)| expr_names(x, out));
        }
        Expr::List(xs) | Expr::Tuple(xs) | Expr::Set(xs) => xs.iter().for_each(|x| expr_names(x, out)),
        Expr::Dict(entries) => {
            for (k, v) in entries {
                k.iter().for_each(|x| expr_names(x, out));
                expr_names(v, out);
            }
        }
        Expr::BinOp { left, right, .. } => {
            expr_names(left, out);
            expr_names(right, out);
        }
        Expr::Unary { operand, .. } => expr_names(operand, out),
        Expr::Compare(first, rest) => {
            expr_names(first, out);
            rest.iter().for_each(|(_, x)| expr_names(x, out));
        }
        Expr::IfExp { body, test, orelse } => {
            expr_names(body, out);
            expr_names(test, out);
            expr_names(orelse, out);
        }
        Expr::Lambda { body, .. } | Expr::Comprehension { element: body, .. } | Expr::Starred(body) => {
            expr_names(body, out)
        }
        _ => {}
    }
}
