//! The three class relations and their graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::conformance::type_instance_of;
use super::mro::Registry;
use crate::error::EngineError;
use crate::frontend::model::ClassInfo;
use crate::par::{self, Exec};
use crate::prelude::{TypeEnv, VirtualTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationKind {
    SubclassOf,
    ObjectInstanceOf,
    TypeInstanceOf,
}

impl RelationKind {
    pub fn name(self) -> &'static str {
        match self {
            RelationKind::SubclassOf => "subclass-of",
            RelationKind::ObjectInstanceOf => "object-instance-of",
            RelationKind::TypeInstanceOf => "type-instance-of",
        }
    }

    fn dot_style(self) -> &'static str {
        match self {
            RelationKind::SubclassOf => "solid",
            RelationKind::ObjectInstanceOf => "dashed",
            RelationKind::TypeInstanceOf => "dotted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RelationEdge {
    pub from: String,
    pub to: String,
    pub kind: RelationKind,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RelationsGraph {
    pub edges: Vec<RelationEdge>,
    /// Interface classes (protocols and ABCs).
    pub interfaces: BTreeSet<String>,
    /// Classes whose instances are classes.
    pub metaclasses: BTreeSet<String>,
    /// Per-class failures; edges of other classes are still reported.
    pub errors: Vec<(String, String)>,
}

/// Builds the relation edges for `classes`. `class_et` maps class names to
/// their elaborated ET names in `env`.
pub fn relations_graph(
    classes: &[ClassInfo],
    class_et: &BTreeMap<String, String>,
    env: &TypeEnv,
    registry: &Registry,
    table: &VirtualTable,
    exec: Exec,
) -> RelationsGraph {
    let interfaces: Vec<&ClassInfo> = classes.iter().filter(|c| c.kind.is_interface()).collect();
    let per_class = par::map(exec, classes, |c| class_edges(c, &interfaces, class_et, env, registry, table));

    let mut graph = RelationsGraph::default();
    let mut edges = BTreeSet::new();
    for (c, result) in classes.iter().zip(per_class) {
        match result {
            Ok(es) => edges.extend(es),
            Err(e) => graph.errors.push((c.name.clone(), e.to_string())),
        }
    }
    graph.edges = edges.into_iter().collect();
    graph.interfaces = interfaces.iter().map(|c| c.name.clone()).collect();
    let mut nodes: BTreeSet<&str> = BTreeSet::new();
    for e in &graph.edges {
        nodes.insert(&e.from);
        nodes.insert(&e.to);
    }
    graph.metaclasses = nodes
        .into_iter()
        .filter(|n| registry.subclass_of(n, "type", table).unwrap_or(false))
        .map(str::to_string)
        .collect();
    graph
}

fn class_edges(
    c: &ClassInfo,
    interfaces: &[&ClassInfo],
    class_et: &BTreeMap<String, String>,
    env: &TypeEnv,
    registry: &Registry,
    table: &VirtualTable,
) -> Result<Vec<RelationEdge>, EngineError> {
    let mut out = Vec::new();
    let edge = |to: &str, kind| RelationEdge { from: c.name.clone(), to: to.to_string(), kind };
    for b in registry.bases(&c.name).unwrap_or_default() {
        out.push(edge(&b, RelationKind::SubclassOf));
    }
    out.push(edge(&registry.metaclass_of(&c.name)?, RelationKind::ObjectInstanceOf));
    if c.kind.is_interface() {
        return Ok(out);
    }
    let Some(subject) = class_et.get(&c.name) else { return Ok(out) };
    if env.get(subject)?.is_meta {
        return Ok(out);
    }
    for target in interfaces {
        if target.name == c.name || registry.subclass_of(&c.name, &target.name, table)? {
            continue;
        }
        let Some(t) = class_et.get(&target.name) else { continue };
        if type_instance_of(subject, t, env)?.verdict {
            out.push(edge(&target.name, RelationKind::TypeInstanceOf));
        }
    }
    Ok(out)
}

impl RelationsGraph {
    pub fn has_edge(&self, from: &str, to: &str, kind: RelationKind) -> bool {
        self.edges.iter().any(|e| e.from == from && e.to == to && e.kind == kind)
    }

    /// Graphviz rendering: solid subclass-of, dashed object-instance-of,
    /// dotted type-instance-of; interfaces as ellipses, metaclasses as
    /// plain boxes, other classes as rounded boxes.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph relations {\n    rankdir=BT;\n    node [fontname=\"Helvetica\"];\n");
        let mut nodes = BTreeSet::new();
        for e in &self.edges {
            nodes.insert(e.from.as_str());
            nodes.insert(e.to.as_str());
        }
        for n in nodes {
            let shape = if self.interfaces.contains(n) {
                "shape=ellipse"
            } else if self.metaclasses.contains(n) {
                "shape=box"
            } else {
                "shape=box, style=rounded"
            };
            let _ = writeln!(out, "    \"{n}\" [{shape}];");
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "    \"{}\" -> \"{}\" [style={}, label=\"{}\"];",
                e.from,
                e.to,
                e.kind.dot_style(),
                e.kind.name()
            );
        }
        out.push_str("}\n");
        out
    }
}
