//! C3 linearization, nominal subclassing and metaclasses.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::MroError;
use crate::frontend::model::ClassInfo;
use crate::prelude::VirtualTable;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Entry {
    bases: Vec<String>,
    metaclass: Option<String>,
}

/// Classes by simple name: the runtime's built-ins plus user classes.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    entries: BTreeMap<String, Entry>,
}

const BUILTINS: &[(&str, &[&str], Option<&str>)] = &[
    ("object", &[], None),
    ("type", &["object"], None),
    ("int", &["object"], None),
    ("bool", &["int"], None),
    ("float", &["object"], None),
    ("complex", &["object"], None),
    ("str", &["object"], None),
    ("bytes", &["object"], None),
    ("bytearray", &["object"], None),
    ("list", &["object"], None),
    ("tuple", &["object"], None),
    ("dict", &["object"], None),
    ("set", &["object"], None),
    ("frozenset", &["object"], None),
    ("NoneType", &["object"], None),
    ("Generic", &["object"], None),
    ("Protocol", &["Generic"], Some("_ProtocolMeta")),
    ("ABC", &["object"], Some("ABCMeta")),
    ("ABCMeta", &["type"], None),
    ("_ProtocolMeta", &["ABCMeta"], None),
];

impl Registry {
    pub fn empty() -> Self {
        Registry::default()
    }

    /// Registry holding only the built-in classes.
    pub fn builtin() -> Self {
        let mut r = Registry::empty();
        for (name, bases, meta) in BUILTINS {
            r.insert(*name, bases.iter().map(|b| b.to_string()).collect(), meta.map(str::to_string));
        }
        r
    }

    pub fn with_classes<'a>(classes: impl IntoIterator<Item = &'a ClassInfo>) -> Self {
        let mut r = Registry::builtin();
        for c in classes {
            r.add_class(c);
        }
        r
    }

    /// Later insertions replace earlier ones of the same name.
    pub fn insert(&mut self, name: impl Into<String>, bases: Vec<String>, metaclass: Option<String>) {
        self.entries.insert(name.into(), Entry { bases, metaclass });
    }

    pub fn add_class(&mut self, cls: &ClassInfo) {
        let bases = cls.base_names().into_iter().map(str::to_string).collect();
        self.insert(cls.name.clone(), bases, cls.metaclass.clone());
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn is_builtin(name: &str) -> bool {
        BUILTINS.iter().any(|(n, _, _)| *n == name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Declared bases; a class without bases implicitly extends `object`.
    pub fn bases(&self, name: &str) -> Option<Vec<String>> {
        let e = self.entries.get(name)?;
        if e.bases.is_empty() && name != "object" {
            return Some(vec!["object".to_string()]);
        }
        Some(e.bases.clone())
    }

    pub fn linearize(&self, name: &str) -> Result<Vec<String>, MroError> {
        let mut memo = HashMap::new();
        let mut stack = Vec::new();
        self.linearize_in(name, &mut memo, &mut stack)
    }

    fn linearize_in(
        &self,
        name: &str,
        memo: &mut HashMap<String, Vec<String>>,
        stack: &mut Vec<String>,
    ) -> Result<Vec<String>, MroError> {
        if let Some(l) = memo.get(name) {
            return Ok(l.clone());
        }
        if let Some(pos) = stack.iter().position(|n| n == name) {
            let mut cycle = stack[pos..].to_vec();
            cycle.push(name.to_string());
            return Err(MroError::CyclicHierarchy(cycle));
        }
        let Some(bases) = self.bases(name) else {
            let class = stack.last().cloned().unwrap_or_else(|| name.to_string());
            return Err(MroError::UnknownBase { class, base: name.to_string() });
        };
        stack.push(name.to_string());
        let mut seqs = Vec::with_capacity(bases.len() + 1);
        for b in &bases {
            if !self.entries.contains_key(b) {
                stack.pop();
                return Err(MroError::UnknownBase { class: name.to_string(), base: b.clone() });
            }
            seqs.push(self.linearize_in(b, memo, stack)?);
        }
        stack.pop();
        let distinct: BTreeSet<&String> = bases.iter().collect();
        if distinct.len() != bases.len() {
            return Err(MroError::InconsistentHierarchy { class: name.to_string(), pending: bases.join(", ") });
        }
        seqs.push(bases);
        let mut out = vec![name.to_string()];
        out.extend(merge(name, seqs)?);
        memo.insert(name.to_string(), out.clone());
        Ok(out)
    }

    /// `sub` lists `sup` in its MRO, directly or through a virtual edge.
    pub fn subclass_of(&self, sub: &str, sup: &str, table: &VirtualTable) -> Result<bool, MroError> {
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut queue = vec![sub.to_string()];
        while let Some(c) = queue.pop() {
            for m in self.linearize(&c)? {
                if !seen.insert(m.clone()) {
                    continue;
                }
                for (a, b) in &table.pairs {
                    if *a == m && self.contains(b) {
                        queue.push(b.clone());
                    }
                }
            }
        }
        Ok(seen.contains(sup))
    }

    /// `type(C)`: the most derived of the declared metaclass and the
    /// metaclasses of the bases, `type` by default.
    pub fn metaclass_of(&self, name: &str) -> Result<String, MroError> {
        self.linearize(name)?;
        let mut candidates: Vec<String> = Vec::new();
        if let Some(m) = self.entries.get(name).and_then(|e| e.metaclass.clone()) {
            candidates.push(m);
        }
        for b in self.bases(name).unwrap_or_default() {
            candidates.push(self.metaclass_of(&b)?);
        }
        let mut winner = "type".to_string();
        for c in candidates {
            if self.contains(&c) && self.linearize(&c)?.contains(&winner) {
                winner = c;
            }
        }
        Ok(winner)
    }
}

fn merge(class: &str, mut seqs: Vec<Vec<String>>) -> Result<Vec<String>, MroError> {
    let mut out = Vec::new();
    loop {
        seqs.retain(|s| !s.is_empty());
        if seqs.is_empty() {
            return Ok(out);
        }
        let head = seqs
            .iter()
            .map(|s| &s[0])
            .find(|h| seqs.iter().all(|s| !s[1..].contains(h)))
            .cloned();
        let Some(head) = head else {
            let pending: Vec<&str> = seqs.iter().map(|s| s[0].as_str()).collect();
            return Err(MroError::InconsistentHierarchy { class: class.to_string(), pending: pending.join(", ") });
        };
        for s in seqs.iter_mut() {
            if s[0] == head {
                s.remove(0);
            }
        }
        out.push(head);
    }
}

/// Linearization of `cls` against `registry`; `cls` itself need not be
/// registered.
pub fn c3_linearize(cls: &ClassInfo, registry: &Registry) -> Result<Vec<String>, MroError> {
    let mut r = registry.clone();
    r.add_class(cls);
    r.linearize(&cls.name)
}

pub fn subclass_of(a: &str, b: &str, registry: &Registry, table: &VirtualTable) -> Result<bool, MroError> {
    registry.subclass_of(a, b, table)
}

/// The class's direct metaclass; `type` is an instance of itself.
pub fn object_instance_of(cls: &ClassInfo, registry: &Registry) -> String {
    let mut r = registry.clone();
    r.add_class(cls);
    r.metaclass_of(&cls.name).unwrap_or_else(|_| cls.metaclass.clone().unwrap_or_else(|| "type".to_string()))
}
