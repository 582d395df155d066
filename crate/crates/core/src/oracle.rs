//! Runtime oracle records and their comparison with static verdicts.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::prelude::DefKind;
use crate::frontend::Project;

/// What the runtime observed for one corpus.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub classes: Vec<OracleClass>,
    pub subclass_checks: Vec<SubclassCheck>,
    #[serde(default)]
    pub instance_checks: Vec<InstanceCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleClass {
    pub name: String,
    pub mro: Vec<String>,
    pub metaclass: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubclassCheck {
    pub sub: String,
    pub sup: String,
    pub result: CheckResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceCheck {
    pub value_expr: String,
    pub target: String,
    pub result: CheckResult,
}

/// `true`, `false` or `"error:<ExceptionName>"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckResult {
    Bool(bool),
    Error(String),
}

impl CheckResult {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            CheckResult::Bool(b) => Some(*b),
            CheckResult::Error(_) => None,
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckResult::Bool(b) => write!(f, "{b}"),
            CheckResult::Error(e) => write!(f, "error:{e}"),
        }
    }
}

impl Serialize for CheckResult {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CheckResult::Bool(b) => s.serialize_bool(*b),
            CheckResult::Error(e) => s.serialize_str(&format!("error:{e}")),
        }
    }
}

impl<'de> Deserialize<'de> for CheckResult {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Bool(bool),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Bool(b) => Ok(CheckResult::Bool(b)),
            Raw::Str(s) => match s.strip_prefix("error:") {
                Some(e) => Ok(CheckResult::Error(e.to_string())),
                None => Err(serde::de::Error::custom(format!("expected a boolean or \"error:<type>\", found {s:?}"))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivergenceClass {
    Expected,
    Unexpected,
}

/// One place where the static and runtime answers disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Divergence {
    /// `issubclass`, `isinstance`, `mro` or `metaclass`.
    pub check: String,
    pub subject: String,
    pub target: String,
    pub runtime: String,
    #[serde(rename = "static")]
    pub static_: String,
    pub class: DivergenceClass,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OracleDiff {
    pub divergences: Vec<Divergence>,
    /// Checks whose classes the static side does not know.
    pub skipped: usize,
    pub compared: usize,
}

impl OracleDiff {
    pub fn unexpected(&self) -> impl Iterator<Item = &Divergence> {
        self.divergences.iter().filter(|d| d.class == DivergenceClass::Unexpected)
    }

    pub fn expected(&self) -> impl Iterator<Item = &Divergence> {
        self.divergences.iter().filter(|d| d.class == DivergenceClass::Expected)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for d in &self.divergences {
            let tag = match d.class {
                DivergenceClass::Expected => "expected",
                DivergenceClass::Unexpected => "UNEXPECTED",
            };
            out.push_str(&format!(
                "[{tag}] {}({}, {}): runtime {}, static {}: {}\n",
                d.check, d.subject, d.target, d.runtime, d.static_, d.reason
            ));
        }
        out.push_str(&format!(
            "{} compared, {} skipped, {} expected, {} unexpected\n",
            self.compared,
            self.skipped,
            self.expected().count(),
            self.unexpected().count()
        ));
        out
    }
}

/// Compares the runtime record with the project's static verdicts.
///
/// Protocol targets are judged structurally (nominal subclass or
/// conformance); ABC and plain targets nominally, with the virtual table.
pub fn diff(project: &Project, record: &OracleRecord) -> OracleDiff {
    let mut out = OracleDiff::default();
    for c in &record.classes {
        if project.class(&c.name).is_none() {
            continue;
        }
        out.compared += 1;
        match project.mro(&c.name) {
            Ok(mro) if mro == c.mro => {}
            Ok(mro) => out.divergences.push(unexpected("mro", &c.name, "", &c.mro.join(" -> "), &mro.join(" -> "))),
            Err(e) => out.divergences.push(unexpected("mro", &c.name, "", &c.mro.join(" -> "), &e.to_string())),
        }
        if let Ok(meta) = project.metaclass_of(&c.name) {
            if meta != c.metaclass {
                out.divergences.push(unexpected("metaclass", &c.name, "", &c.metaclass, &meta));
            }
        }
    }
    for chk in &record.subclass_checks {
        match pair(project, "issubclass", &chk.sub, &chk.sup, &chk.result) {
            Some(d) => {
                out.compared += 1;
                out.divergences.extend(d);
            }
            None => out.skipped += 1,
        }
    }
    for chk in &record.instance_checks {
        let class = project
            .variables
            .get(&chk.value_expr)
            .and_then(|t| t.head())
            .and_then(|et| project.class_et.iter().find(|(_, e)| e.as_str() == et))
            .map(|(py, _)| py.clone());
        let Some(class) = class else {
            out.skipped += 1;
            continue;
        };
        match pair(project, "isinstance", &class, &chk.target, &chk.result) {
            Some(d) => {
                out.compared += 1;
                out.divergences.extend(d.map(|mut d| {
                    d.subject = chk.value_expr.clone();
                    d
                }));
            }
            None => out.skipped += 1,
        }
    }
    out.divergences.sort_by(|a, b| (&a.check, &a.subject, &a.target).cmp(&(&b.check, &b.subject, &b.target)));
    out
}

fn unexpected(check: &str, subject: &str, target: &str, runtime: &str, static_: &str) -> Divergence {
    Divergence {
        check: check.into(),
        subject: subject.into(),
        target: target.into(),
        runtime: runtime.into(),
        static_: static_.into(),
        class: DivergenceClass::Unexpected,
        reason: "static and runtime answers differ".into(),
    }
}

/// `None` when either class is unknown statically; `Some(None)` when the
/// answers agree.
fn pair(project: &Project, check: &str, sub: &str, sup: &str, runtime: &CheckResult) -> Option<Option<Divergence>> {
    let target = project.class(sup)?;
    project.class(sub)?;
    let nominal = project.subclass_of(sub, sup).ok()?;
    let is_protocol = target.kind == DefKind::Protocol;
    let report = if is_protocol && !nominal { project.check(sub, sup).ok() } else { None };
    let static_ = nominal || report.as_ref().is_some_and(|r| r.verdict);

    let mut d = Divergence {
        check: check.into(),
        subject: sub.into(),
        target: sup.into(),
        runtime: runtime.to_string(),
        static_: static_.to_string(),
        class: DivergenceClass::Expected,
        reason: String::new(),
    };
    match runtime {
        CheckResult::Bool(r) if *r == static_ => return Some(None),
        CheckResult::Error(_) if is_protocol && !target.runtime_checkable => {
            d.reason = "protocol is not runtime checkable".into();
        }
        CheckResult::Error(_) => {
            d.class = DivergenceClass::Unexpected;
            d.reason = "runtime check raised".into();
        }
        CheckResult::Bool(true) if is_protocol => match &report {
            Some(r) if r.members.iter().all(|m| m.actual.is_some()) => {
                d.reason = format!("runtime checks member presence only; {}", failure_summary(r));
            }
            _ => {
                d.class = DivergenceClass::Unexpected;
                d.reason = "runtime accepts a class missing protocol members".into();
            }
        },
        CheckResult::Bool(true) if registered(project, sub, sup) => {
            d.reason = format!("{sub} is registered as a virtual subclass of {sup}");
        }
        CheckResult::Bool(true) if target.kind == DefKind::Abc && target.defines_subclasshook() => {
            d.reason = format!("{sup} decides membership in __subclasshook__");
        }
        CheckResult::Bool(_) => {
            d.class = DivergenceClass::Unexpected;
            d.reason = "static and runtime answers differ".into();
        }
    }
    Some(Some(d))
}

fn failure_summary(r: &crate::engine::ConformanceReport) -> String {
    let names: BTreeSet<&str> = r.failures().map(|m| m.name.as_str()).collect();
    let names: Vec<&str> = names.into_iter().collect();
    format!("incompatible members: {}", names.join(", "))
}

/// Whether `sub` or one of its ancestors is registered with `sup` in the
/// source.
fn registered(project: &Project, sub: &str, sup: &str) -> bool {
    let mro = project.mro(sub).unwrap_or_else(|_| vec![sub.to_string()]);
    project.registrations.iter().any(|r| r.abc == sup && mro.contains(&r.subclass))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_results_round_trip() {
        let json = r#"[true, false, "error:TypeError"]"#;
        let rs: Vec<CheckResult> = serde_json::from_str(json).unwrap();
        assert_eq!(rs, vec![CheckResult::Bool(true), CheckResult::Bool(false), CheckResult::Error("TypeError".into())]);
        assert_eq!(serde_json::to_string(&rs).unwrap(), r#"[true,false,"error:TypeError"]"#);
        assert!(serde_json::from_str::<CheckResult>("\"maybe\"").is_err());
    }

    #[test]
    fn instance_checks_default_to_empty() {
        let r: OracleRecord = serde_json::from_str(r#"{"classes": [], "subclass_checks": []}"#).unwrap();
        assert!(r.instance_checks.is_empty());
    }
}
