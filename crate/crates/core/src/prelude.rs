//! Built-in existential types and the environment that holds them.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::EnvError;
use crate::types::{substitute_all, Record, TypeExpr, OBJECT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Prelude,
    User,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefKind {
    #[default]
    Plain,
    Protocol,
    Abc,
}

impl DefKind {
    pub fn is_interface(self) -> bool {
        matches!(self, DefKind::Protocol | DefKind::Abc)
    }
}

/// A named existential type `∀params.∃self_var<:bound.signature`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Definition {
    pub name: String,
    pub params: Vec<String>,
    pub self_var: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<TypeExpr>,
    pub signature: Record,
    /// Elements are classes-as-values.
    pub is_meta: bool,
    pub kind: DefKind,
    pub origin: Origin,
    /// Source parameter names per method, used for diagnostics only.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub param_names: BTreeMap<String, Vec<String>>,
}

impl Definition {
    pub fn new(name: impl Into<String>, self_var: impl Into<String>, signature: Record) -> Self {
        Definition {
            name: name.into(),
            params: Vec::new(),
            self_var: self_var.into(),
            bound: None,
            signature,
            is_meta: false,
            kind: DefKind::Plain,
            origin: Origin::Prelude,
            param_names: BTreeMap::new(),
        }
    }

    pub fn with_params(mut self, params: &[&str]) -> Self {
        self.params = params.iter().map(|p| p.to_string()).collect();
        self
    }

    pub fn with_bound(mut self, bound: TypeExpr) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn is_generic(&self) -> bool {
        !self.params.is_empty()
    }

    /// The full quantified type.
    pub fn to_type(&self) -> TypeExpr {
        TypeExpr::forall(
            self.params.clone(),
            TypeExpr::exists(self.self_var.clone(), self.bound.clone(), self.signature.clone().into()),
        )
    }

    /// Bound and signature with the parameters replaced by `args` and the
    /// self variable by `self_ty`.
    pub fn open_at(&self, args: &[TypeExpr], self_ty: &TypeExpr) -> Result<(Option<TypeExpr>, Record), EnvError> {
        if args.len() != self.params.len() {
            return Err(EnvError::BadApplication {
                ctor: self.name.clone(),
                expected: self.params.len(),
                found: args.len(),
            });
        }
        let mut map: BTreeMap<String, TypeExpr> = self.params.iter().cloned().zip(args.iter().cloned()).collect();
        map.insert(self.self_var.clone(), self_ty.clone());
        let bound = self.bound.as_ref().map(|b| substitute_all(b, &map));
        let TypeExpr::Record(sig) = substitute_all(&TypeExpr::Record(self.signature.clone()), &map) else {
            unreachable!("substitution preserves the record head")
        };
        Ok((bound, sig))
    }

    /// The existential at `args`, self variable still bound.
    pub fn existential_at(&self, args: &[TypeExpr]) -> Result<TypeExpr, EnvError> {
        let ty = self.to_type();
        if self.params.is_empty() {
            if !args.is_empty() {
                return Err(EnvError::BadApplication { ctor: self.name.clone(), expected: 0, found: args.len() });
            }
            return Ok(ty);
        }
        crate::types::instantiate(&ty, args).map_err(|_| EnvError::BadApplication {
            ctor: self.name.clone(),
            expected: self.params.len(),
            found: args.len(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Generic,
    Protocol,
    Tuple,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyIndex {
    pub family: Family,
    pub arity: usize,
}

impl FamilyIndex {
    pub fn generic(arity: usize) -> Self {
        FamilyIndex { family: Family::Generic, arity }
    }
    pub fn protocol(arity: usize) -> Self {
        FamilyIndex { family: Family::Protocol, arity }
    }
    pub fn tuple(arity: usize) -> Self {
        FamilyIndex { family: Family::Tuple, arity }
    }

    /// Name of the member of the family, e.g. `GenericET2`. Tuples of every
    /// arity share the constructor `TupleET`.
    pub fn et_name(&self) -> String {
        match self.family {
            Family::Generic => format!("GenericET{}", self.arity),
            Family::Protocol => format!("ProtocolET{}", self.arity),
            Family::Tuple => TUPLE.to_string(),
        }
    }
}

pub const TUPLE: &str = "TupleET";
pub const TYPE_ET: &str = "TypeET";
pub const TYPEVAR_ET: &str = "TypeVarET";

/// Canonical witnesses of `TypeET`: `type` and its subclasses shipped with
/// the runtime.
pub const TYPE_ET_WITNESSES: [&str; 3] = ["type", "ABCMeta", "_ProtocolMeta"];

fn type_params(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("T{i}")).collect()
}

fn atom(n: &str) -> TypeExpr {
    TypeExpr::atom(n)
}

fn varargs() -> TypeExpr {
    TypeExpr::variadic(TUPLE, TypeExpr::object())
}

fn kwargs() -> TypeExpr {
    TypeExpr::apply("DictET", vec![atom("StrET"), TypeExpr::object()])
}

fn unit_to(ret: TypeExpr) -> TypeExpr {
    TypeExpr::func(TypeExpr::none(), ret)
}

fn family_definition(index: FamilyIndex) -> Result<Definition, EnvError> {
    let n = index.arity;
    let params = type_params(n);
    let def = match index.family {
        Family::Generic => {
            if n == 0 {
                return Err(EnvError::InvalidArity { family: "GenericET", arity: 0 });
            }
            let tuple = TypeExpr::apply(TUPLE, vec![atom(TYPEVAR_ET); n]);
            let sig = Record::open().with("__parameters__", unit_to(tuple));
            Definition {
                params,
                ..Definition::new(index.et_name(), "G", sig).with_bound(TypeExpr::object())
            }
        }
        Family::Protocol => {
            let p = TypeExpr::var("P");
            let mut bound_args = vec![p.clone()];
            bound_args.extend(params.iter().map(|t| TypeExpr::var(t.clone())));
            let bound = TypeExpr::apply(FamilyIndex::generic(n + 1).et_name(), bound_args);
            let sig = Record::open()
                .with(
                    "__new__",
                    TypeExpr::func(TypeExpr::Product(vec![p, varargs(), kwargs()]), TypeExpr::bottom()),
                )
                .with("_is_protocol", unit_to(atom("BoolET")))
                .with("_is_runtime_protocol", unit_to(atom("BoolET")));
            Definition {
                params,
                kind: DefKind::Protocol,
                ..Definition::new(index.et_name(), "P", sig).with_bound(bound)
            }
        }
        Family::Tuple => Definition {
            params,
            ..Definition::new(TUPLE, "TP", sized("TP"))
        },
    };
    Ok(def)
}

/// `∀T₁…Tₙ.∃…` for the requested family member.
pub fn family_type(index: FamilyIndex) -> Result<TypeExpr, EnvError> {
    family_definition(index).map(|d| d.to_type())
}

/// Recognises `GenericET<n>` and `ProtocolET<n>`.
pub fn parse_family(name: &str) -> Option<FamilyIndex> {
    let digits = |prefix: &str| -> Option<usize> {
        let rest = name.strip_prefix(prefix)?;
        if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) || (rest.len() > 1 && rest.starts_with('0')) {
            return None;
        }
        rest.parse().ok()
    };
    if let Some(n) = digits("GenericET") {
        return Some(FamilyIndex::generic(n));
    }
    digits("ProtocolET").map(FamilyIndex::protocol)
}

fn sized(self_var: &str) -> Record {
    Record::open().with("__len__", TypeExpr::func(TypeExpr::var(self_var), atom("IntET")))
}

pub fn object_et() -> TypeExpr {
    object_definition().to_type()
}

fn object_definition() -> Definition {
    let o = TypeExpr::var("O");
    let sig = Record::open()
        .with("__new__", TypeExpr::func(TypeExpr::Product(vec![varargs(), kwargs()]), o.clone()))
        .with("__init__", TypeExpr::func(TypeExpr::Product(vec![o.clone(), varargs(), kwargs()]), o));
    Definition::new(OBJECT, "O", sig)
}

pub fn type_et() -> TypeExpr {
    type_definition().to_type()
}

fn type_definition() -> Definition {
    let domain = TypeExpr::Product(vec![
        atom("StrET"),
        TypeExpr::variadic(TUPLE, atom(TYPE_ET)),
        kwargs(),
        kwargs(),
    ]);
    let sig = Record::open().with("__new__", TypeExpr::func(domain, TypeExpr::var("M")));
    Definition { is_meta: true, ..Definition::new(TYPE_ET, "M", sig).with_bound(TypeExpr::object()) }
}

fn build_prelude() -> TypeEnv {
    let mut env = TypeEnv::empty();
    let mut add = |d: Definition| env.defs.insert(d.name.clone(), d);

    add(object_definition());
    add(Definition::new(
        "IntET",
        "IT",
        Record::open().with("__repr__", TypeExpr::func(TypeExpr::var("IT"), atom("StrET"))),
    ));
    add(Definition::new("StrET", "S", sized("S")));
    for (name, self_var) in [
        ("BoolET", "B"),
        ("FloatET", "F"),
        ("ComplexET", "C"),
        ("BytesET", "BY"),
        ("BottomET", "BT"),
        ("NoneTypeET", "N"),
    ] {
        add(Definition::new(name, self_var, Record::open()));
    }
    add(Definition::new("ListET", "L", sized("L")).with_params(&["T"]));
    add(Definition::new("SetET", "ST", sized("ST")).with_params(&["T"]));
    add(Definition::new("FrozensetET", "FS", sized("FS")).with_params(&["T"]));
    add(Definition::new("DictET", "D", sized("D")).with_params(&["K", "V"]));
    add(Definition::new("BytearrayET", "BA", sized("BA")));
    add(
        Definition::new(TYPEVAR_ET, "TV", Record::open().with("__name__", unit_to(atom("StrET"))))
            .with_bound(TypeExpr::object()),
    );
    add(type_definition());
    env.numeric_tower = true;
    env
}

/// The built-in environment. Built once; each call returns an independent
/// copy that callers may extend.
pub fn prelude_env() -> TypeEnv {
    static PRELUDE: OnceLock<TypeEnv> = OnceLock::new();
    PRELUDE.get_or_init(build_prelude).clone()
}

/// `int` -> `IntET`, `None` -> `NoneTypeET`, `MyList` -> `MyListET`.
pub fn et_name(py_name: &str) -> String {
    if py_name == "None" {
        return "NoneTypeET".to_string();
    }
    let mut chars = py_name.chars();
    match chars.next() {
        Some(c) => format!("{}{}ET", c.to_uppercase(), chars.as_str()),
        None => String::new(),
    }
}

const NUMERIC_TOWER: [(&str, &str); 3] = [("BoolET", "IntET"), ("IntET", "FloatET"), ("FloatET", "ComplexET")];

/// Named definitions plus nominal subtype edges between ET names.
#[derive(Debug, Clone, Default)]
pub struct TypeEnv {
    defs: BTreeMap<String, Definition>,
    edges: BTreeSet<(String, String)>,
    numeric_tower: bool,
}

impl TypeEnv {
    pub fn empty() -> Self {
        TypeEnv::default()
    }

    pub fn lookup(&self, name: &str) -> Option<Cow<'_, Definition>> {
        if let Some(d) = self.defs.get(name) {
            return Some(Cow::Borrowed(d));
        }
        if name == TUPLE {
            return family_definition(FamilyIndex::tuple(0)).ok().map(Cow::Owned);
        }
        parse_family(name).and_then(|f| family_definition(f).ok()).map(Cow::Owned)
    }

    pub fn get(&self, name: &str) -> Result<Cow<'_, Definition>, EnvError> {
        self.lookup(name).ok_or_else(|| EnvError::UnknownName(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.lookup(name).is_some()
    }

    pub fn insert(&mut self, def: Definition) -> Result<(), EnvError> {
        if self.contains(&def.name) {
            return Err(EnvError::NameClash(def.name));
        }
        self.defs.insert(def.name.clone(), def);
        Ok(())
    }

    /// Stored definitions in name order (family members are synthesised on
    /// lookup and not listed).
    pub fn definitions(&self) -> impl Iterator<Item = &Definition> {
        self.defs.values()
    }

    pub fn numeric_tower(&self) -> bool {
        self.numeric_tower
    }

    pub fn set_numeric_tower(&mut self, on: bool) {
        self.numeric_tower = on;
    }

    pub fn add_edge(&mut self, sub: impl Into<String>, sup: impl Into<String>) {
        self.edges.insert((sub.into(), sup.into()));
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        let tower = self.numeric_tower.then_some(NUMERIC_TOWER.iter().copied()).into_iter().flatten();
        self.edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).chain(tower)
    }

    /// Reflexive-transitive closure of the nominal edges from `name`.
    pub fn nominal_supertypes(&self, name: &str) -> BTreeSet<String> {
        let mut seen = BTreeSet::from([name.to_string()]);
        let mut queue = VecDeque::from([name.to_string()]);
        while let Some(n) = queue.pop_front() {
            for (a, b) in self.edges() {
                if a == n && seen.insert(b.to_string()) {
                    queue.push_back(b.to_string());
                }
            }
        }
        seen
    }

    pub fn is_nominal_subtype(&self, sub: &str, sup: &str) -> bool {
        sub == sup || self.nominal_supertypes(sub).contains(sup)
    }

    /// Definition and effective arguments for a named type. Tuple
    /// applications pick the family member matching their arity.
    pub fn resolve(&self, named: &TypeExpr) -> Result<(Cow<'_, Definition>, Vec<TypeExpr>), EnvError> {
        match named {
            TypeExpr::Atom(n) if n == TUPLE => Ok((Cow::Owned(family_definition(FamilyIndex::tuple(0))?), vec![])),
            TypeExpr::Atom(n) => Ok((self.get(n)?, vec![])),
            TypeExpr::Apply { ctor, args, .. } if ctor == TUPLE => {
                Ok((Cow::Owned(family_definition(FamilyIndex::tuple(args.len()))?), args.clone()))
            }
            TypeExpr::Apply { ctor, args, .. } => {
                if let Some(f) = parse_family(ctor) {
                    return Ok((Cow::Owned(family_definition(f)?), args.clone()));
                }
                Ok((self.get(ctor)?, args.clone()))
            }
            other => Err(EnvError::UnknownName(other.to_string())),
        }
    }

    /// Bound and signature of a named type, with `self_ty` as the self type.
    pub fn open(&self, named: &TypeExpr, self_ty: &TypeExpr) -> Result<(Option<TypeExpr>, Record), EnvError> {
        let (def, args) = self.resolve(named)?;
        def.open_at(&args, self_ty)
    }

    /// The existential type a named type stands for.
    pub fn expand(&self, named: &TypeExpr) -> Result<TypeExpr, EnvError> {
        let (def, args) = self.resolve(named)?;
        def.existential_at(&args)
    }

    /// Checks that every referenced name resolves and that applications
    /// match the declared arity.
    pub fn check_well_formed(&self, expr: &TypeExpr) -> Result<(), EnvError> {
        let mut stack = vec![expr];
        while let Some(e) = stack.pop() {
            match e {
                TypeExpr::Atom(n) => {
                    let def = self.get(n)?;
                    if n != TUPLE && !def.params.is_empty() {
                        return Err(EnvError::BadApplication {
                            ctor: n.clone(),
                            expected: def.params.len(),
                            found: 0,
                        });
                    }
                }
                TypeExpr::Apply { ctor, args, variadic } => {
                    if ctor == TUPLE {
                        if *variadic && args.len() != 1 {
                            return Err(EnvError::BadApplication { ctor: ctor.clone(), expected: 1, found: args.len() });
                        }
                    } else {
                        let def = self.get(ctor)?;
                        if *variadic || def.params.len() != args.len() {
                            return Err(EnvError::BadApplication {
                                ctor: ctor.clone(),
                                expected: def.params.len(),
                                found: args.len(),
                            });
                        }
                    }
                }
                _ => {}
            }
            stack.extend(e.children());
        }
        Ok(())
    }

    pub fn apply_virtual_table(&mut self, table: &VirtualTable) {
        for (sub, sup) in &table.pairs {
            self.add_edge(et_name(sub), et_name(sup));
        }
    }

    /// Text listing of every stored definition and a few family members.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for d in self.defs.values() {
            out.push_str(&format!("{} = {}", d.name, d.to_type()));
            if d.is_meta {
                out.push_str(" is PyTS");
            }
            out.push('\n');
        }
        for idx in [
            FamilyIndex::generic(1),
            FamilyIndex::generic(2),
            FamilyIndex::protocol(0),
            FamilyIndex::protocol(1),
            FamilyIndex::tuple(2),
        ] {
            let d = family_definition(idx).expect("valid family arity");
            let label = match idx.family {
                Family::Tuple => format!("TupleET{}", idx.arity),
                _ => d.name.clone(),
            };
            out.push_str(&format!("{label} = {}\n", d.to_type()));
        }
        let tower: Vec<String> = self.edges().map(|(a, b)| format!("{a} <: {b}")).collect();
        if !tower.is_empty() {
            out.push_str(&format!("# nominal: {}\n", tower.join(", ")));
        }
        out
    }
}

/// Static-checker knowledge of virtual subclasses, as `Sub Base` pairs of
/// Python class names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VirtualTable {
    pub pairs: Vec<(String, String)>,
}

impl VirtualTable {
    /// One `Sub Base` pair per line; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, EnvError> {
        let mut pairs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [sub, base] = parts.as_slice() else {
                return Err(EnvError::VirtualTable {
                    line: i + 1,
                    message: format!("expected `Sub Base`, got {line:?}"),
                });
            };
            pairs.push((sub.to_string(), base.to_string()));
        }
        Ok(VirtualTable { pairs })
    }

    pub fn contains(&self, sub: &str, base: &str) -> bool {
        self.pairs.iter().any(|(a, b)| a == sub && b == base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{alpha_eq, parse_type};

    #[test]
    fn int_and_str_members() {
        let env = prelude_env();
        let int = env.get("IntET").unwrap();
        assert_eq!(
            int.signature.get("__repr__"),
            Some(&TypeExpr::func(TypeExpr::var("IT"), TypeExpr::atom("StrET")))
        );
        let s = env.get("StrET").unwrap();
        assert_eq!(s.signature.get("__len__"), Some(&TypeExpr::func(TypeExpr::var("S"), TypeExpr::atom("IntET"))));
    }

    #[test]
    fn object_is_unbounded() {
        assert!(prelude_env().get(OBJECT).unwrap().bound.is_none());
    }

    #[test]
    fn exactly_one_meta_definition() {
        let env = prelude_env();
        let metas: Vec<_> = env.definitions().filter(|d| d.is_meta).map(|d| d.name.clone()).collect();
        assert_eq!(metas, vec![TYPE_ET.to_string()]);
    }

    #[test]
    fn all_prelude_records_open_and_closed_over_names() {
        let env = prelude_env();
        for d in env.definitions() {
            assert!(d.signature.open, "{}", d.name);
            env.check_well_formed(&d.to_type()).unwrap_or_else(|e| panic!("{}: {e}", d.name));
        }
        for idx in [FamilyIndex::generic(3), FamilyIndex::protocol(0), FamilyIndex::protocol(2), FamilyIndex::tuple(4)] {
            env.check_well_formed(&family_type(idx).unwrap()).unwrap();
        }
    }

    #[test]
    fn protocol_zero_is_not_generic() {
        let p0 = family_type(FamilyIndex::protocol(0)).unwrap();
        let expected = parse_type(
            "∃P<:GenericET1[P].{__new__: P x TupleET[ObjectET, ...] x DictET[StrET, ObjectET] -> BottomET, \
             _is_protocol: NoneTypeET -> BoolET, _is_runtime_protocol: NoneTypeET -> BoolET, ...}",
        )
        .unwrap();
        assert!(alpha_eq(&p0, &expected), "{p0}");
    }

    #[test]
    fn generic_zero_is_invalid() {
        assert_eq!(
            family_type(FamilyIndex::generic(0)),
            Err(EnvError::InvalidArity { family: "GenericET", arity: 0 })
        );
    }

    #[test]
    fn generic_two_by_hand() {
        // the displayed schema written out at n = 2
        let by_hand = parse_type(
            "∀A,B.∃G<:ObjectET.{__parameters__: NoneTypeET -> TupleET[TypeVarET, TypeVarET], ...}",
        )
        .unwrap();
        assert!(alpha_eq(&family_type(FamilyIndex::generic(2)).unwrap(), &by_hand));
    }

    #[test]
    fn protocol_bound_is_next_generic() {
        for n in 1..5 {
            let d = family_definition(FamilyIndex::protocol(n)).unwrap();
            let mut args = vec![TypeExpr::var("P")];
            args.extend(d.params.iter().map(|p| TypeExpr::var(p.clone())));
            assert_eq!(d.bound, Some(TypeExpr::apply(format!("GenericET{}", n + 1), args)));
        }
    }

    #[test]
    fn object_and_type_signatures() {
        let o = object_et();
        let TypeExpr::Exists { body, .. } = &o else { panic!() };
        let TypeExpr::Record(r) = body.as_ref() else { panic!() };
        assert_eq!(
            r.fields["__init__"].to_string(),
            "O x TupleET[ObjectET, ...] x DictET[StrET, ObjectET] -> O"
        );
        let t = type_et();
        let TypeExpr::Exists { bound, body, .. } = &t else { panic!() };
        assert_eq!(bound.as_deref(), Some(&TypeExpr::object()));
        let TypeExpr::Record(r) = body.as_ref() else { panic!() };
        let TypeExpr::Function(dom, _) = &r.fields["__new__"] else { panic!() };
        let TypeExpr::Product(fs) = dom.as_ref() else { panic!() };
        assert_eq!(fs.len(), 4);
        assert_eq!(fs[1], TypeExpr::variadic(TUPLE, TypeExpr::atom(TYPE_ET)));
        assert_eq!(TYPE_ET_WITNESSES, ["type", "ABCMeta", "_ProtocolMeta"]);
    }

    #[test]
    fn mutual_recursion_is_by_name() {
        let env = prelude_env();
        let (_, int_sig) = env.open(&TypeExpr::atom("IntET"), &TypeExpr::atom("IntET")).unwrap();
        assert!(int_sig.fields["__repr__"].referenced_names().contains(&"StrET".to_string()));
        let (_, str_sig) = env.open(&TypeExpr::atom("StrET"), &TypeExpr::atom("StrET")).unwrap();
        assert!(str_sig.fields["__len__"].referenced_names().contains(&"IntET".to_string()));
    }

    #[test]
    fn naming_convention() {
        assert_eq!(et_name("int"), "IntET");
        assert_eq!(et_name("frozenset"), "FrozensetET");
        assert_eq!(et_name("None"), "NoneTypeET");
        assert_eq!(et_name("MyList"), "MyListET");
    }

    #[test]
    fn family_names() {
        assert_eq!(parse_family("GenericET2"), Some(FamilyIndex::generic(2)));
        assert_eq!(parse_family("ProtocolET0"), Some(FamilyIndex::protocol(0)));
        assert_eq!(parse_family("ProtocolET01"), None);
        assert_eq!(parse_family("ProtocolET"), None);
        assert!(prelude_env().lookup("GenericET0").is_none());
    }

    #[test]
    fn virtual_table_parsing() {
        let t = VirtualTable::parse("# hardcoded\nlist Collection\n\n  dict   Mapping  # trailing\n").unwrap();
        assert_eq!(t.pairs, vec![("list".into(), "Collection".into()), ("dict".into(), "Mapping".into())]);
        assert!(matches!(VirtualTable::parse("a b c"), Err(EnvError::VirtualTable { line: 1, .. })));
    }

    #[test]
    fn numeric_tower_toggle() {
        let mut env = prelude_env();
        assert!(env.is_nominal_subtype("BoolET", "ComplexET"));
        env.set_numeric_tower(false);
        assert!(!env.is_nominal_subtype("BoolET", "IntET"));
    }
}
