//! Type expressions and the purely syntactic operations on them.

mod alpha;
mod expr;
pub(crate) mod json;
mod normalize;
mod parse;
mod render;
mod subst;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use alpha::{alpha_eq, canonical_key};
pub use expr::{Record, TypeExpr, BOTTOM, NONE_TYPE, OBJECT};
pub use normalize::normalize;
pub use parse::{parse_type, parse_type_with_vars};
pub use subst::{all_vars, free_vars, fresh_name, instantiate, substitute, substitute_all};

/// A representation type together with typed bindings for the members of the
/// existential it claims to inhabit, e.g. `(Duck, {quack := Duck.quack})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub representation: String,
    pub bindings: BTreeMap<String, TypeExpr>,
}

impl Witness {
    pub fn new(representation: impl Into<String>) -> Self {
        Witness { representation: representation.into(), bindings: BTreeMap::new() }
    }

    pub fn bind(mut self, member: impl Into<String>, ty: TypeExpr) -> Self {
        self.bindings.insert(member.into(), ty);
        self
    }
}
