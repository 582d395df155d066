//! Subtyping, conformance, linearization and the class relations.

pub mod conformance;
pub mod mro;
pub mod relations;
pub mod subtype;
pub mod witness;

pub use conformance::{type_instance_of, type_instance_of_at, ConformanceReport, MemberReport};
pub use subtype::{full_record, is_subtype, subtype, Checker, Derivation, Rule};
pub use mro::{c3_linearize, object_instance_of, subclass_of, Registry};
pub use witness::check_witness;
pub use relations::{relations_graph, RelationEdge, RelationKind, RelationsGraph};
