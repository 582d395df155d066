//! Python classes and protocols as (generic, bounded) existential types.
//!
//! The crate parses a subset of Python source into class models, elaborates
//! them into existential types over record signatures, and decides the three
//! class relations: subclass-of, object-instance-of and type-instance-of.

pub mod engine;
pub mod error;
pub mod frontend;
pub mod oracle;
pub mod par;
pub mod prelude;
pub mod types;

pub use error::{EngineError, EnvError, FrontendError, MroError, Span, TypeError};
pub use prelude::{prelude_env, Definition, TypeEnv};
pub use types::{TypeExpr, Witness};
