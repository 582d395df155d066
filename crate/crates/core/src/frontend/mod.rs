//! Front end for a subset of Python: tokenizer, parser, class model and
//! elaboration into existential types.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod model;
pub mod annotation;
pub mod elaborate;
pub mod project;

pub use project::{Project, ProjectOptions};
