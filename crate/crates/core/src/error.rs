use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("arity mismatch: expected {expected} type arguments, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("not a generic type: {0}")]
    NotGeneric(String),
    #[error("type syntax error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvError {
    #[error("unknown type name {0}")]
    UnknownName(String),
    #[error("{0} is already defined")]
    NameClash(String),
    #[error("invalid arity {arity} for the {family} family")]
    InvalidArity { family: &'static str, arity: usize },
    #[error("{ctor} expects {expected} type arguments, found {found}")]
    BadApplication { ctor: String, expected: usize, found: usize },
    #[error("virtual table line {line}: {message}")]
    VirtualTable { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MroError {
    #[error("cannot create a consistent method resolution order for {class} (pending: {pending})")]
    InconsistentHierarchy { class: String, pending: String },
    #[error("class {class} names unknown base {base}")]
    UnknownBase { class: String, base: String },
    #[error("cyclic inheritance: {}", .0.join(" -> "))]
    CyclicHierarchy(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Mro(#[from] MroError),
    #[error("{0} has no member signature to conform to")]
    NotAnInterface(String),
    #[error("witness lacks a binding for member {0}")]
    MissingMember(String),
    #[error("representation {representation} violates the bound {bound}")]
    BoundViolated { representation: String, bound: String },
    #[error("expected an existential type, found {0}")]
    NotExistential(String),
}

/// Source position, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("{file}:{span}: syntax error: {message}")]
    Syntax { file: String, span: Span, message: String },
    #[error("{context}: unknown annotation {name}")]
    UnknownAnnotation { context: String, name: String },
    #[error("{context}: type variable {name} is not in scope")]
    MisusedTypeVar { context: String, name: String },
    #[error("{context}: unsupported annotation {detail}")]
    BadAnnotation { context: String, detail: String },
    #[error("class {class}: {source}")]
    Class { class: String, source: Box<EngineError> },
    #[error("{0} is defined more than once")]
    DuplicateClass(String),
    #[error("{file}: {message}")]
    Io { file: String, message: String },
}

impl From<(String, MroError)> for FrontendError {
    fn from((class, e): (String, MroError)) -> Self {
        FrontendError::Class { class, source: Box::new(EngineError::Mro(e)) }
    }
}
