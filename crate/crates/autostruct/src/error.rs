use thiserror::Error;

/// Crate-wide error type. Internal invariant breaches panic instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("arity mismatch for {name}: expected {expected}, got {got}")]
    ArityMismatch {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("duplicate tape {0:?}")]
    DuplicateTape(String),
    #[error("unknown tape {0:?}")]
    UnknownTape(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("unknown relation {0:?}")]
    UnknownRelation(String),
    #[error("quantifier rebinds variable {0:?}")]
    Rebind(String),
    #[error("formula has free variable {0:?}")]
    FreeVariablePresent(String),
    #[error("unknown builtin {0:?}")]
    UnknownBuiltin(String),
    #[error("cannot decode: {0}")]
    Decode(String),
    #[error("not a poset: {0}")]
    NotAPoset(String),
    #[error("invalid machine: {0}")]
    InvalidTm(String),
    #[error("configuration graph is not reversible")]
    NotReversible,
    #[error("machine can halt without accepting: {0}")]
    RejectingHaltState(String),
    #[error("relation {0:?} is not a function: {1}")]
    NotAFunction(String, String),
    #[error("not a Boolean algebra: {0}")]
    NotABooleanAlgebra(String),
    #[error("cap exceeded at i = {0}")]
    CapExceeded(usize),
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
