//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),
    #[error("position {0} is out of range for a word of length {1}")]
    PositionOutOfRange(usize, usize),
    #[error("node {0} referenced by an edge does not exist")]
    DanglingEdge(usize),
    #[error("symbol `{symbol}` has rank {expected} but {found} children were given")]
    RankMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("signature has no rank map")]
    NotRanked,
    #[error("alphabet `{0}` must not be empty")]
    EmptyAlphabet(String),
    #[error("graph is not a valid {0}: {1}")]
    NotAValid(String, String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unknown node label `{0}`")]
    UnknownNodeLabel(String),
    #[error("unknown edge label `{0}`")]
    UnknownEdgeLabel(String),
    #[error("variable `{0}` is used as {1} but declared as {2}")]
    SortMismatch(String, String, String),
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("free variables of the formula are {found:?} but the declared context is {declared:?}")]
    ContextMismatch {
        declared: Vec<String>,
        found: Vec<String>,
    },
    #[error("model checking refused: graph has {0} nodes, above the cap of {1}")]
    OracleCapExceeded(usize, usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error("formula uses signature item `{0}` outside the target signature")]
    WrongSignature(String),
    #[error("state cap exceeded in {stage}: {states} states over cap {cap}")]
    StateCap {
        stage: String,
        states: usize,
        cap: usize,
    },
    #[error("alphabet mismatch between automata")]
    AlphabetMismatch,
    #[error("formula error: {0}")]
    Formula(#[from] FormulaError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransducerError {
    #[error("input graph is not over the transducer's input signature: {0}")]
    SignatureMismatch(String),
    #[error("parameter enumeration cap exceeded: input has {0} nodes, cap is {1}")]
    ParameterCapExceeded(usize, usize),
    #[error("marker `{0}` already occurs in the output alphabet")]
    MarkerInAlphabet(String),
    #[error("pair symbols must be distinct, got `{0}` twice")]
    PairNotDistinct(String),
    #[error("output of the transducer is not a valid {0}: {1}")]
    InvalidOutput(String, String),
    #[error("structure error: {0}")]
    Structure(#[from] StructureError),
    #[error("formula error: {0}")]
    Formula(#[from] FormulaError),
    #[error("compile error: {0}")]
    Compile(#[from] CompileError),
    #[error("parse error in transducer file: {0}")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrammarError {
    #[error("parse error in grammar: {0}")]
    Parse(String),
    #[error("start symbol `{0}` is not a nonterminal")]
    BadStart(String),
    #[error("production uses undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("resource budget exceeded in {0}")]
    Budget(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecideError {
    #[error("transducer is nondeterministic (has parameters); the decision procedure requires deterministic transducers")]
    Nondeterministic,
    #[error("transducers must share the input signature")]
    InputSignatureMismatch,
    #[error("domain alphabet does not match the transducers' input signature: {0}")]
    DomainMismatch(String),
    #[error("unsupported transducer shape: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Transducer(#[from] TransducerError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
}
