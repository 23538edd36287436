use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("multiplication table is malformed: {0}")]
    MalformedTable(String),
    #[error("composition is not associative at ({a}, {b}, {c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("element 0 is not a two-sided identity (fails at element {0})")]
    BadIdentity(usize),
    #[error("bad cycle syntax: {0}")]
    BadCycleSyntax(String),
    #[error("generated group exceeds the order cap {cap}")]
    DegreeExceeded { cap: usize },
    #[error("unsupported group parameters: {0}")]
    UnsupportedParams(String),
    #[error("subgroup lattice exceeds the node cap {cap}")]
    CapExceeded { cap: usize },
    #[error("subgroups belong to different parent groups")]
    ParentMismatch,
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("base subgroup is not contained in the given subgroup")]
    BaseNotContained,
    #[error("two-box elements belong to different models")]
    ModelMismatch,
    #[error("element is not a biprojection")]
    NotBiprojection,
    #[error("element is not a projection")]
    NotProjection,
    #[error("angle undefined: {0}")]
    AngleUndefined(&'static str),
    #[error("indices do not describe a chain N < P < Q < M")]
    NotAChain,
    #[error("trace data does not describe a minimal pair: {0}")]
    NotMinimalPair(String),
    #[error("correlation undefined for a scalar element")]
    ZeroVariance,
    #[error("quadruple is not a commuting square")]
    NotCommutingSquare,
    #[error("quadruple has an endpoint intermediate (P or Q equals N or M)")]
    NotApplicable,
    #[error("index {0} is below 2")]
    IndexTooSmall(String),
    #[error("invalid trace data: {0}")]
    InvalidTraceData(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("value is not rational: {0}")]
    Irrational(&'static str),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}
