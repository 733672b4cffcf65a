use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("vertex index {index} out of range for order {order}")]
    BadIndex { index: usize, order: usize },
    #[error("resource guard: {what} of size {size} exceeds cap {cap}")]
    ResourceGuard {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("tree order {0} is too small for this operation")]
    OrderTooSmall(usize),
    #[error("vertex {0} is of type B, expected type A")]
    NotTypeA(usize),
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("tree does not fulfil the bipartition condition{}", .0.as_deref().map(|s| format!(": {s}")).unwrap_or_default())]
    NotBipartite(Option<String>),
    #[error("vertex sequence is not a simple path")]
    NotAPath,
    #[error("rooted subtrees overlap")]
    Overlapping,
    #[error("rooted subtree at vertex {0} is the whole tree")]
    RootIsWholeTree(usize),
    #[error("syntax error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("empty argument list at offset {pos}")]
    Arity { pos: usize },
    #[error("type error: {0}")]
    Type(String),
    #[error("division by zero at depth {0}")]
    DivisionByZero(usize),
    #[error("bad range: {0}")]
    BadRange(String),
    #[error("precision cap {cap} reached before the enclosure separated from {target}")]
    PrecisionExhausted { cap: usize, target: String },
    #[error("row {row}: field {field} expected {expected}, got {actual}")]
    RowMismatch {
        row: String,
        field: String,
        expected: String,
        actual: String,
    },
    #[error("edge-list parse error on line {line}: {message}")]
    EdgeList { line: usize, message: String },
    #[error("manifest error: {0}")]
    Manifest(String),
    #[error("self-test failed: {0}")]
    SelfTest(String),
}
