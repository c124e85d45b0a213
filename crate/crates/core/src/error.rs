use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid space configuration: dim {dim}, card {card} (need 0 < card < dim)")]
    InvalidSpace { dim: usize, card: usize },
    #[error("space too large to enumerate: log10 size {log10_size:.2} exceeds cap {cap}")]
    TooLarge { log10_size: f64, cap: u64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid pixie: {0}")]
    InvalidPixie(String),
    #[error("invalid mean field vector: {0}")]
    InvalidMeanField(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("ambiguous predicate `{0}`: present as both noun and verb")]
    AmbiguousPredicate(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid triple: {0}")]
    InvalidTriple(String),
    #[error("empty corpus after filtering")]
    EmptyCorpus,
    #[error("invalid micro-world: {0}")]
    InvalidWorld(String),
    #[error("inconsistent model: {0}")]
    InconsistentModel(String),
    #[error("predicate `{0}` has no co-occurrence counts")]
    UndefinedTarget(String),
    #[error("assignment covers {found} nodes, graph has {expected}")]
    IncompleteAssignment { expected: usize, found: usize },
    #[error("invalid scope tree: {0}")]
    InvalidScopeTree(String),
    #[error("variable `{0}` is used but not bound by any enclosing quantifier")]
    UnboundVariable(String),
    #[error("variable `{0}` is bound by more than one quantifier")]
    DuplicateQuantifier(String),
    #[error("restriction has zero probability of truth")]
    DegenerateRestriction,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("correlation undefined: zero variance")]
    ZeroVariance,
    #[error("empty input")]
    EmptyInput,
    #[error("term has an empty gold set")]
    EmptyGoldSet,
    #[error("zero-norm vector for `{0}`")]
    ZeroNorm(String),
}
