use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown element `{label}` in {context}")]
    UnknownLabel { label: String, context: String },

    #[error("map is not total: `{0}` has no image")]
    NotTotal(String),

    #[error("arrows do not compose: codomain {left} differs from domain {right}")]
    NotComposable { left: String, right: String },

    #[error("universe bound {0} exceeds the hard cap of 6")]
    UniverseTooLarge(usize),

    #[error("malformed flow: {0}")]
    MalformedFlow(String),

    #[error("not a flow morphism: {0}")]
    NotAMorphism(String),

    #[error("malformed presentation: {0}")]
    MalformedPresentation(String),

    #[error("path set is infinite: directed cycle {}", .cycle.join(" * "))]
    InfinitePathSet { cycle: Vec<String> },

    #[error("lifting square does not commute")]
    NonCommutingSquare,

    #[error("cocone does not commute with the span")]
    NonCommutingCocone,

    #[error("span legs do not share a source")]
    SpanMismatch,

    #[error("search budget exceeded: {needed} candidates against a cap of {cap}")]
    BudgetExceeded { needed: u128, cap: u64 },

    #[error("mediating morphism is not unique: {0} candidates")]
    NotUnique(usize),

    #[error("unknown weak factorization system `{0}`")]
    UnknownWfs(String),

    #[error("small object argument did not converge after {stages} stages")]
    StagesExceeded { stages: usize },

    #[error("cannot parse class expression `{0}`")]
    BadClassExpr(String),

    #[error("{0}")]
    Document(String),
}
