use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group order exceeds cap {cap}")]
    CapExceeded { cap: usize },
    #[error("matrix is not invertible over the integers")]
    NotInvertible,
    #[error("linear part does not have finite order")]
    InfiniteOrder,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("translations do not span a full-rank lattice")]
    NotCocompact,
    #[error("group has no presentation relators")]
    MissingPresentation,
    #[error("relator {index} does not evaluate to a lattice translation")]
    NonIntegralRelator { index: usize },
    #[error("sign assignment does not extend to a homomorphism")]
    NotAHomomorphism,
    #[error("sign assignment is identically +1")]
    TrivialSign,
    #[error("element is not an isometry of the lattice form")]
    NotAnIsometry,
    #[error("element does not normalize the group")]
    NotNormalizing,
    #[error("square of the element lies outside the group")]
    SquareOutside,
    #[error("element already lies in the group")]
    AlreadyInside,
    #[error("group is not a Bieberbach group: {0}")]
    NotBieberbach(String),
    #[error("holonomy is not cyclic of odd order > 1")]
    HolonomyNotOddCyclic,
    #[error("holonomy is not of order 2")]
    HolonomyNotZ2,
    #[error("band boundaries differ")]
    BoundaryMismatch,
    #[error("group is already orientable")]
    AlreadyOrientable,
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("lattice style `{style}` is not available for `{entry}`")]
    IncompatibleStyle { entry: String, style: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("witness scan exhausted at denominator {0}")]
    WitnessScanExhausted(u64),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
