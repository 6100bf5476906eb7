use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("linear system has no solution")]
    NoSolution,
    #[error("operands live in different jet rings")]
    InconsistentTruncation,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("connection is not flat: {0}")]
    NotFlat(String),
    #[error("polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("dual polytope is not a lattice polytope")]
    NotLattice,
    #[error("Newton polytope of f differs from the given polytope")]
    NewtonPolytopeMismatch,
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("Laurent polynomial is not regular for its polytope")]
    NotRegular,
    #[error("the pieces F^l and U_l do not split the space: {0}")]
    SplittingFails(String),
    #[error("Griffiths transversality fails: {0}")]
    TransversalityFails(String),
    #[error("section must be nonzero")]
    ZeroVector,
    #[error("section conditions not met: {0}")]
    ConditionsNotMet(String),
    #[error("potential is not integrable")]
    NotIntegrable,
    #[error("generation condition fails")]
    GCFails,
    #[error("injectivity condition fails")]
    ICFails,
    #[error("flatness violated during unfolding: {0}")]
    FlatnessViolation(String),
    #[error("nilpotent endomorphism is not compatible: {0}")]
    CompatFails(String),
    #[error("fan is not smooth and complete: {0}")]
    NotSmoothFan(String),
    #[error("surface is not weak Fano")]
    NotWeakFano,
    #[error("GW cutoff {cutoff} is below the jet order {order}")]
    CutoffTooSmall { cutoff: u32, order: u32 },
    #[error("jet ring too large: {0} monomials exceeds the cap {1}")]
    TooLarge(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
