use thiserror::Error;

/// Errors raised by the geometric and arithmetic routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no primitive generator")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cone is not full-dimensional")]
    NotFullDimensional,
    #[error("cone is not pointed")]
    NotPointed,
    #[error("polyhedra have different tail cones")]
    TailMismatch,
    #[error("linear form is unbounded below on the polyhedron")]
    UnboundedBelow,
    #[error("point is not in the interior of the cone")]
    NotInterior,
    #[error("rational function has a pole at the evaluation point")]
    Pole,
    #[error("invalid polyhedral divisor: {0}")]
    InvalidDivisor(String),
    #[error("polyhedral divisor is not proper")]
    NotProper,
    #[error("not Q-Gorenstein: the canonical-weight system has no unique solution")]
    NotQGorenstein,
    #[error("not log-terminal")]
    NotLogTerminal,
    #[error("no admissible point")]
    NoAdmissiblePoint,
    #[error("point {0} is not admissible")]
    InadmissiblePoint(String),
    #[error("unknown base point {0}")]
    UnknownPoint(String),
    #[error("degeneration cone has no canonical weight")]
    DegenerationNotGorenstein,
    #[error("{0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    Parse(String),
    #[error("oracle enumeration exceeds the cap of {cap} lattice points")]
    OracleBudget { cap: u64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
