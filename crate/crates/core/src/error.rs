use thiserror::Error;

/// Every failure the library can report.
///
/// Variants carrying a `witness` list the element indices that exhibit the
/// failure, smallest lexicographic witness first.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("axiom `{axiom}` fails at {witness:?}")]
    AxiomViolation { axiom: String, witness: Vec<usize> },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Two independent computations of the same quantity disagree.
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),

    #[error("not a morphism: `{op}` is not preserved at {witness:?}")]
    NotAMorphism { op: String, witness: Vec<usize> },

    #[error("not a semilattice morphism: meet not preserved at {witness:?}")]
    NotSemilatticeMorphism { witness: Vec<usize> },

    #[error("not an inverse semigroup: {0}")]
    NotInverse(String),

    #[error("size limit exceeded: {what} would have {count} elements (limit {limit})")]
    SizeLimit { what: String, count: usize, limit: usize },

    #[error("premorphism condition `{condition}` fails at {witness:?}")]
    PMViolation { condition: String, witness: Vec<usize> },

    /// A proven equivalence between classification conditions failed on an instance.
    #[error("equivalence violated: {0}")]
    EquivalenceViolation(String),

    #[error("precondition `{condition}` fails at {witness:?}")]
    PreconditionFailed { condition: String, witness: Vec<usize> },

    #[error("universal property fails: {0}")]
    UniversalityFailure(String),

    #[error("not a proper extension: {0}")]
    NotProper(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn mismatch(msg: impl Into<String>) -> Error {
    Error::OracleMismatch(msg.into())
}

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::OracleMismatch(msg()))
    }
}
