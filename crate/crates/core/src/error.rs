use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Dimension or index mismatch in the input data.
    #[error("invalid presentation: {0}")]
    Structure(String),

    /// Semantic validation failed; every collected message is attached.
    #[error("presentation failed validation: {}", .0.join("; "))]
    Invalid(Vec<String>),

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    /// A factor that is not a unit was asked to be inverted.
    #[error("non-unit inversion of C({character}) at pairing {pairing}: Δ-clearing required")]
    NonUnitInversion { character: String, pairing: String },

    /// The search region for classes is not compact.
    #[error("unbounded enumeration: direction {direction} has zero θ-degree and lies in the kernel of restriction to χ(G)")]
    UnboundedFiber { direction: String },

    /// A self-check of the abelianization pipeline failed.
    #[error("pipeline integrity: {0}")]
    Integrity(String),

    #[error("Weyl group: {0}")]
    Weyl(String),

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
