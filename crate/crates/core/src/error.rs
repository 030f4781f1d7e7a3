use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BatemanError {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// `4 m k <= gamma^2`: the oscillation frequency is not real and positive.
    #[error("overdamped or critically damped parameters: 4mk = {four_mk}, gamma^2 = {gamma_sq}")]
    Overdamped { four_mk: f64, gamma_sq: f64 },

    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    /// A floating-point computation produced non-finite values.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A vacuum or norm series does not converge for the requested parameter.
    #[error("series diverges: {0}")]
    SeriesDivergence(String),

    #[error("fit error: {0}")]
    Fit(String),

    /// The joint nullspace defining a vacuum does not have dimension one.
    #[error("expected a one-dimensional nullspace, found dimension {dim}")]
    Nullspace { dim: usize },

    /// Requested quantum numbers exhaust the truncated space.
    #[error("quantum numbers ({n1}, {n2}) exceed the available headroom {headroom}")]
    Headroom {
        n1: usize,
        n2: usize,
        headroom: usize,
    },

    /// Product of two scalars carrying different physical units.
    #[error("mixed-unit product: {0}")]
    MixedUnits(String),

    /// Substitution with an irrational overall scale applied to an odd-degree word.
    #[error("irrational scale on a word of odd degree {0}")]
    IrrationalScale(usize),
}

pub type Result<T> = std::result::Result<T, BatemanError>;
