use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    Mismatch(String),

    #[error("gram matrix is not positive definite")]
    NotPositiveDefinite,

    /// A computation would exceed a configured cap. `needed` is a count or an
    /// estimate of one, rendered as text because it may not fit a machine word.
    #[error("{what}: needs {needed}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: String,
        cap: u64,
    },

    /// Point enumeration hit the cap. The bounds are the lattice point
    /// sandwich `(r - l0)^m V_m / V <= N(r) <= (r + l0)^m V_m / V`.
    #[error("point enumeration cap {cap} exceeded; estimated count in [{lower:.1}, {upper:.1}]")]
    PointCapExceeded { cap: u64, lower: f64, upper: f64 },

    #[error("search exhausted without a hit: {0}")]
    NoHit(String),
}

impl Error {
    /// True for refusals caused by caps, as opposed to bad input.
    pub fn is_refusal(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. } | Error::PointCapExceeded { .. } | Error::NoHit(_)
        )
    }
}
