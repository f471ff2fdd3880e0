use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A model or solver parameter violates its invariant.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "quadrature did not converge within {intervals} subintervals \
         (error estimate {estimate:e}, target {target:e})"
    )]
    Quadrature {
        intervals: usize,
        estimate: f64,
        target: f64,
    },

    /// The bound-state bracket could not be closed.
    #[error("bound-state bracket not closed after {0} doublings")]
    BracketExpansion(u32),

    /// The amplitude left the physical disc; the step is too coarse.
    #[error("integration unstable at t = {time}: |C1| = {magnitude}; use a smaller step")]
    Unstable { time: f64, magnitude: f64 },

    /// The probe population never changed, so no speed limit exists.
    #[error("no evolution: population is frozen over the driving time")]
    NoEvolution,
}

pub type Result<T> = std::result::Result<T, Error>;
