use crate::hyp2f1::EvalResult;

/// Errors produced by the evaluators, the theorem registry and the sweep
/// harness.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The result is not representable as a finite double.
    #[error("overflow: {0}")]
    Overflow(String),

    /// A series hit its term budget before the stopping rule fired. The
    /// partial result carries an honest error estimate.
    #[error(
        "no convergence after {} terms (value {:e}, estimated error {:e})",
        .0.terms_used, .0.value, .0.abs_error_est
    )]
    NoConvergence(EvalResult),

    /// The parameter triple is in the wrong regime for the operation.
    #[error("regime error: {0}")]
    Regime(String),

    /// A theorem check was requested for parameters outside its hypothesis.
    #[error("hypothesis violation for {id}: {reason}")]
    HypothesisViolation { id: String, reason: String },

    /// A functional has a vanishing denominator.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Malformed `SweepSpec` or other configuration problem.
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by the caller's input rather than by the
    /// numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Regime(_) | Error::Config(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
