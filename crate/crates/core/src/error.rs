use thiserror::Error;

use crate::Rational;

/// Everything that can go wrong in this crate.
///
/// The variants fall into three groups, which the command-line front end maps
/// onto distinct exit codes:
///
/// * caller errors: [`Error::Hypothesis`], [`Error::InvalidArgument`],
///   [`Error::ConductorMismatch`], [`Error::DivisionByZero`],
///   [`Error::DegenerateAngle`], [`Error::BudgetExceeded`];
/// * internal consistency failures, which mean an identity that must hold
///   exactly did not: [`Error::NotRational`], [`Error::NotIntegral`],
///   [`Error::IdentityFailed`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the hypotheses under which a formula is proved.
    #[error("{0}")]
    Hypothesis(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: u64, right: u64 },

    #[error("division by zero")]
    DivisionByZero,

    /// The squared sine identity has both sides equal to zero.
    #[error("degenerate angle: {0}")]
    DegenerateAngle(String),

    /// An exact sum was expected to be rational but still carries irrational
    /// coordinates. `residual` is the largest absolute coefficient on a
    /// non-constant basis power.
    #[error("value is not rational (max residual coefficient {residual})")]
    NotRational { residual: Rational },

    #[error("{what} is not a non-negative integer: {value}")]
    NotIntegral { what: String, value: Rational },

    #[error("identity failed: {identity}: {detail}")]
    IdentityFailed { identity: String, detail: String },

    #[error("enumeration of about {estimate} necklaces exceeds the budget of {budget}")]
    BudgetExceeded { estimate: u128, budget: u128 },
}

impl Error {
    /// True for the variants that signal a bug or a failed identity rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::NotRational { .. } | Error::NotIntegral { .. } | Error::IdentityFailed { .. }
        )
    }

    pub(crate) fn hypothesis(msg: impl Into<String>) -> Self {
        Error::Hypothesis(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn identity(identity: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::IdentityFailed {
            identity: identity.into(),
            detail: detail.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
