use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::homoclinic::FateLabel;
use crate::model::State;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the toolkit reports.
///
/// Variants split into domain errors (bad parameters or inputs) and numerical
/// failures; see [`Error::is_domain`].
#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
pub enum Error {
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("parameters outside the valid domain: {0}")]
    InvalidDomain(String),
    #[error("b >= 2a maps to a non-positive beta ({beta})")]
    NonPositiveBeta { beta: f64 },
    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },
    #[error("trajectory escaped at t = {t}")]
    Escaped { t: f64, state: State },
    #[error("no section crossing before t = {t}")]
    EventNotFound { t: f64 },
    #[error("unstable manifold converged to the focus at t = {t} before reaching the section")]
    ConvergedToFocus { t: f64, state: State },
    #[error("target {value} outside the admissible range ({lo}, {hi})")]
    OutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("ladder truncated: found {} of {wanted} roots", found.len())]
    LadderTruncated { found: Vec<f64>, wanted: usize },
    #[error("unstable manifold fate interferes: {fate:?}")]
    FateInterference {
        fate: FateLabel,
        /// Sub-bracket where the interference was met, when raised by a root finder.
        bracket: Option<(f64, f64)>,
    },
    #[error("bracket ({lo}, {hi}) does not change sign: ({f_lo}, {f_hi})")]
    BracketNotSignChanging {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("root found but the orbit makes {found} half-turns instead of {expected}")]
    TwistMismatch {
        expected: u32,
        found: u32,
        param: f64,
    },
    #[error("no sample of the curve trace succeeded")]
    EmptyTrace,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// `true` for errors caused by the caller's parameters rather than by the numerics.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::DegenerateParameters(_)
                | Error::InvalidDomain(_)
                | Error::NonPositiveBeta { .. }
                | Error::OutOfRange { .. }
                | Error::InvalidInput(_)
                | Error::BracketNotSignChanging { .. }
        )
    }
}
