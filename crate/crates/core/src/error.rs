// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("extended Euclid called with both arguments zero")]
    BothZero,
    #[error("zero has no multiplicative inverse")]
    ZeroElement,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("point doubling is not supported by the generic addition formulas")]
    Doubling,
    #[error("input is outside the generic case: {0}")]
    NonGenericInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),
    #[error("width {width} too large for exhaustive enumeration (limit {limit})")]
    WidthTooLarge { width: usize, limit: usize },
    #[error("packed register overflow: coefficient degree {coeff} + remainder degree {rem} does not fit in {m} wires")]
    Overflow { coeff: usize, rem: usize, m: usize },
    #[error("quotient exceeds the {bits}-bit quotient register")]
    QuotientOverflow { bits: usize },
    #[error("{pending} input(s) did not terminate within {cycles} cycles")]
    CycleBudgetExceeded { pending: usize, cycles: usize },
    #[error("bad parameter: {0}")]
    BadParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
