// Copyright 2026 the Spiralwind Authors
// SPDX-License-Identifier: Apache-2.0

use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the core operations.
///
/// Negative mathematical outcomes (a failed extraction, an unrefuted budget, a
/// missing convergent subsequence) are never errors; they are reported as data.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A numeric parameter is outside its admissible range.
    Parameter(String),
    /// Input data violates a structural requirement (e.g. a non-monotone table).
    Validation(String),
    /// An evaluation point lies outside the domain covered by tabulated data.
    Range(String),
    /// A requested computation exceeds the configured size budget.
    Resource(String),
    /// Adaptive quadrature did not reach the requested tolerance.
    Quadrature(String),
    /// The operation needs a capability the value does not have (e.g. an inverse).
    Capability(String),
    /// A documented precondition of the operation does not hold.
    Precondition(String),
    /// Random sampling produced no usable sample.
    Sampling(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parameter(m) => write!(f, "parameter error: {m}"),
            Error::Validation(m) => write!(f, "validation error: {m}"),
            Error::Range(m) => write!(f, "range error: {m}"),
            Error::Resource(m) => write!(f, "resource error: {m}"),
            Error::Quadrature(m) => write!(f, "quadrature error: {m}"),
            Error::Capability(m) => write!(f, "capability error: {m}"),
            Error::Precondition(m) => write!(f, "precondition error: {m}"),
            Error::Sampling(m) => write!(f, "sampling error: {m}"),
        }
    }
}

impl core::error::Error for Error {}

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$kind(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;
