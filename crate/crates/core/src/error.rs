use core::fmt;

use crate::triangle::TrianglePosition;

/// Errors raised by the numerical kernel and the combinatorial analysis.
#[derive(Debug, Clone, PartialEq)]
#[non_exhaustive]
pub enum Error {
    /// Two operands that must share a size do not.
    SizeMismatch { left: usize, right: usize },
    /// A square matrix was required.
    NotSquare { rows: usize, cols: usize },
    /// An index (block size, triangle row, level) lies outside its valid range.
    OutOfRange {
        index: usize,
        min: usize,
        max: usize,
    },
    /// A spectrum was empty.
    EmptySpectrum,
    /// A spectrum was not sorted in descending order.
    NotDescending { index: usize },
    /// An input contained NaN or an infinity.
    NonFinite,
    /// A matrix failed the unitarity check.
    NotUnitary { deviation: f64 },
    /// The Jacobi iteration did not reach the off-diagonal threshold.
    NoConvergence { sweeps: usize },
    /// The ellipsoid picture needs a strictly positive spectrum.
    NonPositiveSpectrum { smallest: f64 },
    /// Triangle rows have the wrong lengths.
    MalformedTriangle {
        row: usize,
        expected: usize,
        found: usize,
    },
    /// A triangle violates row monotonicity or interlacing.
    InvalidTriangle {
        position: TrianglePosition,
        amount: f64,
    },
    /// A chain of equalities meets some row in a non-contiguous set.
    NonContiguousChain { row: usize },
    /// The target spectrum of a bordered extension does not interlace the source.
    InterlacingViolation { amount: f64 },
    /// A constructed matrix misses its prescribed spectrum.
    SpectrumMismatch { error: f64 },
    /// Requested equality blocks force further equalities or are contradictory.
    PatternNotClosed,
    /// Tolerances must be positive with `eps_rank > eps_spec`.
    InvalidTolerance,
    /// At least one sample is required.
    NoSamples,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SizeMismatch { left, right } => {
                write!(f, "size mismatch: {left} vs {right}")
            }
            Error::NotSquare { rows, cols } => write!(f, "matrix is {rows}x{cols}, not square"),
            Error::OutOfRange { index, min, max } => {
                write!(f, "index {index} outside {min}..={max}")
            }
            Error::EmptySpectrum => f.write_str("spectrum is empty"),
            Error::NotDescending { index } => {
                write!(f, "spectrum is not descending at entry {index}")
            }
            Error::NonFinite => f.write_str("non-finite value"),
            Error::NotUnitary { deviation } => {
                write!(f, "matrix is not unitary (deviation {deviation:e})")
            }
            Error::NoConvergence { sweeps } => {
                write!(f, "Jacobi iteration did not converge in {sweeps} sweeps")
            }
            Error::NonPositiveSpectrum { smallest } => {
                write!(f, "spectrum must be positive, smallest value is {smallest}")
            }
            Error::MalformedTriangle {
                row,
                expected,
                found,
            } => {
                write!(
                    f,
                    "triangle row {row} has {found} entries, expected {expected}"
                )
            }
            Error::InvalidTriangle { position, amount } => write!(
                f,
                "triangle violates interlacing at ({}, {}) by {amount:e}",
                position.i, position.k
            ),
            Error::NonContiguousChain { row } => {
                write!(f, "chain of equalities is not contiguous in row {row}")
            }
            Error::InterlacingViolation { amount } => {
                write!(
                    f,
                    "target spectrum does not interlace the source (by {amount:e})"
                )
            }
            Error::SpectrumMismatch { error } => {
                write!(f, "constructed spectrum misses the target by {error:e}")
            }
            Error::PatternNotClosed => {
                f.write_str("equality blocks are not closed under interlacing")
            }
            Error::InvalidTolerance => {
                f.write_str("tolerances must be positive and eps_rank must exceed eps_spec")
            }
            Error::NoSamples => f.write_str("at least one sample is required"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
