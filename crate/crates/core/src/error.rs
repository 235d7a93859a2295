//! Error type shared by all modules of the crate.

use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Partition data is empty, increasing, or contains a zero part.
    InvalidPartition(String),
    /// A cell address does not lie inside the diagram.
    CellOutsideDiagram { content: i32, height: u32 },
    /// Specialization point is degenerate (0, ±1, or multiplicatively dependent).
    DegenerateContext(String),
    /// Two series with different variable ranges or degree caps were combined.
    MismatchedSeries,
    /// Inversion of a series with zero constant term.
    ZeroConstantTerm,
    /// A vanishing factor appeared in a denominator position.
    Pole(String),
    /// The requested direction lies on a wall of the arrangement.
    Wall(String),
    /// No ζ-shift realizes the slice scaling for this cell.
    UnrealizableShift { content: i32, height: u32 },
    /// Adaptive truncation failed to converge.
    NonConvergence(String),
    /// Caller passed an argument outside the documented domain.
    InvalidArgument(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidPartition(s) => write!(f, "invalid partition: {s}"),
            Error::CellOutsideDiagram { content, height } => {
                write!(f, "cell {content}:{height} lies outside the diagram")
            }
            Error::DegenerateContext(s) => write!(f, "degenerate specialization: {s}"),
            Error::MismatchedSeries => write!(f, "series have mismatched ranges or caps"),
            Error::ZeroConstantTerm => write!(f, "series has zero constant term"),
            Error::Pole(s) => write!(f, "pole: {s}"),
            Error::Wall(s) => write!(f, "direction lies on wall {s}"),
            Error::UnrealizableShift { content, height } => {
                write!(f, "no ζ-shift realizes the slice at cell {content}:{height}")
            }
            Error::NonConvergence(s) => write!(f, "did not converge: {s}"),
            Error::InvalidArgument(s) => write!(f, "invalid argument: {s}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
