use core::fmt;

/// Everything that can go wrong inside the algebra kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two polynomials or maps live in different numbers of variables.
    VariableMismatch { left: usize, right: usize },
    /// A vector, matrix or argument list has the wrong length.
    LengthMismatch { expected: usize, found: usize },
    NotSquare { rows: usize, cols: usize },
    NotHomogeneous,
    /// Polarization needs degree at least two.
    DegreeTooLow(u32),
    Singular,
    NotAnIdeal,
    NotNilpotent,
    /// The map does not fix the origin.
    NonzeroConstant,
    /// Tensor arities or dimensions do not line up.
    ShapeMismatch,
    /// A structure-constant index lies outside `0..dim`.
    IndexOutOfRange { index: usize, dim: usize },
    DuplicateEntry,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::VariableMismatch { left, right } => {
                write!(f, "variable count mismatch: {left} vs {right}")
            }
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::NotSquare { rows, cols } => write!(f, "matrix is {rows}x{cols}, not square"),
            Error::NotHomogeneous => f.write_str("map is not homogeneous"),
            Error::DegreeTooLow(d) => write!(f, "degree {d} is below 2"),
            Error::Singular => f.write_str("matrix is singular"),
            Error::NotAnIdeal => f.write_str("subspace is not an ideal"),
            Error::NotNilpotent => f.write_str("algebra is not nilpotent"),
            Error::NonzeroConstant => f.write_str("map does not send 0 to 0"),
            Error::ShapeMismatch => f.write_str("tensor shape mismatch"),
            Error::IndexOutOfRange { index, dim } => {
                write!(f, "index {index} out of range for dimension {dim}")
            }
            Error::DuplicateEntry => f.write_str("duplicate structure constant"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
