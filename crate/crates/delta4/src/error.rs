use std::fmt;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Field degree outside the supported range 2..=24.
    DegreeOutOfRange { m: u32 },
    /// Modulus bit vector does not have degree exactly m, or lacks the
    /// constant term.
    BadModulusShape { m: u32, modulus: u64 },
    /// Modulus is reducible; a nontrivial factor is named.
    ReducibleModulus { modulus: u64, factor: u64 },
    /// No built-in modulus for this degree.
    NoDefaultModulus { m: u32 },
    /// Inversion of zero.
    ZeroInverse,
    /// Operand belongs to a different field than the operation expects.
    FieldMismatch,
    /// An operation was asked to run on a field larger than its stated cap.
    FieldTooLarge { m: u32, limit: u32, what: &'static str },
    /// The function degenerates under the normalizing reductions: nothing
    /// but q-affine terms remain, so the normal-form analysis does not apply.
    Degenerate { reason: String },
    /// Value table has the wrong length for the field.
    TableLength { expected: usize, got: usize },
    /// A numeric argument violates an operation's precondition.
    BadArgument { what: String },
    /// Function-grammar or file parse failure, with byte position.
    Parse { pos: usize, msg: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegreeOutOfRange { m } => {
                write!(f, "field degree m={m} outside supported range 2..=24")
            }
            Error::BadModulusShape { m, modulus } => write!(
                f,
                "modulus {modulus:#X} does not have degree {m} with constant term 1"
            ),
            Error::ReducibleModulus { modulus, factor } => write!(
                f,
                "modulus {modulus:#X} is reducible: divisible by {factor:#X}"
            ),
            Error::NoDefaultModulus { m } => {
                write!(f, "no built-in modulus for degree {m}")
            }
            Error::ZeroInverse => write!(f, "zero has no multiplicative inverse"),
            Error::FieldMismatch => write!(f, "operands belong to different fields"),
            Error::FieldTooLarge { m, limit, what } => {
                write!(f, "{what} supports m <= {limit}, got m={m}")
            }
            Error::Degenerate { reason } => write!(f, "degenerate function: {reason}"),
            Error::TableLength { expected, got } => {
                write!(f, "value table must have {expected} entries, got {got}")
            }
            Error::BadArgument { what } => write!(f, "{what}"),
            Error::Parse { pos, msg } => write!(f, "parse error at byte {pos}: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
