use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Characteristic is not prime.
    NotPrime(u64),
    /// Field modulus rejected (wrong degree, not monic, reducible).
    BadModulus(String),
    /// Field order too large for the table-driven arithmetic.
    FieldTooLarge { p: u64, e: u32 },
    /// Operands live in different rings or fields.
    Mismatch(&'static str),
    /// A homogeneous input was required.
    NotHomogeneous,
    /// The curve has a singular point.
    Singular(String),
    /// An index or degree outside the admissible range.
    OutOfRange(String),
    /// A graded degree needed by the computation lies outside the window.
    WindowTooSmall { needed: i64, window: i64 },
    /// An element that had to be a unit is not one.
    NotUnit(String),
    /// A linear-algebra problem exceeded the configured dimension cap.
    ResourceCap { dim: usize, cap: usize },
    /// Text input could not be parsed.
    Parse { pos: usize, msg: String },
    /// Input outside the supported class (e.g. a non-monomial action).
    Unsupported(String),
    /// Inverse requested for zero.
    DivisionByZero,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::BadModulus(m) => write!(f, "invalid field modulus: {m}"),
            Error::FieldTooLarge { p, e } => write!(f, "field of order {p}^{e} is too large"),
            Error::Mismatch(what) => write!(f, "operands do not match: {what}"),
            Error::NotHomogeneous => write!(f, "polynomial is not homogeneous"),
            Error::Singular(why) => write!(f, "curve is singular: {why}"),
            Error::OutOfRange(why) => write!(f, "out of range: {why}"),
            Error::WindowTooSmall { needed, window } => {
                write!(f, "window {window} too small, degree {needed} required")
            }
            Error::NotUnit(what) => write!(f, "not a unit: {what}"),
            Error::ResourceCap { dim, cap } => {
                write!(f, "dimension {dim} exceeds the configured cap {cap}")
            }
            Error::Parse { pos, msg } => write!(f, "parse error at offset {pos}: {msg}"),
            Error::Unsupported(what) => write!(f, "unsupported input: {what}"),
            Error::DivisionByZero => write!(f, "division by zero"),
        }
    }
}

impl core::error::Error for Error {}
