use thiserror::Error;

/// Errors raised by the library. Each variant maps to a CLI exit code via
/// [`Error::exit_code`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid discriminant {0}: must be negative and congruent to 0 or 1 mod 4")]
    InvalidDiscriminant(i64),

    #[error("discriminant mismatch: {0} vs {1}")]
    DiscriminantMismatch(i64, i64),

    #[error("form [{0}, {1}, {2}] is not a positive definite primitive form")]
    InvalidForm(i64, i64, i64),

    #[error("({d}|{p}) = -1, so no B with B^2 = D mod 4N exists")]
    NoSolution { d: i64, p: i64 },

    #[error("B = {b} does not satisfy B^2 = {d} mod {modulus}")]
    InvalidB { b: i64, d: i64, modulus: i64 },

    #[error("unsupported level: {0}")]
    UnsupportedLevel(String),

    #[error("integrality conditions violated: {0}")]
    ConditionsViolated(String),

    #[error("point is not in the upper half-plane")]
    NotInUpperHalfPlane,

    #[error("matrix [[{0}, {1}], [{2}, {3}]] is not unimodular")]
    NotUnimodular(i64, i64, i64, i64),

    #[error("precision exhausted after reaching {bits} bits")]
    PrecisionExhausted { bits: u32 },

    #[error("interpolation system is singular")]
    InterpolationSingular,

    #[error("J-degree {0} exceeds the supported maximum of 4")]
    DegreeTooLarge(usize),

    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,

    #[error("transformed polynomial is not integral")]
    NonIntegral,

    #[error("expected J-degree {expected}, found {found}")]
    WrongDegree { expected: usize, found: usize },

    #[error("malformed modular polynomial header: {0}")]
    MalformedHeader(String),

    #[error("cannot parse coefficient on line {line}: {reason}")]
    CoefficientParse { line: usize, reason: String },

    #[error("{0} is not an odd prime")]
    NotPrime(u64),

    #[error("prime {q} is not of the form (t^2 - D v^2)/4 for D = {d}")]
    NoTrace { d: i64, q: u64 },

    #[error("no F_q-rational root found: {0}")]
    NoRationalRoot(String),

    #[error("no rational J-invariant with the required group order")]
    NoRationalJRoot,

    #[error("singular curve")]
    SingularCurve,

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code for the CLI: 3 for precision exhaustion, 1 for I/O,
    /// 2 for every precondition failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PrecisionExhausted { .. } => 3,
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
