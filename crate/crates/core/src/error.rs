use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failures of the numerical pipelines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operand shapes do not fit the operation.
    DimensionMismatch { expected: (usize, usize), found: (usize, usize) },
    /// Estimated condition number exceeds `1/tol` (or an exact zero pivot).
    SingularMatrix { condition: f64 },
    DimensionTooLarge { n: usize, max: usize },
    NonConvergence { iterations: usize },
    BadCouplingLength { expected: usize, found: usize },
    /// Some `ξ_n(t)` of the path parametrisation left `[0, 1]`.
    PathOutOfRange { index: usize, xi: f64 },
    NotSingleBlock { ranks: alloc::vec::Vec<usize> },
    ChainBreakdown { step: usize, residual: f64 },
    SingularQ,
    UnsupportedK(usize),
    DegenerateGammas,
    SingularSystem,
    AllOrdersVanish,
    NoSignChange,
    NotPhysical,
    InvalidInput(&'static str),
}

impl Error {
    /// Stable name used in machine-readable reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::SingularMatrix { .. } => "SingularMatrix",
            Error::DimensionTooLarge { .. } => "DimensionTooLarge",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::BadCouplingLength { .. } => "BadCouplingLength",
            Error::PathOutOfRange { .. } => "PathOutOfRange",
            Error::NotSingleBlock { .. } => "NotSingleBlock",
            Error::ChainBreakdown { .. } => "ChainBreakdown",
            Error::SingularQ => "SingularQ",
            Error::UnsupportedK(_) => "UnsupportedK",
            Error::DegenerateGammas => "DegenerateGammas",
            Error::SingularSystem => "SingularSystem",
            Error::AllOrdersVanish => "AllOrdersVanish",
            Error::NoSignChange => "NoSignChange",
            Error::NotPhysical => "NotPhysical",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => write!(
                f,
                "dimension mismatch: expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            Error::SingularMatrix { condition } => {
                write!(f, "matrix is singular to working precision (condition ~ {condition:e})")
            }
            Error::DimensionTooLarge { n, max } => write!(f, "dimension {n} exceeds the supported maximum {max}"),
            Error::NonConvergence { iterations } => write!(f, "no convergence after {iterations} iterations"),
            Error::BadCouplingLength { expected, found } => {
                write!(f, "expected {expected} couplings, found {found}")
            }
            Error::PathOutOfRange { index, xi } => {
                write!(f, "path parameter xi_{index} = {xi} lies outside [0, 1]")
            }
            Error::NotSingleBlock { ranks } => {
                write!(f, "eigenvalue does not carry a single Jordan block (rank sequence {ranks:?})")
            }
            Error::ChainBreakdown { step, residual } => {
                write!(f, "Jordan chain equation {step} is inconsistent (residual {residual:e})")
            }
            Error::SingularQ => f.write_str("transition matrix is singular"),
            Error::UnsupportedK(k) => write!(f, "no printed fixture for K = {k}"),
            Error::DegenerateGammas => f.write_str("gamma1 == gamma2 makes the transition matrix singular"),
            Error::SingularSystem => f.write_str("(L + Z) is singular at this epsilon"),
            Error::AllOrdersVanish => f.write_str("secular polynomial is exactly eps^K"),
            Error::NoSignChange => f.write_str("physicality does not change along the ray"),
            Error::NotPhysical => f.write_str("spectrum is not real and simple"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
