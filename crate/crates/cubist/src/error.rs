use thiserror::Error;

/// Errors shared by every module. Domain errors map to process exit code 1;
/// flag/usage problems are handled by the CLI layer and exit 2.
#[derive(Debug, Error)]
pub enum Error {
    /// Text-grammar or document syntax problem, with a byte offset into the input.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// A term of the input polynomial is not homogeneous of degree 3.
    #[error("term at byte {pos} has degree {degree}, every term must have degree 3")]
    Degree { pos: usize, degree: u32 },

    /// Variable index outside 1..=n.
    #[error("variable x{index} out of range (form has {n} variables)")]
    VarIndex { index: usize, n: usize },

    #[error("expected a vector of length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation undefined for the zero form")]
    ZeroForm,

    /// Enumeration would need more points than the configured budget allows.
    #[error("budget exceeded: {required} points required, budget is {budget}")]
    Budget { required: u128, budget: u128 },

    #[error("a = {a} is not coprime to q = {q}; use the raw sum over all residues instead")]
    NonCoprime { a: u64, q: u64 },

    #[error("{p} is not prime")]
    NotPrime { p: u64 },

    /// Exponent-pipeline functions are defined only for n >= 14.
    #[error("n = {n} out of range: this quantity is defined for n >= {min}")]
    SmallN { n: u32, min: u32 },

    /// A numeric argument fell outside its documented open/closed interval.
    #[error("{what} = {value} outside {interval}")]
    Interval {
        what: &'static str,
        value: String,
        interval: String,
    },

    #[error("search strategy not applicable: {0}")]
    Strategy(String),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
