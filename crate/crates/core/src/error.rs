use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field order {0} exceeds the supported maximum of 65536")]
    TooLarge(u64),
    #[error("no modulus table entry for GF({p}^{m})")]
    NoModulusTableEntry { p: u32, m: u32 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element {value} is out of range for GF({q})")]
    ElementOutOfRange { value: u64, q: u32 },
    #[error("matrix side {0} exceeds the supported maximum of 4096")]
    MatrixTooLarge(usize),
    #[error("dimension mismatch: {0}")]
    ShapeMismatch(String),
    #[error("the zero subspace is not a linear code")]
    ZeroCode,
    #[error("the dual of a full-length code is the zero subspace")]
    ZeroDual,
    #[error("code lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("codes live over different fields (q = {0} vs q = {1})")]
    FieldMismatch(u32, u32),
    #[error("enumeration budget exceeded: {needed} items requested, limit {limit}")]
    BudgetExceeded { needed: String, limit: u64 },
    #[error("input code is degenerate")]
    DegenerateInput,
    #[error("neither code is MDS")]
    NeitherMds,
    #[error("no closed form for dim C2 = {k2} with n = {n}, dim C1 = {k1}")]
    UncoveredCase { n: usize, k1: usize, k2: usize },
    #[error("argument out of range: {0}")]
    BadRange(String),
    #[error("rejection sampling exceeded {0} attempts")]
    RejectionBudgetExceeded(usize),
    #[error("matrix is not monomial")]
    NotMonomial,
    #[error("operation requires a binary code, got q = {0}")]
    NotBinary(u32),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
