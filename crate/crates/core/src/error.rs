use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("expansion error: {0}")]
    Expansion(String),
    #[error("non-integrable constant term: {0}")]
    NonIntegrableConstant(String),
    #[error("negative power of lambda survives at exponent {0}")]
    SurvivingNegativePower(i32),
    #[error("verification failure: {0}")]
    Verification(String),
    #[error("not of finite form: {0}")]
    NotOfFiniteForm(String),
    #[error("not certified: {0}")]
    NotCertified(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
