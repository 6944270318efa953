use thiserror::Error;

use crate::closure::Certificate;

pub type Result<T> = std::result::Result<T, Error>;

/// Domain errors. The variant name is what the CLI reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid affine type: {0}")]
    InvalidType(String),
    #[error("({i}, {j}) is not a positive root of {ty}")]
    NotARoot { ty: String, i: i64, j: i64 },
    #[error("roots are linearly dependent")]
    DependentRoots,
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("parity violation: {0} is odd")]
    ParityViolation(&'static str),
    #[error("type mismatch: {0} vs {1}")]
    TypeMismatch(String, String),
    #[error("set is not biclosed{}", .0.as_ref().map(|c| format!(": {c}")).unwrap_or_default())]
    NotBiclosed(Option<Certificate>),
    #[error("window of height {0} is too small to certify stability")]
    UnstableWindow(u32),
    #[error("asymptotic part is not stable at the height cutoff")]
    UnstableCutoff,
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("component mismatch: {0}")]
    ComponentMismatch(String),
    #[error("phi_prime selects block {0} without its negative")]
    UnpairedPhiPrime(usize),
    #[error("invalid face: {0}")]
    InvalidFace(String),
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("{0} is outside the order's domain")]
    OutOfDomain(i64),
    #[error("this D̃ biclosed set is not the inversion set of any total order")]
    DRepresentationRequired,
    #[error("invalid twist: {0}")]
    InvalidTwist(String),
    #[error("relation is not an order: {0}")]
    NotAnOrder(String),
    #[error("join is not fixed by the negation involution")]
    SigmaFixednessViolated,
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short variant name, used in CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidType(_) => "InvalidType",
            Error::NotARoot { .. } => "NotARoot",
            Error::DependentRoots => "DependentRoots",
            Error::InvalidWindow(_) => "InvalidWindow",
            Error::ParityViolation(_) => "ParityViolation",
            Error::TypeMismatch(..) => "TypeMismatch",
            Error::NotBiclosed(_) => "NotBiclosed",
            Error::UnstableWindow(_) => "UnstableWindow",
            Error::UnstableCutoff => "UnstableCutoff",
            Error::TooLarge(_) => "TooLarge",
            Error::ComponentMismatch(_) => "ComponentMismatch",
            Error::UnpairedPhiPrime(_) => "UnpairedPhiPrime",
            Error::InvalidFace(_) => "InvalidFace",
            Error::InvalidOrder(_) => "InvalidOrder",
            Error::OutOfDomain(_) => "OutOfDomain",
            Error::DRepresentationRequired => "DRepresentationRequired",
            Error::InvalidTwist(_) => "InvalidTwist",
            Error::NotAnOrder(_) => "NotAnOrder",
            Error::SigmaFixednessViolated => "SigmaFixednessViolated",
            Error::Parse(_) => "Parse",
        }
    }
}
