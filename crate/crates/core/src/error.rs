use thiserror::Error;

use crate::parabolic::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Hurwitz zeta has a pole at s = 1")]
    PoleAtOne,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no convergence: {what} (reached {reached:.3e}, wanted {wanted:.3e})")]
    NonConvergence {
        what: &'static str,
        reached: f64,
        wanted: f64,
    },

    #[error("graded classes truncated at different degrees ({0} vs {1})")]
    TruncationMismatch(u32, u32),

    #[error("degree-0 part contains symbolic terms: {0}")]
    SymbolicResidue(String),

    #[error("negative moduli dimension {0}")]
    NegativeDimension(i64),

    #[error("parabolic degree is {0}, not zero")]
    NotDegreeZero(String),

    #[error("a parabolic weight is zero at puncture {puncture}")]
    ZeroWeightPresent { puncture: usize },

    #[error("offset 0 gives a zero mode")]
    ZeroMode,

    #[error("density has an undeclared divergence at 0 (x*remainder = {0:.3e})")]
    UndeclaredDivergence(f64),

    #[error("design matrix is ill-conditioned (condition number {0:.3e})")]
    IllConditioned(f64),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("invalid synthetic kernel: {0}")]
    InvalidKernel(String),

    #[error("invalid parabolic data: {}", format_violations(.0))]
    InvalidData(Vec<Violation>),

    #[error("puncture index {index} out of range ({count} punctures)")]
    PunctureOutOfRange { index: usize, count: usize },
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

impl Error {
    /// Variant name, used in machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::PoleAtOne => "PoleAtOne",
            Error::Domain(_) => "DomainError",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::TruncationMismatch(..) => "TruncationMismatch",
            Error::SymbolicResidue(_) => "SymbolicResidue",
            Error::NegativeDimension(_) => "NegativeDimension",
            Error::NotDegreeZero(_) => "NotDegreeZero",
            Error::ZeroWeightPresent { .. } => "ZeroWeightPresent",
            Error::ZeroMode => "ZeroMode",
            Error::UndeclaredDivergence(_) => "UndeclaredDivergence",
            Error::IllConditioned(_) => "IllConditioned",
            Error::InsufficientSamples(_) => "InsufficientSamples",
            Error::InvalidKernel(_) => "InvalidKernel",
            Error::InvalidData(_) => "InvalidData",
            Error::PunctureOutOfRange { .. } => "PunctureOutOfRange",
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence { .. } => 3,
            Error::InvalidData(_) | Error::PunctureOutOfRange { .. } => 2,
            _ => 4,
        }
    }
}
