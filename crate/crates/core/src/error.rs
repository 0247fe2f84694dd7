use thiserror::Error;

use crate::optics::AngleSolution;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("invalid state vector: {0}")]
    InvalidState(String),
    #[error("Hamiltonian family {0} is not supported by this operation")]
    UnsupportedFamily(String),
    #[error("invalid Hamiltonian parameters: {0}")]
    InvalidParameters(String),
    #[error("metric operator undefined for a = {a} (requires 0 <= a < 1)")]
    MetricUndefined { a: f64 },
    #[error("state annihilated at t = {t}: evolved trace vanished")]
    StateAnnihilated { t: f64 },
    #[error("invalid time series: {0}")]
    InvalidSeries(String),
    #[error("no oscillation detected: {0}")]
    NoOscillation(String),
    #[error("invalid fit window: {0}")]
    InvalidWindow(String),
    #[error("target is not passive: spectral norm {norm} exceeds 1")]
    NotPassive { norm: f64 },
    #[error("target is not unitary: max |U^dagger U - I| = {deviation}")]
    NotUnitary { deviation: f64 },
    #[error("circuit compilation failed: best residual {}", .best.residual)]
    CompileFailed { best: Box<AngleSolution> },
    #[error("post-selection impossible: ancilla |u> block has norm {norm}")]
    PostselectionImpossible { norm: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("measurement set is not informationally complete")]
    NotInformationallyComplete,
    #[error("maximum-likelihood reconstruction failed: {0}")]
    MleFailed(String),
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidMatrix(_) => "InvalidMatrix",
            Error::DimMismatch { .. } => "DimMismatch",
            Error::InvalidDensity(_) => "InvalidDensity",
            Error::InvalidState(_) => "InvalidState",
            Error::UnsupportedFamily(_) => "UnsupportedFamily",
            Error::InvalidParameters(_) => "InvalidParameters",
            Error::MetricUndefined { .. } => "MetricUndefined",
            Error::StateAnnihilated { .. } => "StateAnnihilated",
            Error::InvalidSeries(_) => "InvalidSeries",
            Error::NoOscillation(_) => "NoOscillation",
            Error::InvalidWindow(_) => "InvalidWindow",
            Error::NotPassive { .. } => "NotPassive",
            Error::NotUnitary { .. } => "NotUnitary",
            Error::CompileFailed { .. } => "CompileFailed",
            Error::PostselectionImpossible { .. } => "PostselectionImpossible",
            Error::Unsupported(_) => "Unsupported",
            Error::NotInformationallyComplete => "NotInformationallyComplete",
            Error::MleFailed(_) => "MleFailed",
        }
    }
}
