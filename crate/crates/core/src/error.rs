use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong in the estimation, transport and I/O layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (largest asymmetry {max_asymmetry:e})")]
    NonHermitian { max_asymmetry: f64 },

    #[error("matrix has a negative eigenvalue {0:e}")]
    NegativeEigenvalue(f64),

    #[error("matrix is singular after regularization")]
    SingularMatrix,

    #[error("source covariance is singular after regularization")]
    SingularSource,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("empty input")]
    EmptyInput,

    #[error("window of length {window} does not fit in a signal of {samples} samples")]
    SignalTooShort { window: usize, samples: usize },

    #[error("length {len} is not a multiple of the filter size {f}")]
    NotDivisible { len: usize, f: usize },

    #[error("domains do not share a channel count ({0:?})")]
    InconsistentChannels(Vec<usize>),

    #[error("channel mismatch: model has {expected} channels, signal has {found}")]
    ChannelMismatch { expected: usize, found: usize },

    #[error("domain spectrum is singular at bin {bin}")]
    SingularDomainSpectrum { bin: usize },

    #[error("filter has a non-negligible imaginary part (relative residue {residue:e})")]
    ComplexFilter { residue: f64 },

    #[error("filter of length {filter} is longer than the signal ({samples} samples)")]
    FilterLongerThanSignal { filter: usize, samples: usize },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("blur kernel length must be odd and positive, got {0}")]
    BadKernel(usize),

    #[error("domain {0} has no images")]
    EmptyDomain(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("bad magic bytes in signal file")]
    BadMagic,

    #[error("signal file is truncated")]
    TruncatedFile,

    #[error("signal contains non-finite values")]
    NonFinite,

    #[error("unsupported model format version {found} (this build reads version {supported})")]
    VersionUnsupported { found: u64, supported: u32 },

    #[error("model schema error: {0}")]
    Schema(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Stable machine-readable name of the variant, used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonHermitian { .. } => "NonHermitian",
            Error::NegativeEigenvalue(_) => "NegativeEigenvalue",
            Error::SingularMatrix => "SingularMatrix",
            Error::SingularSource => "SingularSource",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::EmptyInput => "EmptyInput",
            Error::SignalTooShort { .. } => "SignalTooShort",
            Error::NotDivisible { .. } => "NotDivisible",
            Error::InconsistentChannels(_) => "InconsistentChannels",
            Error::ChannelMismatch { .. } => "ChannelMismatch",
            Error::SingularDomainSpectrum { .. } => "SingularDomainSpectrum",
            Error::ComplexFilter { .. } => "ComplexFilter",
            Error::FilterLongerThanSignal { .. } => "FilterLongerThanSignal",
            Error::InvalidSpectrum(_) => "InvalidSpectrum",
            Error::InvalidSignal(_) => "InvalidSignal",
            Error::BadKernel(_) => "BadKernel",
            Error::EmptyDomain(_) => "EmptyDomain",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::BadMagic => "BadMagic",
            Error::TruncatedFile => "TruncatedFile",
            Error::NonFinite => "NonFinite",
            Error::VersionUnsupported { .. } => "VersionUnsupported",
            Error::Schema(_) => "SchemaError",
            Error::Io { .. } => "Io",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
