use alloc::string::String;
use core::fmt;

/// Which admissibility condition a pair violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extremal {
    AlphaNotParry,
    MirrorBetaNotParry,
    AlphaShiftBelowBeta,
    BetaShiftAboveAlpha,
}

impl Extremal {
    pub fn as_str(self) -> &'static str {
        match self {
            Extremal::AlphaNotParry => "alpha is not a Parry sequence",
            Extremal::MirrorBetaNotParry => "mirror of beta is not a Parry sequence",
            Extremal::AlphaShiftBelowBeta => "a shift of alpha lies below beta",
            Extremal::BetaShiftAboveAlpha => "a shift of beta lies above alpha",
        }
    }
}

impl Extremal {
    /// Variant name, stable for machine-readable output.
    pub fn name(self) -> &'static str {
        match self {
            Extremal::AlphaNotParry => "AlphaNotParry",
            Extremal::MirrorBetaNotParry => "MirrorBetaNotParry",
            Extremal::AlphaShiftBelowBeta => "AlphaShiftBelowBeta",
            Extremal::BetaShiftAboveAlpha => "BetaShiftAboveAlpha",
        }
    }
}

impl fmt::Display for Extremal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("cannot parse {token:?}: {reason}")]
    Parse { token: String, reason: &'static str },
    #[error("period must be non-empty")]
    EmptyPeriod,
    #[error("rational must lie in [0, 1]")]
    OutOfRange,
    #[error("ratio must be p/q with 0 < p < q in lowest terms")]
    InvalidRatio,
    #[error("substitution images must start with 0 and 1 respectively")]
    InvalidSubstitution,
    #[error("word has no rotation starting with both symbols")]
    NoSuchRotation,
    #[error("not applicable: {0}")]
    NotApplicable(&'static str),
    #[error("pair is not admissible: {0}")]
    NotAdmissible(Extremal),
    #[error("decoding failed at position {position}")]
    DecodeFailure { position: usize },
    #[error("sequence must start with 1")]
    BadLeadingSymbol,
    #[error("argument outside domain: {0}")]
    DomainError(&'static str),
    #[error("no component with id {0}")]
    NoSuchComponent(usize),
    #[error("boxes live on different levels")]
    StrataMismatch,
    #[error("renormalisation tower too deep for the computed entropy")]
    InfiniteRenormalisationSuspected,
    #[error("hole endpoints out of order")]
    EndpointOrder,
    #[error("hole shape is not supported")]
    UnsupportedHole,
    #[error("invalid associated pair: {0}")]
    InvalidPair(&'static str),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "Parse",
            Error::EmptyPeriod => "EmptyPeriod",
            Error::OutOfRange => "OutOfRange",
            Error::InvalidRatio => "InvalidRatio",
            Error::InvalidSubstitution => "InvalidSubstitution",
            Error::NoSuchRotation => "NoSuchRotation",
            Error::NotApplicable(_) => "NotApplicable",
            Error::NotAdmissible(_) => "NotAdmissible",
            Error::DecodeFailure { .. } => "DecodeFailure",
            Error::BadLeadingSymbol => "BadLeadingSymbol",
            Error::DomainError(_) => "DomainError",
            Error::NoSuchComponent(_) => "NoSuchComponent",
            Error::StrataMismatch => "StrataMismatch",
            Error::InfiniteRenormalisationSuspected => "InfiniteRenormalisationSuspected",
            Error::EndpointOrder => "EndpointOrder",
            Error::UnsupportedHole => "UnsupportedHole",
            Error::InvalidPair(_) => "InvalidPair",
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
