use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("IllegalDemotion: {0}")]
    IllegalDemotion(String),
    #[error("ExactInfiniteProduct: infinite q-Pochhammer requested in exact mode")]
    ExactInfiniteProduct,
    #[error("ExactNonterminating: exact mode needs a terminating series")]
    ExactNonterminating,
    #[error("IndeterminateProduct: pole times exact zero")]
    IndeterminateProduct,
    #[error("PoleEncountered: {0}")]
    PoleEncountered(String),
    #[error("InvalidBase: {0}")]
    InvalidBase(String),
    #[error("NonConvergent: stopping rule unmet after {0} terms")]
    NonConvergent(usize),
    #[error("PoleInTerm: {0}")]
    PoleInTerm(String),
    #[error("DivergentDomain: {0}")]
    DivergentDomain(String),
    #[error("SigmaDegenerate: {0}")]
    SigmaDegenerate(String),
    #[error("NoContraction: ratio bound {0} is not below 1")]
    NoContraction(f64),
    #[error("CertificationTooTight: {0}")]
    CertificationTooTight(String),
    #[error("SymbolMissing: {0}")]
    SymbolMissing(String),
    #[error("DegeneratePoint: {0}")]
    DegeneratePoint(String),
    #[error("UnknownIdentity: {0}")]
    UnknownIdentity(String),
    #[error("UnknownMap: {0}")]
    UnknownMap(String),
    #[error("BadShape: {0}")]
    BadShape(String),
    #[error("SamplingExhausted: {0}")]
    SamplingExhausted(String),
    #[error("Parse: {0}")]
    Parse(String),
    #[error("Io: {0}")]
    Io(String),
}

impl Error {
    /// Short variant name used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::IllegalDemotion(_) => "IllegalDemotion",
            Error::ExactInfiniteProduct => "ExactInfiniteProduct",
            Error::ExactNonterminating => "ExactNonterminating",
            Error::IndeterminateProduct => "IndeterminateProduct",
            Error::PoleEncountered(_) => "PoleEncountered",
            Error::InvalidBase(_) => "InvalidBase",
            Error::NonConvergent(_) => "NonConvergent",
            Error::PoleInTerm(_) => "PoleInTerm",
            Error::DivergentDomain(_) => "DivergentDomain",
            Error::SigmaDegenerate(_) => "SigmaDegenerate",
            Error::NoContraction(_) => "NoContraction",
            Error::CertificationTooTight(_) => "CertificationTooTight",
            Error::SymbolMissing(_) => "SymbolMissing",
            Error::DegeneratePoint(_) => "DegeneratePoint",
            Error::UnknownIdentity(_) => "UnknownIdentity",
            Error::UnknownMap(_) => "UnknownMap",
            Error::BadShape(_) => "BadShape",
            Error::SamplingExhausted(_) => "SamplingExhausted",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
