use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("relation ideal is not admissible: paths of length {cap} survive (cap {cap})")]
    NonAdmissible { cap: usize },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("operands live over different algebras")]
    AlgebraMismatch,
    #[error("nakayama-all family requested on a non-Nakayama algebra")]
    NotNakayama,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("term length of the zero complex is undefined")]
    ZeroComplex,
    #[error("complex term in degree {0} is not F-projective")]
    TermNotFProjective(i64),
    #[error("tilting complex is not self-orthogonal")]
    NotSelfOrthogonal,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Machine-readable error code used in JSON reports and exit handling.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonAdmissible { .. } => "NonAdmissible",
            Error::InvalidPath(_) => "InvalidPath",
            Error::AlgebraMismatch => "AlgebraMismatch",
            Error::NotNakayama => "NotNakayama",
            Error::Parse { .. } => "ParseError",
            Error::UnknownVertex(_) => "UnknownVertex",
            Error::ZeroComplex => "ZeroComplex",
            Error::TermNotFProjective(_) => "TermNotFProjective",
            Error::NotSelfOrthogonal => "NotSelfOrthogonal",
            Error::Io(_) => "IoError",
            Error::Invalid(_) => "InvalidInput",
        }
    }
}
