use std::path::PathBuf;

/// Errors raised across the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot parse {what} {input:?}: offending token {token:?}")]
    Parse {
        what: &'static str,
        input: String,
        token: String,
    },

    #[error("invalid exception set: {0}")]
    InvalidExceptions(String),

    #[error("invalid weight family: {0}")]
    InvalidWeights(String),

    #[error("index {index} outside the valid range {lo}..={hi}")]
    OutOfRange { index: usize, lo: usize, hi: usize },

    #[error("exact division failed at n = {n}; the coefficient recurrence is broken")]
    InexactDivision { n: usize },

    #[error("n = {n} exceeds the brute-force bound {bound}")]
    TooLarge { n: usize, bound: usize },

    #[error("invalid support descriptor: {0}")]
    InvalidHead(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("unknown verification suite {0:?}")]
    UnknownSuite(String),

    #[error("time budget of {budget_secs}s exhausted after {completed} of {requested} ℓ values")]
    BudgetExceeded {
        budget_secs: f64,
        completed: usize,
        requested: usize,
        partial: Box<crate::harness::SignGrid>,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed json in {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(what: &'static str, input: &str, token: &str) -> Self {
        Error::Parse {
            what,
            input: input.to_string(),
            token: token.to_string(),
        }
    }
}
