use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("truncation must be at least 1")]
    EmptyTruncation,

    #[error("grid size {m} too small for truncation {n}: need at least 2N+1 = {}", 2 * n + 1)]
    GridTooSmall { m: usize, n: usize },

    #[error("mode k = {k} outside 1..={n}: negative-k coefficients are implied by reality and k = 0 is fixed to zero mean")]
    InvalidMode { k: i64, n: usize },

    #[error("duplicate coefficient for mode k = {0}")]
    DuplicateMode(i64),

    #[error("reality asymmetry {rel:.3e} at mode k = {k} exceeds 1e-8")]
    RealityAsymmetry { k: i64, rel: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("kernel expression: {0}")]
    Expression(String),

    #[error("M_s series diverges: requires s > 1/2, got s = {0}")]
    DivergentSeries(f64),

    #[error("index out of admissible range: {0}")]
    IndexOutOfRange(String),

    #[error("kernel `{0}` has no known bound constant C")]
    UnknownBoundConstant(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("config parse error: {0}")]
    TomlParse(#[from] toml::de::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
