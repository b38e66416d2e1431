use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coin{} is not unitary (residual {residual:.3e})", at_site(.site))]
    NotUnitary { site: Option<i64>, residual: f64 },

    #[error("invalid walk: {0}")]
    InvalidSpec(String),

    #[error("finite window matrix needs a periodic extension")]
    UnsupportedBoundary,

    #[error("expected a walk of class C1, got {0}")]
    WrongClass(String),

    #[error("window mismatch: walk covers [{walk_min}, {walk_max}], family covers [{family_min}, {family_max}]")]
    WindowMismatch {
        walk_min: i64,
        walk_max: i64,
        family_min: i64,
        family_max: i64,
    },

    #[error("site unitaries do not repeat with period {period} (first mismatch at site {site})")]
    PeriodMismatch { period: usize, site: i64 },

    #[error("no constrained site (r_n > 0) in the walk")]
    EmptyLambda,

    #[error("amplitude left the window at site {site}")]
    SupportEscapedWindow { site: i64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn at_site(site: &Option<i64>) -> String {
    site.map(|n| format!(" at site {n}")).unwrap_or_default()
}
