use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph size {n}: at least 2 nodes are required")]
    InvalidSize { n: usize },

    #[error("invalid bond {{{0}, {1}}}: {2}")]
    InvalidBond(usize, usize, &'static str),

    #[error("bond count {b} out of range 0..={b_max} for n = {n}")]
    BondCountOutOfRange { n: usize, b: usize, b_max: usize },

    #[error("node {node} out of range 1..={n}")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("invalid time grid: {0}")]
    InvalidGrid(&'static str),

    #[error("invalid ensemble configuration: {0}")]
    InvalidConfig(&'static str),

    #[error("eigensolver did not converge after {sweeps} sweeps (worst residual {residual:.3e})")]
    SolverConvergence { sweeps: usize, residual: f64 },

    #[error("characteristic polynomial overflowed 128-bit integers for n = {n}")]
    FingerprintOverflow { n: usize },

    #[error(
        "most degenerate eigenvalue is ambiguous: {count} groups share multiplicity {multiplicity}"
    )]
    AmbiguousDegeneracy { count: usize, multiplicity: usize },

    #[error("census capacity exceeded: n = {n} is above the cap {cap} (override required)")]
    Capacity { n: usize, cap: usize },

    #[error("work budget exceeded: {required} subsets requested, budget is {budget}{coverage}")]
    Budget {
        required: u128,
        budget: u128,
        coverage: String,
    },

    #[error("realization {index}: {source}")]
    Realization {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors raised by the numerical kernels rather than by bad input.
    pub fn is_numeric(&self) -> bool {
        match self {
            Error::SolverConvergence { .. } | Error::FingerprintOverflow { .. } => true,
            Error::Realization { source, .. } => source.is_numeric(),
            _ => false,
        }
    }

    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. } | Error::Budget { .. })
    }
}
