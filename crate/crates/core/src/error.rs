use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: half extent must be at least 1, got {0}")]
    InvalidLattice(usize),

    #[error("coin state is not normalised: norm {norm} (expected 1 within {tol:e})")]
    Normalization { norm: f64, tol: f64 },

    #[error("operator is not unitary: max |M†M - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("player must be 1, 2 or 3, got {0}")]
    InvalidPlayer(usize),

    #[error("axis must be 1, 2 or 3, got {0}")]
    InvalidAxis(usize),

    #[error(
        "boundary overflow: nonzero amplitude at coin {coin}, position {position:?} \
         touches the lattice edge |x| = {half_extent}"
    )]
    BoundaryOverflow {
        coin: usize,
        position: [i64; 3],
        half_extent: usize,
    },

    #[error("dense oracle refused: dimension {dim} exceeds the limit {limit}")]
    OracleTooLarge { dim: usize, limit: usize },

    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("payoff series is empty")]
    EmptySeries,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
