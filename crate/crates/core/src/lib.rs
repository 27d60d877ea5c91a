//! Exact verification engine for the Yangian of so₃ in its RTT presentation:
//! R-matrix checks, evaluation and tensor representations, the Gauss
//! decomposition of `T(u)`, and the map to Drinfeld currents.
//!
//! All arithmetic is over Q. Series are truncated in `u^{-1}` with explicit
//! validity orders; every identity is either compared coefficientwise or,
//! when it carries `1/(u-v-c)` factors, after clearing those denominators.

pub mod catalog;
pub mod config;
pub mod drinfeld;
pub mod exact;
pub mod gauss;
pub mod identity;
pub mod rep;
pub mod report;
pub mod rmatrix;
pub mod runner;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Exact(#[from] exact::ExactError),
    #[error("so_N needs N >= {min}, got {n}")]
    InvalidSize { n: usize, min: usize },
    #[error("unitarity product is not scalar: entry ({row},{col}) at u^-{order}")]
    NotScalar { order: i64, row: usize, col: usize },
    #[error("leading block of T(u) is not invertible")]
    NonInvertibleBlock,
    #[error("unknown series {0:?}")]
    UnknownSeries(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
