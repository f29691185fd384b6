//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter at index {index} has modulus {modulus}, not a strict contraction")]
    InvalidParameter { index: usize, modulus: f64 },

    #[error("value has modulus {modulus} outside the closed unit disk")]
    OutsideDisk { modulus: f64 },

    #[error("terminal entry at index {index} has modulus {modulus}, expected unimodular")]
    BadTerminal { index: usize, modulus: f64 },

    #[error("series is not a Schur function: step {index} produced modulus {modulus}")]
    NotASchurFunction { index: usize, modulus: f64 },

    #[error("series constant term must vanish, got modulus {modulus:.3e}")]
    NonzeroConstantTerm { modulus: f64 },

    #[error("division by series with near-zero constant term (modulus {modulus:.3e})")]
    SeriesDivision { modulus: f64 },

    #[error("moment sequence not normalized: m_0 = {re}{im:+}i")]
    NotNormalized { re: f64, im: f64 },

    #[error("moment Toeplitz section of size {size} is not positive (min eigenvalue {eig:.3e})")]
    IndefiniteMoments { size: usize, eig: f64 },

    #[error("Toeplitz section singular at order {order}: measure supported on too few points")]
    SingularToeplitz { order: usize },

    #[error("need moments m_0..m_{need}, only m_0..m_{have} available")]
    InsufficientMoments { need: usize, have: usize },

    #[error("matrix is not positive definite at size {size}")]
    NotPositiveDefinite { size: usize },

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("weight has near-zero total mass")]
    DegenerateWeight,

    #[error("grid of {grid} points too coarse for order {order}, need at least {need}")]
    GridTooCoarse {
        grid: usize,
        order: usize,
        need: usize,
    },

    #[error("series order {have} too small: operation needs order {need}")]
    OrderTooSmall { need: usize, have: usize },

    #[error("order {n} exceeds the brute-force cap {cap}; use the product route")]
    BruteForceCap { n: usize, cap: usize },

    #[error("factor matrix undefined: terminal unimodular parameter at index {index}")]
    SingularFactor { index: usize },

    #[error("quadruple consistency check failed: {0}")]
    Provenance(String),

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
