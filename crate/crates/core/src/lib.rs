//! Schur parameters of probability measures on the unit circle, and
//! numerical Helson-Szego diagnostics built on top of them.
//!
//! A probability measure `mu` on the circle, its Herglotz transform, the
//! associated Schur function `theta`, and the Schur parameter sequence
//! `gamma` determine one another. This crate moves along that quadruple
//! ([`transforms`]), builds the triangular matrix sections whose smallest
//! singular value witnesses boundedness of the Riesz projection in
//! `L^2(mu)` ([`lmatrix`]), and cross-checks the matrix criteria against
//! direct finite-section Riesz/conjugation oracles computed from moments
//! ([`diagnostics`]).
//!
//! The `hsz` binary exposes the pipeline as a CLI.

pub mod diagnostics;
pub mod error;
pub mod lmatrix;
pub mod matrix;
pub mod moments;
pub mod schur;
pub mod series;
pub mod transforms;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
pub use moments::MomentSequence;
pub use schur::SchurParams;
pub use series::PowerSeries;

/// Crate version, embedded in every report for reproducibility.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// FNV-1a digest of raw input bytes; reports embed it so a result can be
/// traced back to the exact input that produced it.
pub fn input_digest(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{hash:016x}")
}
