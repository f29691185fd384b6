//! Dense complex matrix helpers: singular values, Hermitian eigenvalues,
//! Cholesky-reduced generalized eigenproblems, and dump formats.
//!
//! The accuracy contract for norms and extremal singular values is 1e-12;
//! the kernels behind it come from nalgebra.

use nalgebra::{Cholesky, DMatrix, Dyn, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut sv: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
    sv
}

pub fn sigma_min(m: &CMatrix) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

/// Spectral norm (largest singular value).
pub fn operator_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues of a Hermitian matrix, ascending. The input is symmetrized
/// first so callers can pass matrices that are Hermitian only up to roundoff.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
    vals
}

pub fn lambda_max_hermitian(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m).last().copied().unwrap_or(0.0)
}

pub fn lambda_min_hermitian(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m).first().copied().unwrap_or(0.0)
}

fn cholesky(b: &CMatrix) -> Result<Cholesky<Complex64, Dyn>> {
    Cholesky::new(hermitian_part(b)).ok_or(Error::NotPositiveDefinite { size: b.nrows() })
}

/// Largest eigenvalue of the pencil `A x = lambda B x` with `A` Hermitian and
/// `B` Hermitian positive definite, via `B = L L*` and the standard
/// Hermitian problem for `L^-1 A L^-*`.
pub fn generalized_lambda_max(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    let chol = cholesky(b)?;
    let l = chol.l();
    let li_a = l
        .solve_lower_triangular(&hermitian_part(a))
        .ok_or(Error::NotPositiveDefinite { size: b.nrows() })?;
    let reduced = l
        .solve_lower_triangular(&li_a.adjoint())
        .ok_or(Error::NotPositiveDefinite { size: b.nrows() })?
        .adjoint();
    Ok(lambda_max_hermitian(&reduced))
}

/// Nested-array JSON: `{"rows": r, "cols": c, "entries": [[[re,im],..],..]}`.
pub fn to_json(m: &CMatrix) -> String {
    let entries: Vec<Vec<[f64; 2]>> = (0..m.nrows())
        .map(|r| {
            (0..m.ncols())
                .map(|c| [m[(r, c)].re, m[(r, c)].im])
                .collect()
        })
        .collect();
    serde_json::json!({
        "rows": m.nrows(),
        "cols": m.ncols(),
        "entries": entries,
    })
    .to_string()
}

/// CSV dump, one matrix row per line; every cell contributes an `re,im` pair.
pub fn to_csv(m: &CMatrix) -> String {
    let mut out = String::new();
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|c| format!("{},{}", m[(r, c)].re, m[(r, c)].im))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
