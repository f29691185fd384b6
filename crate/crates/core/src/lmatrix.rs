//! The triangular matrix sections attached to a parameter sequence, built by
//! two independent routes, and the identities that tie them together.
//!
//! Route one evaluates the scalar coefficients `L_n` by direct enumeration
//! of integer compositions; route two multiplies the one-step factor
//! matrices along coshifts of the sequence. Their agreement is the central
//! self-test of the crate. All constructions read the sequence from index 1;
//! `gamma_0` never enters.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{self, CMatrix};
use crate::schur::{defect, SchurParams};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Direct evaluation of `L_n` is exponential in `n`; it exists as an oracle
/// and refuses to run past this order.
pub const BRUTE_FORCE_CAP: usize = 10;

/// Scalar coefficient `L_n(gamma)`: the alternating sum over ordered
/// compositions `s_1 + .. + s_r = n` of nested sums of products
/// `gamma_{j_i} conj(gamma_{j_i + s_i})` with `j_1 >= n - s_1` and
/// `j_{i+1} >= j_i - s_{i+1}`. `L_0 = 1`.
pub fn l_scalar(gamma: &SchurParams, n: usize) -> Result<Complex64> {
    if n == 0 {
        return Ok(ONE);
    }
    if n > BRUTE_FORCE_CAP {
        return Err(Error::BruteForceCap {
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let support = gamma.support();
    let mut total = ZERO;
    let mut composition = Vec::new();
    compositions(n, &mut composition, &mut |s| {
        total += composition_sum(gamma, support, n, s);
    });
    Ok(total)
}

fn compositions(rest: usize, prefix: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if rest == 0 {
        visit(prefix);
        return;
    }
    for first in 1..=rest {
        prefix.push(first);
        compositions(rest - first, prefix, visit);
        prefix.pop();
    }
}

/// One composition's nested sum, evaluated bottom-up: `S_i(l)` sums
/// `gamma_j conj(gamma_{j+s_i}) S_{i+1}(j - s_{i+1})` over `j >= l`.
fn composition_sum(gamma: &SchurParams, support: usize, n: usize, s: &[usize]) -> Complex64 {
    let r = s.len();
    let sign = if r.is_multiple_of(2) { ONE } else { -ONE };
    let width = support + 1;
    let mut inner = vec![ONE; width + 1]; // S_{r+1} = 1 everywhere
    for i in (0..r).rev() {
        let mut table = vec![ZERO; width + 1];
        if support > s[i] {
            // highest j with both gamma_j and gamma_{j+s_i} inside the support
            let hi = support - 1 - s[i];
            for l in (0..=hi).rev() {
                let next_lower = if i + 1 < r {
                    l.saturating_sub(s[i + 1])
                } else {
                    0
                };
                let term = gamma.get(l) * gamma.get(l + s[i]).conj() * inner[next_lower];
                table[l] = table[l + 1] + term;
            }
        }
        inner = table;
    }
    let lower = n - s[0];
    sign * inner.get(lower).copied().unwrap_or(ZERO)
}

/// Factor matrix of the one-step factorization: diagonal `D_{gamma_k}`,
/// strictly lower entry `(k, i)` equal to
/// `-gamma_i (prod_{j=i+1}^{k-1} D_{gamma_j}) conj(gamma_k)`, indices read
/// from `gamma_1`.
pub fn factor_matrix(gamma: &SchurParams, n: usize) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::Inconsistent("section size must be positive".into()));
    }
    if let Some(t) = gamma.terminal_index() {
        if (1..=n).contains(&t) {
            return Err(Error::SingularFactor { index: t });
        }
    }
    let mut m = CMatrix::zeros(n, n);
    let defects: Vec<f64> = (0..=n)
        .map(|k| defect(gamma.get(k)))
        .collect::<Result<_>>()?;
    for k in 1..=n {
        m[(k - 1, k - 1)] = Complex64::new(defects[k], 0.0);
        let gk_conj = gamma.get(k).conj();
        let mut prod = 1.0;
        for i in (1..k).rev() {
            m[(k - 1, i - 1)] = -gamma.get(i) * prod * gk_conj;
            prod *= defects[i];
        }
    }
    Ok(m)
}

/// Column vector with component `k` equal to
/// `conj(gamma_k) prod_{j=1}^{k-1} D_{gamma_j}`.
pub fn eta_vector(gamma: &SchurParams, n: usize) -> CMatrix {
    let mut eta = CMatrix::zeros(n, 1);
    let mut prod = 1.0;
    for k in 1..=n {
        eta[(k - 1, 0)] = gamma.get(k).conj() * prod;
        prod *= crate::schur::defect_clamped(gamma.get(k));
    }
    eta
}

/// Triangular section by the multiplicative route: the left-to-right product
/// of factor matrices along coshifts, which reaches the identity factor once
/// the shift clears the support.
pub fn l_matrix_product(gamma: &SchurParams, n: usize) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::Inconsistent("section size must be positive".into()));
    }
    let mut product = matrix::identity(n);
    let support = gamma.support();
    for k in 0..support {
        product *= factor_matrix(&gamma.coshift(k), n)?;
    }
    Ok(product)
}

/// Triangular section by direct composition sums: entry `(r, c)` for
/// `c <= r` (1-based) is `Pi_r L_{r-c}(W^c gamma)`. Refuses sizes past the
/// brute-force cap; this route is the oracle for the product route.
pub fn l_matrix_direct(gamma: &SchurParams, n: usize) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::Inconsistent("section size must be positive".into()));
    }
    if n > BRUTE_FORCE_CAP + 1 {
        return Err(Error::BruteForceCap {
            n: n - 1,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let mut m = CMatrix::zeros(n, n);
    for r in 1..=n {
        let tail = gamma.tail_product(r).value;
        for c in 1..=r {
            let coeff = l_scalar(&gamma.coshift(c), r - c)?;
            m[(r - 1, c - 1)] = tail * coeff;
        }
    }
    Ok(m)
}

/// The defect operator `A = I - L L*` of a triangular section together with
/// its rank-one series expansion.
#[derive(Clone, Debug)]
pub struct DefectSeries {
    pub a: CMatrix,
    /// `sum_{j < terms} xi_j xi_j*`
    pub partial: CMatrix,
    pub xi: Vec<CMatrix>,
    /// Operator norm of `A - partial`; exactly zero (to roundoff) once
    /// `terms` exceeds the support.
    pub residual: f64,
}

/// Expands `I - L L*` into the series of rank-one terms
/// `xi_j = (prod_{k<j} M(W^k gamma)) eta(W^j gamma)`, with the product taken
/// left to right.
pub fn defect_series(gamma: &SchurParams, n: usize, terms: usize) -> Result<DefectSeries> {
    let terms = terms.max(1);
    let l = l_matrix_product(gamma, n)?;
    let a = matrix::hermitian_part(&(matrix::identity(n) - &l * l.adjoint()));
    let mut xi = Vec::with_capacity(terms);
    let mut partial = CMatrix::zeros(n, n);
    let mut prefix = matrix::identity(n);
    for j in 0..terms {
        let vector = &prefix * eta_vector(&gamma.coshift(j), n);
        partial += &vector * vector.adjoint();
        xi.push(vector);
        prefix *= factor_matrix(&gamma.coshift(j), n)?;
    }
    let residual = matrix::operator_norm(&(&a - &partial));
    Ok(DefectSeries {
        a,
        partial,
        xi,
        residual,
    })
}

/// Residuals of the structural identities a triangular section must satisfy.
#[derive(Clone, Copy, Debug)]
pub struct IdentityResiduals {
    /// `|| L(gamma) - M(gamma) L(W gamma) ||`
    pub factorization: f64,
    /// `|| I - M M* - eta eta* ||`
    pub rank_one: f64,
    /// `max(0, ||L|| - 1)`
    pub contractivity: f64,
    /// `| 1 - ||eta||^2 - prod (1 - |gamma_j|^2) |`
    pub eigen: f64,
    /// `max(0, prod D_{gamma_j} - sigma_min(M))`
    pub sigma_bound: f64,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        self.factorization
            .max(self.rank_one)
            .max(self.contractivity)
            .max(self.eigen)
            .max(self.sigma_bound)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

pub fn identity_suite(gamma: &SchurParams, n: usize) -> Result<IdentityResiduals> {
    let l = l_matrix_product(gamma, n)?;
    let l_shift = l_matrix_product(&gamma.coshift(1), n)?;
    let m = factor_matrix(gamma, n)?;
    let eta = eta_vector(gamma, n);

    let factorization = matrix::operator_norm(&(&l - &m * &l_shift));
    let rank_one =
        matrix::operator_norm(&(matrix::identity(n) - &m * m.adjoint() - &eta * eta.adjoint()));
    let contractivity = (matrix::operator_norm(&l) - 1.0).max(0.0);

    let eta_norm_sq: f64 = (0..n).map(|k| eta[(k, 0)].norm_sqr()).sum();
    let moduli_product =
        crate::schur::stable_product((1..=n).map(|j| (1.0 - gamma.get(j).norm_sqr()).max(0.0)));
    let eigen = (1.0 - eta_norm_sq - moduli_product).abs();

    let defect_product =
        crate::schur::stable_product((1..=n).map(|j| crate::schur::defect_clamped(gamma.get(j))));
    let sigma_bound = (defect_product - matrix::sigma_min(&m)).max(0.0);

    Ok(IdentityResiduals {
        factorization,
        rank_one,
        contractivity,
        eigen,
        sigma_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Fully naive enumerator for `L_n`: depth-first over index tuples, no
    /// tables. Independent of the production path; only usable for tiny
    /// supports.
    fn l_scalar_naive(gamma: &SchurParams, n: usize) -> Complex64 {
        fn walk(
            gamma: &SchurParams,
            support: usize,
            s: &[usize],
            level: usize,
            lower: usize,
            acc: Complex64,
            total: &mut Complex64,
        ) {
            if level == s.len() {
                *total += acc;
                return;
            }
            let step = s[level];
            if support < step + 1 {
                return;
            }
            for j in lower..=(support - 1 - step) {
                let term = gamma.get(j) * gamma.get(j + step).conj();
                let next_lower = if level + 1 < s.len() {
                    j.saturating_sub(s[level + 1])
                } else {
                    0
                };
                walk(gamma, support, s, level + 1, next_lower, acc * term, total);
            }
        }
        if n == 0 {
            return ONE;
        }
        let mut total = ZERO;
        let mut prefix = Vec::new();
        compositions(n, &mut prefix, &mut |s| {
            let sign = if s.len() % 2 == 0 { ONE } else { -ONE };
            let mut comp_total = ZERO;
            walk(gamma, gamma.support(), s, 0, n - s[0], ONE, &mut comp_total);
            total += sign * comp_total;
        });
        total
    }

    #[test]
    fn l_scalar_hand_values() {
        let any = SchurParams::regular_real(&[0.4, -0.2]).unwrap();
        assert_eq!(l_scalar(&any, 0).unwrap(), ONE);

        let g = SchurParams::regular_real(&[0.5, 0.5]).unwrap();
        assert!((l_scalar(&g, 1).unwrap() - c(-0.25, 0.0)).norm() < 1e-15);

        let g = SchurParams::regular_real(&[0.5, 0.5, 0.5]).unwrap();
        assert!((l_scalar(&g, 2).unwrap() - c(-0.125, 0.0)).norm() < 1e-15);

        assert!(matches!(
            l_scalar(&g, BRUTE_FORCE_CAP + 1),
            Err(Error::BruteForceCap { .. })
        ));
    }

    #[test]
    fn l_scalar_matches_naive_enumeration() {
        let g = SchurParams::regular(vec![
            c(0.3, 0.1),
            c(-0.2, 0.4),
            c(0.5, 0.0),
            c(0.0, -0.3),
            c(0.15, 0.2),
        ])
        .unwrap();
        for n in 0..=5 {
            let fast = l_scalar(&g, n).unwrap();
            let slow = l_scalar_naive(&g, n);
            assert!((fast - slow).norm() < 1e-13, "n={n}: {fast} vs {slow}");
        }
    }

    #[test]
    fn factor_matrix_hand_values() {
        let g = SchurParams::regular_real(&[0.0, 0.6, 0.8]).unwrap();
        let m = factor_matrix(&g, 2).unwrap();
        assert!((m[(0, 0)] - c(0.8, 0.0)).norm() < 1e-15);
        assert!(m[(0, 1)].norm() < 1e-15);
        assert!((m[(1, 0)] - c(-0.48, 0.0)).norm() < 1e-15);
        assert!((m[(1, 1)] - c(0.6, 0.0)).norm() < 1e-15);

        assert_eq!(
            factor_matrix(&SchurParams::zero(), 4).unwrap(),
            matrix::identity(4)
        );
    }

    #[test]
    fn factor_matrix_rejects_terminal_in_range() {
        let g = SchurParams::new(vec![c(0.3, 0.0), c(1.0, 0.0)], true).unwrap();
        assert!(matches!(
            factor_matrix(&g, 2),
            Err(Error::SingularFactor { index: 1 })
        ));
    }

    #[test]
    fn eta_vector_hand_values() {
        let g = SchurParams::regular_real(&[0.0, 0.6, 0.8]).unwrap();
        let eta = eta_vector(&g, 2);
        assert!((eta[(0, 0)] - c(0.6, 0.0)).norm() < 1e-15);
        assert!((eta[(1, 0)] - c(0.64, 0.0)).norm() < 1e-15);
        let norm_sq: f64 = (0..2).map(|k| eta[(k, 0)].norm_sqr()).sum();
        assert!((1.0 - norm_sq - 0.48 * 0.48).abs() < 1e-15);
    }

    #[test]
    fn single_entry_gives_diagonal_section() {
        let g = SchurParams::regular_real(&[0.0, 0.6]).unwrap();
        let l = l_matrix_product(&g, 4).unwrap();
        let mut expect = matrix::identity(4);
        expect[(0, 0)] = c(0.8, 0.0);
        assert!(matrix::operator_norm(&(&l - &expect)) < 1e-14);

        let d = l_matrix_direct(&g, 4).unwrap();
        assert!(matrix::operator_norm(&(&d - &expect)) < 1e-14);
    }

    #[test]
    fn direct_equals_product_on_random_sequences() {
        let entries = [
            c(0.31, -0.12),
            c(-0.22, 0.41),
            c(0.52, 0.05),
            c(0.02, -0.33),
            c(0.11, 0.21),
            c(-0.40, 0.0),
        ];
        let g = SchurParams::regular(entries.to_vec()).unwrap();
        for n in 1..=6 {
            let a = l_matrix_direct(&g, n).unwrap();
            let b = l_matrix_product(&g, n).unwrap();
            assert!(matrix::operator_norm(&(&a - &b)) < 1e-12, "n={n}");
        }
    }

    #[test]
    fn diagonal_is_tail_products() {
        let g = SchurParams::regular_real(&[0.1, 0.3, -0.5, 0.2]).unwrap();
        let l = l_matrix_product(&g, 5).unwrap();
        for r in 1..=5 {
            let pi = g.tail_product(r).value;
            assert!((l[(r - 1, r - 1)] - c(pi, 0.0)).norm() < 1e-14);
            for col in r + 1..=5 {
                assert_eq!(l[(r - 1, col - 1)], ZERO);
            }
        }
    }

    #[test]
    fn section_of_far_coshift_is_identity() {
        let g = SchurParams::regular_real(&[0.1, 0.3, -0.5]).unwrap();
        let l = l_matrix_product(&g.coshift(3), 4).unwrap();
        assert_eq!(l, matrix::identity(4));
    }

    #[test]
    fn defect_series_single_entry() {
        let g = SchurParams::regular_real(&[0.0, 0.6]).unwrap();
        let ds = defect_series(&g, 4, 3).unwrap();
        assert!((ds.a[(0, 0)] - c(0.36, 0.0)).norm() < 1e-14);
        assert!(ds.residual < 1e-14);
        assert!((ds.xi[0][(0, 0)] - c(0.6, 0.0)).norm() < 1e-14);
        for v in &ds.xi[1..] {
            assert!(matrix::operator_norm(v) < 1e-14);
        }
    }

    #[test]
    fn defect_series_residual_drops_monotonically() {
        let g = SchurParams::regular(vec![c(0.3, 0.1), c(-0.2, 0.4), c(0.5, 0.0), c(0.1, -0.3)])
            .unwrap();
        let mut last = f64::INFINITY;
        for terms in 1..=5 {
            let ds = defect_series(&g, 6, terms).unwrap();
            assert!(ds.residual <= last + 1e-14);
            last = ds.residual;
        }
        assert!(last < 1e-13, "full series must resolve A, got {last}");
    }

    #[test]
    fn identity_suite_zero_and_hand_case() {
        let zero = identity_suite(&SchurParams::zero(), 3).unwrap();
        assert_eq!(zero.max(), 0.0);

        let g = SchurParams::regular_real(&[0.0, 0.6, 0.8]).unwrap();
        let res = identity_suite(&g, 2).unwrap();
        assert!(res.passes(1e-14), "residuals {res:?}");
    }
}
