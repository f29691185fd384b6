//! Helson-Szego decision evidence: smallest-singular-value sweeps of the
//! triangular sections, the strong-Szego sufficient certificate, direct
//! finite-section Riesz/conjugation oracles from moments, orthonormal
//! polynomials, and the final verdict.
//!
//! The matrix criterion is exact only for the infinite operator; everything
//! a finite sweep shows is labeled evidence, not proof, except where a
//! sufficient condition genuinely certifies.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lmatrix;
use crate::matrix::{self, CMatrix};
use crate::moments::MomentSequence;
use crate::schur::{SchurParams, TOL_REGULAR, TOL_UNIMODULAR};
use crate::transforms;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub n: usize,
    pub value: f64,
}

/// Smallest singular value of the adjoint triangular section for each
/// requested size, plus the sweep infimum (the empirical lower-bound
/// constant).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SigmaSweep {
    pub points: Vec<SweepPoint>,
    pub inf: f64,
}

pub fn sigma_min_sweep(gamma: &SchurParams, sizes: &[usize]) -> Result<SigmaSweep> {
    let mut points = Vec::with_capacity(sizes.len());
    let mut inf = f64::INFINITY;
    for &n in sizes {
        let l = lmatrix::l_matrix_product(gamma, n)?;
        // sigma_min of the adjoint equals sigma_min of the section itself
        let value = matrix::sigma_min(&l);
        inf = inf.min(value);
        points.push(SweepPoint { n, value });
    }
    if !inf.is_finite() {
        inf = 1.0;
    }
    Ok(SigmaSweep { points, inf })
}

/// Sufficient certificate: when the iterated tail product of defects stays
/// away from zero, the adjoint operator is bounded below by that constant.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct StrongSzegoCertificate {
    pub passes: bool,
    /// `prod_{k>=1} prod_{j>=k} D_{gamma_j}`
    pub c_bound: f64,
    /// `sum_k k |gamma_k|^2`
    pub sum: f64,
    /// Value of the doubled product, `c_bound^2`.
    pub product: f64,
    /// Share of the strong-Szego sum carried by the last quarter of the
    /// support; a large share means the truncation hides a divergent tail.
    pub tail_fraction: f64,
}

/// Certificate threshold: `c_bound` below this is numerically
/// indistinguishable from a vanishing lower bound.
pub const C_MIN: f64 = 1e-6;
/// Tail-share limit for trusting a truncated strong-Szego sum.
pub const TAIL_SHARE_LIMIT: f64 = 0.01;

pub fn strong_szego_certificate(gamma: &SchurParams) -> StrongSzegoCertificate {
    let stats = gamma.class_stats();
    if gamma.is_terminal_unimodular() {
        return StrongSzegoCertificate {
            passes: false,
            c_bound: 0.0,
            sum: stats.strong_szego_sum,
            product: 0.0,
            tail_fraction: 1.0,
        };
    }
    let c_bound = stats.szego_product.sqrt();
    let support = gamma.support();
    let tail_start = support - support / 4;
    let tail_sum: f64 = (tail_start..support)
        .map(|k| k as f64 * gamma.get(k).norm_sqr())
        .sum();
    // below the noise floor the truncation heuristic has nothing to say
    let tail_fraction = if stats.strong_szego_sum > 1e-16 {
        tail_sum / stats.strong_szego_sum
    } else {
        0.0
    };
    StrongSzegoCertificate {
        passes: c_bound >= C_MIN && tail_fraction < TAIL_SHARE_LIMIT,
        c_bound,
        sum: stats.strong_szego_sum,
        product: stats.szego_product,
        tail_fraction,
    }
}

fn positive_definite_gram(m: &MomentSequence, n: usize) -> Result<CMatrix> {
    let gram = m.toeplitz_gram_symmetric(n)?;
    let eig = matrix::lambda_min_hermitian(&gram);
    if eig < 1e-12 {
        return Err(Error::SingularToeplitz { order: 2 * n + 1 });
    }
    Ok(gram)
}

/// Norm of the Riesz projection restricted to `span{t^-n .. t^n}` in
/// `L^2(mu)`: the square root of the largest eigenvalue of the pencil
/// `(S* T+ S) a = lambda T a`, where `T` is the Gram of the monomials and
/// `S* T+ S` keeps the nonnegative-frequency block.
pub fn riesz_finite_section_norm(m: &MomentSequence, n: usize) -> Result<f64> {
    let gram = positive_definite_gram(m, n)?;
    let d = 2 * n + 1;
    let mut plus = CMatrix::zeros(d, d);
    for r in n..d {
        for c in n..d {
            plus[(r, c)] = gram[(r, c)];
        }
    }
    Ok(matrix::generalized_lambda_max(&plus, &gram)?
        .max(0.0)
        .sqrt())
}

/// Best constant for the conjugation operator on degree-`n` trigonometric
/// polynomials in `L^2(mu)`; the conjugation multiplies the coefficient of
/// `t^k` by `-i sgn(k)`.
pub fn conjugation_ratio(m: &MomentSequence, n: usize) -> Result<f64> {
    let gram = positive_definite_gram(m, n)?;
    let d = 2 * n + 1;
    let sign = |idx: usize| -> Complex64 {
        let k = idx as i64 - n as i64;
        match k.cmp(&0) {
            std::cmp::Ordering::Greater => Complex64::new(0.0, -1.0),
            std::cmp::Ordering::Equal => Complex64::new(0.0, 0.0),
            std::cmp::Ordering::Less => Complex64::new(0.0, 1.0),
        }
    };
    // D* T D for the diagonal conjugation symbol D
    let mut conj_form = CMatrix::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            conj_form[(r, c)] = sign(r).conj() * gram[(r, c)] * sign(c);
        }
    }
    Ok(matrix::generalized_lambda_max(&conj_form, &gram)?
        .max(0.0)
        .sqrt())
}

/// Riesz norms over ascending sizes. Nested subspaces force the sweep to be
/// nondecreasing; that is asserted here.
pub fn riesz_sweep(m: &MomentSequence, sizes: &[usize]) -> Result<Vec<SweepPoint>> {
    let mut points = Vec::with_capacity(sizes.len());
    let mut last = 0.0f64;
    for &n in sizes {
        let value = riesz_finite_section_norm(m, n)?;
        assert!(
            value >= last - 1e-9,
            "Riesz finite-section norms must be nondecreasing: {value} after {last} at n={n}"
        );
        last = value;
        points.push(SweepPoint { n, value });
    }
    Ok(points)
}

pub fn conjugation_sweep(m: &MomentSequence, sizes: &[usize]) -> Result<Vec<SweepPoint>> {
    sizes
        .iter()
        .map(|&n| {
            Ok(SweepPoint {
                n,
                value: conjugation_ratio(m, n)?,
            })
        })
        .collect()
}

/// Orthonormal polynomials in `t^-1` by Gram-Schmidt on `{1, t^-1, ..,
/// t^-n}` with positive leading coefficients. Returns coefficient vectors in
/// the basis `t^0..t^-j`.
pub fn orthonormal_polynomials(m: &MomentSequence, n: usize) -> Result<Vec<Vec<Complex64>>> {
    // Gram of {t^0, t^-1, .., t^-n}: entry (r, c) = <t^-c, t^-r> ... = m_{r-c}
    let size = n + 1;
    m.moment(n as i64)?;
    let gram = CMatrix::from_fn(size, size, |r, c| {
        m.moment(r as i64 - c as i64).expect("range checked")
    });
    let inner = |a: &Vec<Complex64>, b: &Vec<Complex64>| -> Complex64 {
        // <sum a_j t^-j, sum b_k t^-k> = sum conj(b_k) gram[(k, j)] a_j
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, bk) in b.iter().enumerate() {
            for (j, aj) in a.iter().enumerate() {
                acc += bk.conj() * gram[(k, j)] * aj;
            }
        }
        acc
    };
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(size);
    for degree in 0..size {
        let mut candidate = vec![Complex64::new(0.0, 0.0); degree + 1];
        candidate[degree] = ONE;
        for _pass in 0..2 {
            for prev in &basis {
                let coeff = inner(&candidate, prev);
                for (j, p) in prev.iter().enumerate() {
                    candidate[j] -= coeff * p;
                }
            }
        }
        let norm_sq = inner(&candidate, &candidate).re;
        if norm_sq <= 1e-24 {
            return Err(Error::SingularToeplitz { order: degree });
        }
        let scale = 1.0 / norm_sq.sqrt();
        for c in candidate.iter_mut() {
            *c *= scale;
        }
        // positive leading coefficient fixes the phase
        let lead = candidate[degree];
        if lead.norm() > 0.0 {
            let phase = (lead / lead.norm()).conj();
            for c in candidate.iter_mut() {
                *c *= phase;
            }
        }
        basis.push(candidate);
    }
    Ok(basis)
}

/// Verdict categories, ordered from certified membership to certified
/// violation of the necessary condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CertifiedHs,
    LikelyHs,
    LikelyNotHs,
    NotHsNecessaryViolation,
    Inconclusive,
}

impl Verdict {
    /// Process exit code for the CLI: 0 positive, 1 negative, 2 undecided.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::CertifiedHs | Verdict::LikelyHs => 0,
            Verdict::LikelyNotHs | Verdict::NotHsNecessaryViolation => 1,
            Verdict::Inconclusive => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::CertifiedHs => "certified_hs",
            Verdict::LikelyHs => "likely_hs",
            Verdict::LikelyNotHs => "likely_not_hs",
            Verdict::NotHsNecessaryViolation => "not_hs_necessary_violation",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Thresholds for the decision ladder. The finite-section heuristics are
/// explicitly evidence, not proof; the values are recorded in every report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerdictConfig {
    /// Sweep infimum below this cannot be called separated from zero.
    pub eps_min: f64,
    /// Log-log slope below `-slope_cutoff` reads as decay toward zero.
    pub slope_cutoff: f64,
    /// Minimum certified lower bound.
    pub c_min: f64,
    /// Sizes of the triangular/Riesz sections to sweep.
    pub sweep_sizes: Vec<usize>,
    /// Parameters are derived from moments out to at least this multiple of
    /// the largest sweep size, so section entries see enough of the tail.
    pub order_factor: usize,
    /// Explicit parameter truncation order (grown to `order_factor *
    /// max(sweep_sizes)` when moments allow).
    pub order: usize,
    /// Quadrature nodes for the Szego identity check.
    pub quad_points: usize,
    /// Largest entrywise discrepancy tolerated between independently given
    /// parameters and moments.
    pub consistency_tol: f64,
    /// Order at which the consistency check runs.
    pub consistency_order: usize,
    /// Share of the l2 mass in the last quarter of the support that reads as
    /// divergence evidence.
    pub l2_tail_share: f64,
    /// Smallest support for which the tail share is meaningful.
    pub l2_tail_min_support: usize,
    pub seed: u64,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        Self {
            eps_min: 1e-3,
            slope_cutoff: 0.25,
            c_min: C_MIN,
            sweep_sizes: vec![4, 8, 16, 32, 64, 128],
            order_factor: 4,
            order: 64,
            quad_points: 2048,
            consistency_tol: 1e-6,
            consistency_order: 24,
            l2_tail_share: 0.2,
            l2_tail_min_support: 16,
            seed: 0,
        }
    }
}

/// What the verdict was computed from.
#[derive(Clone, Debug)]
pub enum DiagnosisInput {
    Gamma(SchurParams),
    Moments(MomentSequence),
    /// Independently supplied parameters and moments; the quadruple
    /// consistency check runs before anything else.
    GammaAndMoments(SchurParams, MomentSequence),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StrongSzegoEvidence {
    pub sum: f64,
    pub product: f64,
    pub c_bound: f64,
    pub passes: bool,
    pub tail_fraction: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Provenance {
    pub input: String,
    pub input_digest: String,
    pub truncation_order: usize,
    pub trusted: usize,
    pub tol_regular: f64,
    pub tol_unimodular: f64,
    pub consistency_tol: f64,
    pub sweep_sizes: Vec<usize>,
    pub seed: u64,
    pub version: String,
    pub levinson_convention: Option<String>,
    pub cross_check_discrepancy: Option<f64>,
    pub notes: Vec<String>,
}

/// Full diagnostic evidence: verdict, sweeps, certificates, residuals, and
/// the provenance needed to reproduce them.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagnosticReport {
    pub verdict: Verdict,
    pub sigma_sweep: Vec<SweepPoint>,
    pub sigma_inf: f64,
    pub sigma_loglog_slope: Option<f64>,
    pub riesz_sweep: Option<Vec<SweepPoint>>,
    pub conjugation_sweep: Option<Vec<SweepPoint>>,
    pub strong_szego: StrongSzegoEvidence,
    pub szego_identity_residual: Option<f64>,
    /// Largest eigenvalue of the rank-one series partial sum; its distance
    /// to 1 is the additive-criterion margin.
    pub defect_lambda_max: Option<f64>,
    pub provenance: Provenance,
}

impl DiagnosticReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialization cannot fail")
    }

    /// One CSV per sweep, columns `n,value`.
    pub fn sweep_csvs(&self) -> Vec<(String, String)> {
        let render = |points: &[SweepPoint]| -> String {
            let mut out = String::from("n,value\n");
            for p in points {
                out.push_str(&format!("{},{}\n", p.n, p.value));
            }
            out
        };
        let mut files = vec![("sigma_sweep.csv".to_string(), render(&self.sigma_sweep))];
        if let Some(sweep) = &self.riesz_sweep {
            files.push(("riesz_sweep.csv".to_string(), render(sweep)));
        }
        if let Some(sweep) = &self.conjugation_sweep {
            files.push(("conjugation_sweep.csv".to_string(), render(sweep)));
        }
        files
    }
}

fn loglog_slope(points: &[SweepPoint]) -> Option<f64> {
    let data: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.value > 0.0 && p.n > 0)
        .map(|p| ((p.n as f64).ln(), p.value.ln()))
        .collect();
    if data.len() < 2 {
        return None;
    }
    let n = data.len() as f64;
    let mean_x = data.iter().map(|d| d.0).sum::<f64>() / n;
    let mean_y = data.iter().map(|d| d.1).sum::<f64>() / n;
    let sxx: f64 = data.iter().map(|d| (d.0 - mean_x).powi(2)).sum();
    let sxy: f64 = data.iter().map(|d| (d.0 - mean_x) * (d.1 - mean_y)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn max_entry_diff(a: &SchurParams, b: &SchurParams, order: usize) -> f64 {
    (0..order)
        .map(|j| (a.get(j) - b.get(j)).norm())
        .fold(0.0, f64::max)
}

/// The decision ladder:
/// 1. a terminal parameter or clear l2 divergence violates the necessary
///    condition;
/// 2. a passing strong-Szego certificate certifies membership;
/// 3. otherwise the sigma sweep decides by level and trend, with the
///    moment-side oracles recorded as corroborating evidence.
pub fn hsz_verdict(input: &DiagnosisInput, config: &VerdictConfig) -> Result<DiagnosticReport> {
    if config.sweep_sizes.is_empty()
        || config.sweep_sizes.windows(2).any(|pair| pair[1] <= pair[0])
        || config.sweep_sizes[0] == 0
    {
        return Err(Error::Inconsistent(
            "sweep sizes must be positive and strictly ascending".into(),
        ));
    }
    let max_sweep = config.sweep_sizes.iter().copied().max().unwrap_or(16);
    let wanted_order = config.order.max(config.order_factor * max_sweep);

    let mut notes: Vec<String> = Vec::new();
    let mut cross_check = None;
    let mut levinson_note = None;

    let (gamma, trusted, moments, description) = match input {
        DiagnosisInput::Gamma(g) => (
            g.clone(),
            g.len(),
            None,
            format!("gamma sequence, {} entries", g.len()),
        ),
        DiagnosisInput::Moments(m) => {
            let order = wanted_order.min(m.order().saturating_sub(1));
            let schur_route = transforms::gamma_from_moments(m, order)?;
            let levinson = transforms::levinson_verblunsky(m)?;
            let check_order = config.consistency_order.min(order);
            let discrepancy = max_entry_diff(&schur_route.params, &levinson.params, check_order);
            if discrepancy > config.consistency_tol {
                return Err(Error::Provenance(format!(
                    "Levinson and Schur-algorithm routes disagree by {discrepancy:.3e} \
                     at order {check_order}"
                )));
            }
            cross_check = Some(discrepancy);
            levinson_note = Some(transforms::LEVINSON_CONVENTION.to_string());
            (
                schur_route.params,
                schur_route.trusted,
                Some(m.clone()),
                format!("moment sequence, m_0..m_{}", m.order()),
            )
        }
        DiagnosisInput::GammaAndMoments(g, m) => {
            let order = config
                .consistency_order
                .min(m.order().saturating_sub(1))
                .min(g.len());
            let from_moments = transforms::gamma_from_moments(m, order)?;
            let discrepancy = max_entry_diff(g, &from_moments.params, order);
            if discrepancy > config.consistency_tol {
                return Err(Error::Provenance(format!(
                    "supplied gamma and moments disagree by {discrepancy:.3e} at order {order}"
                )));
            }
            cross_check = Some(discrepancy);
            (
                g.clone(),
                g.len(),
                Some(m.clone()),
                format!(
                    "gamma ({} entries) with independent moments (m_0..m_{})",
                    g.len(),
                    m.order()
                ),
            )
        }
    };

    let digest = crate::input_digest(description.as_bytes());
    let stats = gamma.class_stats();
    let cert = strong_szego_certificate(&gamma);
    let strong_szego = StrongSzegoEvidence {
        sum: cert.sum,
        product: cert.product,
        c_bound: cert.c_bound,
        passes: cert.passes,
        tail_fraction: cert.tail_fraction,
    };

    let provenance = |notes: Vec<String>| Provenance {
        input: description.clone(),
        input_digest: digest.clone(),
        truncation_order: gamma.len(),
        trusted,
        tol_regular: TOL_REGULAR,
        tol_unimodular: TOL_UNIMODULAR,
        consistency_tol: config.consistency_tol,
        sweep_sizes: config.sweep_sizes.clone(),
        seed: config.seed,
        version: crate::VERSION.to_string(),
        levinson_convention: levinson_note.clone(),
        cross_check_discrepancy: cross_check,
        notes,
    };

    // Rung 1: necessary-condition violations.
    if gamma.is_terminal_unimodular() {
        notes.push(
            "terminal unimodular parameter: the sequence is finite, the measure cannot \
             satisfy the necessary condition"
                .to_string(),
        );
        return Ok(DiagnosticReport {
            verdict: Verdict::NotHsNecessaryViolation,
            sigma_sweep: Vec::new(),
            sigma_inf: 0.0,
            sigma_loglog_slope: None,
            riesz_sweep: None,
            conjugation_sweep: None,
            strong_szego,
            szego_identity_residual: None,
            defect_lambda_max: None,
            provenance: provenance(notes),
        });
    }
    let support = gamma.support();
    if support >= config.l2_tail_min_support && stats.l2_norm_sq > 0.0 {
        let tail_start = support - support / 4;
        let tail: f64 = (tail_start..support).map(|k| gamma.get(k).norm_sqr()).sum();
        let share = tail / stats.l2_norm_sq;
        if share > config.l2_tail_share {
            notes.push(format!(
                "l2 divergence evidence: last quarter of the support carries {share:.2} \
                 of the squared mass"
            ));
            return Ok(DiagnosticReport {
                verdict: Verdict::NotHsNecessaryViolation,
                sigma_sweep: Vec::new(),
                sigma_inf: 0.0,
                sigma_loglog_slope: None,
                riesz_sweep: None,
                conjugation_sweep: None,
                strong_szego,
                szego_identity_residual: None,
                defect_lambda_max: None,
                provenance: provenance(notes),
            });
        }
    }

    // Shared evidence for the remaining rungs.
    let sigma = sigma_min_sweep(&gamma, &config.sweep_sizes)?;
    let slope = loglog_slope(&sigma.points);
    let (riesz, conjugation) = match &moments {
        Some(m) => {
            let usable: Vec<usize> = config
                .sweep_sizes
                .iter()
                .copied()
                .filter(|&n| 2 * n <= m.order())
                .collect();
            if usable.len() < config.sweep_sizes.len() {
                notes.push(format!(
                    "moment-side sweeps limited to sizes {usable:?} by the available moments"
                ));
            }
            (
                Some(riesz_sweep(m, &usable)?),
                Some(conjugation_sweep(m, &usable)?),
            )
        }
        None => (None, None),
    };

    let theta = transforms::inverse_schur(&gamma, (2 * support).clamp(32, 512));
    let identity = transforms::szego_identity_residual(&gamma, &theta, config.quad_points, None);
    if identity.singular_nodes > 0 {
        notes.push(format!(
            "Szego identity quadrature hit {} singular nodes",
            identity.singular_nodes
        ));
    }

    // Additive-criterion evidence at a moderate size.
    let evidence_n = max_sweep.min(64);
    let series = lmatrix::defect_series(&gamma, evidence_n, support + 1)?;
    let lambda_max = matrix::lambda_max_hermitian(&series.partial);
    let sigma_at_n = sigma
        .points
        .iter()
        .find(|p| p.n == evidence_n)
        .map(|p| p.value)
        .unwrap_or_else(|| {
            matrix::sigma_min(&lmatrix::l_matrix_product(&gamma, evidence_n).expect("regular"))
        });
    let definitional = (lambda_max - (1.0 - sigma_at_n * sigma_at_n)).abs();
    assert!(
        definitional <= 1e-12 + series.residual,
        "lambda_max(A_n) must equal 1 - sigma_min^2, off by {definitional:.3e}"
    );

    // Rung 2: sufficient certificate.
    if cert.passes {
        assert!(
            sigma.inf >= cert.c_bound - 1e-8,
            "certified bound {:.6e} exceeds observed sweep infimum {:.6e}",
            cert.c_bound,
            sigma.inf
        );
        return Ok(DiagnosticReport {
            verdict: Verdict::CertifiedHs,
            sigma_sweep: sigma.points,
            sigma_inf: sigma.inf,
            sigma_loglog_slope: slope,
            riesz_sweep: riesz,
            conjugation_sweep: conjugation,
            strong_szego,
            szego_identity_residual: Some(identity.residual),
            defect_lambda_max: Some(lambda_max),
            provenance: provenance(notes),
        });
    }

    // Rung 3: trends.
    let verdict = match slope {
        Some(s) if s <= -config.slope_cutoff => Verdict::LikelyNotHs,
        Some(s) if sigma.inf >= config.eps_min && s > -config.slope_cutoff => Verdict::LikelyHs,
        _ => Verdict::Inconclusive,
    };
    Ok(DiagnosticReport {
        verdict,
        sigma_sweep: sigma.points,
        sigma_inf: sigma.inf,
        sigma_loglog_slope: slope,
        riesz_sweep: riesz,
        conjugation_sweep: conjugation,
        strong_szego,
        szego_identity_residual: Some(identity.residual),
        defect_lambda_max: Some(lambda_max),
        provenance: provenance(notes),
    })
}
