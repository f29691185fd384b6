//! Seeded randomized verification campaigns over the matrix identities, the
//! two section routes, and the parameter round trip.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lmatrix;
use crate::matrix;
use crate::schur::SchurParams;
use crate::transforms;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub trials: usize,
    /// Section size for the identity suite.
    pub size: usize,
    /// Support length of the random sequences.
    pub support: usize,
    /// Largest modulus of a random entry.
    pub max_modulus: f64,
    /// Support for the round-trip leg. Recovering parameters from Taylor
    /// coefficients conditions like `prod 1/(1 - |gamma_j|^2)`, so this leg
    /// draws from a shorter, milder family than the matrix identities.
    pub roundtrip_support: usize,
    /// Largest modulus on the round-trip leg.
    pub roundtrip_max_modulus: f64,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            trials: 100,
            size: 12,
            support: 16,
            max_modulus: 0.95,
            roundtrip_support: 12,
            roundtrip_max_modulus: 0.7,
            seed: 1,
            tolerance: 1e-10,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub max_factorization: f64,
    pub max_rank_one: f64,
    pub max_contractivity: f64,
    pub max_eigen: f64,
    pub max_sigma_bound: f64,
    /// Direct-vs-product disagreement of the triangular sections at sizes
    /// within the brute-force cap.
    pub max_cross_route: f64,
    /// Parameter recovery error of the Schur-algorithm round trip.
    pub max_round_trip: f64,
    pub overall_max: f64,
    pub passed: bool,
}

/// Uniform draw from the disk of the given radius.
pub fn random_disk_point(rng: &mut impl Rng, radius: f64) -> Complex64 {
    let r = radius * rng.random::<f64>().sqrt();
    let angle = 2.0 * std::f64::consts::PI * rng.random::<f64>();
    Complex64::from_polar(r, angle)
}

pub fn random_schur_params(rng: &mut impl Rng, support: usize, max_modulus: f64) -> SchurParams {
    let entries: Vec<Complex64> = (0..support)
        .map(|_| random_disk_point(rng, max_modulus))
        .collect();
    SchurParams::regular(entries).expect("entries are strict contractions")
}

pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = CampaignReport {
        config: config.clone(),
        max_factorization: 0.0,
        max_rank_one: 0.0,
        max_contractivity: 0.0,
        max_eigen: 0.0,
        max_sigma_bound: 0.0,
        max_cross_route: 0.0,
        max_round_trip: 0.0,
        overall_max: 0.0,
        passed: false,
    };
    let cross_size = config.size.clamp(1, 6);
    for _ in 0..config.trials {
        let gamma = random_schur_params(&mut rng, config.support, config.max_modulus);

        let suite = lmatrix::identity_suite(&gamma, config.size)?;
        report.max_factorization = report.max_factorization.max(suite.factorization);
        report.max_rank_one = report.max_rank_one.max(suite.rank_one);
        report.max_contractivity = report.max_contractivity.max(suite.contractivity);
        report.max_eigen = report.max_eigen.max(suite.eigen);
        report.max_sigma_bound = report.max_sigma_bound.max(suite.sigma_bound);

        let direct = lmatrix::l_matrix_direct(&gamma, cross_size)?;
        let product = lmatrix::l_matrix_product(&gamma, cross_size)?;
        report.max_cross_route = report
            .max_cross_route
            .max(matrix::operator_norm(&(&direct - &product)));

        let mild = random_schur_params(
            &mut rng,
            config.roundtrip_support,
            config.roundtrip_max_modulus,
        );
        let order = (config.roundtrip_support + 8).max(32);
        let theta = transforms::inverse_schur(&mild, order);
        let recovered = transforms::schur_algorithm(&theta, order)?;
        let diff = (0..order)
            .map(|j| (mild.get(j) - recovered.params.get(j)).norm())
            .fold(0.0, f64::max);
        report.max_round_trip = report.max_round_trip.max(diff);
    }
    report.overall_max = report
        .max_factorization
        .max(report.max_rank_one)
        .max(report.max_contractivity)
        .max(report.max_eigen)
        .max(report.max_sigma_bound)
        .max(report.max_cross_route)
        .max(report.max_round_trip);
    report.passed = report.overall_max <= config.tolerance;
    Ok(report)
}
