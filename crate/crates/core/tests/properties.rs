//! Property tests for the library invariants: defect algebra, tail
//! products, transform round trips, positivity transport, quadrature
//! exactness, and the structural matrix identities.

use num_complex::Complex64;
use proptest::prelude::*;

use hsz_core::lmatrix;
use hsz_core::matrix;
use hsz_core::schur::{defect, SchurParams};
use hsz_core::series::PowerSeries;
use hsz_core::transforms;
use hsz_core::MomentSequence;

fn disk_point(max_radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..1.0f64, 0.0..std::f64::consts::TAU)
        .prop_map(move |(u, phi)| Complex64::from_polar(max_radius * u.sqrt(), phi))
}

fn params(max_len: usize, max_radius: f64) -> impl Strategy<Value = SchurParams> {
    prop::collection::vec(disk_point(max_radius), 0..=max_len)
        .prop_map(|entries| SchurParams::regular(entries).expect("strict contractions"))
}

proptest! {
    #[test]
    fn defect_complements_modulus(g in disk_point(1.0 - 1e-9)) {
        let d = defect(g).expect("inside the disk");
        prop_assert!((d * d + g.norm_sqr() - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn tail_product_recursion_and_stabilization(gamma in params(12, 0.98)) {
        for k in 0..gamma.len() {
            let whole = gamma.tail_product(k).value;
            let step = defect(gamma.get(k)).expect("entry") * gamma.tail_product(k + 1).value;
            prop_assert!((whole - step).abs() <= 1e-14);
        }
        prop_assert_eq!(gamma.tail_product(gamma.support()).value, 1.0);
    }

    #[test]
    fn class_stats_depend_on_moduli_only(
        gamma in params(10, 0.95),
        phase in 0.0..std::f64::consts::TAU,
    ) {
        let rotation = Complex64::from_polar(1.0, phase);
        let rotated = SchurParams::regular(
            gamma.entries().iter().map(|&g| rotation * g).collect(),
        ).expect("rotation preserves moduli");
        let (a, b) = (gamma.class_stats(), rotated.class_stats());
        prop_assert!((a.l2_norm_sq - b.l2_norm_sq).abs() <= 1e-13);
        prop_assert!((a.strong_szego_sum - b.strong_szego_sum).abs() <= 1e-13);
        prop_assert!((a.szego_product - b.szego_product).abs() <= 1e-13);
    }

    #[test]
    fn caratheodory_bridges_invert(coeffs in prop::collection::vec(
        (-0.2..0.2f64, -0.2..0.2f64).prop_map(|(re, im)| Complex64::new(re, im)),
        1..=12,
    )) {
        let theta = PowerSeries::new(coeffs);
        let back = transforms::schur_from_caratheodory(
            &transforms::caratheodory_from_schur(&theta),
        ).expect("constant term is one");
        for k in 0..=theta.order() {
            prop_assert!((back.coeff(k) - theta.coeff(k)).norm() <= 1e-12);
        }
    }

    #[test]
    fn schur_algorithm_inverts_synthesis(gamma in params(8, 0.7)) {
        let order = 24;
        let theta = transforms::inverse_schur(&gamma, order);
        let back = transforms::schur_algorithm(&theta, order).expect("schur function");
        prop_assert!(!back.params.is_terminal_unimodular());
        for j in 0..=order {
            prop_assert!((back.params.get(j) - gamma.get(j)).norm() <= 1e-10);
        }
    }

    #[test]
    fn weight_moments_are_exact_for_trig_polys(
        a in prop::collection::vec(-0.2..0.2f64, 1..=4),
        b in prop::collection::vec(-0.2..0.2f64, 1..=4),
    ) {
        // w = 1 + sum a_k cos(k angle) + b_k sin(k angle) stays positive
        let grid = 512;
        let samples: Vec<f64> = (0..grid).map(|l| {
            let angle = std::f64::consts::TAU * l as f64 / grid as f64;
            let mut w = 1.0;
            for (k, &ak) in a.iter().enumerate() {
                w += ak * ((k + 1) as f64 * angle).cos();
            }
            for (k, &bk) in b.iter().enumerate() {
                w += bk * ((k + 1) as f64 * angle).sin();
            }
            w
        }).collect();
        let order = grid / 8;
        let moments = transforms::moments_from_weight(&samples, order).expect("positive weight");
        for k in 1..=order {
            let ak = a.get(k - 1).copied().unwrap_or(0.0);
            let bk = b.get(k - 1).copied().unwrap_or(0.0);
            let expect = Complex64::new(ak / 2.0, bk / 2.0);
            prop_assert!((moments.moment(k as i64).expect("stored") - expect).norm() <= 1e-13);
        }
    }

    #[test]
    fn positive_weights_transport_to_contractions(
        a in prop::collection::vec(-0.25..0.25f64, 1..=3),
        b in prop::collection::vec(-0.25..0.25f64, 1..=3),
    ) {
        let grid = 256;
        let samples: Vec<f64> = (0..grid).map(|l| {
            let angle = std::f64::consts::TAU * l as f64 / grid as f64;
            let mut w = 1.0;
            for (k, &ak) in a.iter().enumerate() {
                w += ak * ((k + 1) as f64 * angle).cos();
            }
            for (k, &bk) in b.iter().enumerate() {
                w += bk * ((k + 1) as f64 * angle).sin();
            }
            w
        }).collect();
        let moments = transforms::moments_from_weight(&samples, 26).expect("positive weight");

        // positivity transport: the Levinson route stays strictly contractive
        let levinson = transforms::levinson_verblunsky(&moments).expect("positive definite");
        for g in levinson.params.entries() {
            prop_assert!(g.norm() < 1.0);
        }

        // quadruple commutativity: both routes produce the same parameters
        let schur = transforms::gamma_from_moments(&moments, 24).expect("route");
        for j in 0..24 {
            prop_assert!(
                (levinson.params.get(j) - schur.params.get(j)).norm() <= 1e-8,
                "index {}", j
            );
        }
    }

    #[test]
    fn triangular_sections_are_structured(gamma in params(10, 0.9), n in 1usize..=8) {
        let l = lmatrix::l_matrix_product(&gamma, n).expect("regular");

        // lower triangular with the tail products on the diagonal
        for r in 1..=n {
            for c in (r + 1)..=n {
                prop_assert_eq!(l[(r - 1, c - 1)], Complex64::new(0.0, 0.0));
            }
            let pi = gamma.tail_product(r).value;
            prop_assert!(pi > 0.0);
            prop_assert!((l[(r - 1, r - 1)] - Complex64::new(pi, 0.0)).norm() <= 1e-12);
        }

        // contractive
        prop_assert!(matrix::operator_norm(&l) <= 1.0 + 1e-12);

        // I - M M* is the rank-one eta eta*
        let m = lmatrix::factor_matrix(&gamma, n).expect("regular");
        let eta = lmatrix::eta_vector(&gamma, n);
        let residual = matrix::identity(n) - &m * m.adjoint();
        let sv = matrix::singular_values(&residual);
        if sv.len() > 1 {
            prop_assert!(sv[1] <= 1e-12, "second singular value {}", sv[1]);
        }
        let diff = &residual - &eta * eta.adjoint();
        prop_assert!(matrix::operator_norm(&diff) <= 1e-12);

        // sigma_min of the factor and its adjoint dominated below by the
        // defect product
        let defect_product: f64 = (1..=n)
            .map(|j| defect(gamma.get(j)).expect("entry"))
            .product();
        prop_assert!(matrix::sigma_min(&m) >= defect_product - 1e-12);
        prop_assert!(matrix::sigma_min(&m.adjoint()) >= defect_product - 1e-12);

        // far coshifts give the identity section exactly
        let far = lmatrix::l_matrix_product(&gamma.coshift(gamma.support()), n)
            .expect("regular");
        prop_assert_eq!(far, matrix::identity(n));

        // 0 <= A <= I as quadratic forms
        let a = matrix::hermitian_part(&(matrix::identity(n) - &l * l.adjoint()));
        let eigs = matrix::hermitian_eigenvalues(&a);
        prop_assert!(eigs.first().copied().unwrap_or(0.0) >= -1e-12);
        prop_assert!(eigs.last().copied().unwrap_or(0.0) <= 1.0 + 1e-12);
    }

    #[test]
    fn json_round_trips(gamma in params(6, 0.9)) {
        let back = SchurParams::from_json(&gamma.to_json()).expect("wire format");
        prop_assert_eq!(gamma, back);
    }

    #[test]
    fn moments_json_round_trips(m1 in disk_point(0.45)) {
        let m = MomentSequence::new(vec![Complex64::new(1.0, 0.0), m1]).expect("positive");
        let back = MomentSequence::from_json(&m.to_json()).expect("wire format");
        prop_assert_eq!(m, back);
    }
}
