use num_complex::Complex64;
use proptest::prelude::*;

use polybergman::algebras::{evaluate_word, pure_state_apply, Alphabet, CVector, GeneratorWord, PureState};
use polybergman::io::format_float;
use polybergman::kernels::{g_kernel, kernel_kgamma, kernel_pt, HalfPlanePoint, KGammaMethod};
use polybergman::projections::{m_vector, p_gamma};
use polybergman::specfun::{digamma, laguerre_poly, laplace_j, nielsen_beta};
use polybergman::spectral::{gamma_indicator_closed, gamma_matrix, Point};
use polybergman::symbols::VerticalSymbol;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn upper_point() -> impl Strategy<Value = HalfPlanePoint> {
    (-3.0..3.0f64, 0.2..3.0f64).prop_map(|(x, y)| HalfPlanePoint::new(x, y).unwrap())
}

fn sym_eigenvalues(m: &nalgebra::DMatrix<f64>) -> Vec<f64> {
    nalgebra::SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laguerre_three_term_recurrence(k in 1usize..25, y in 0.0..40.0f64) {
        let lhs = (k + 1) as f64 * laguerre_poly(k + 1, y);
        let rhs = (2 * k + 1) as f64 * laguerre_poly(k, y) - y * laguerre_poly(k, y) - k as f64 * laguerre_poly(k - 1, y);
        let scale = 1.0 + ((2 * k + 1) as f64 + y) * laguerre_poly(k, y).abs() + k as f64 * laguerre_poly(k - 1, y).abs();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
    }

    #[test]
    fn digamma_recurrence(re in 0.1..20.0f64, im in -20.0..20.0f64) {
        let z = Complex64::new(re, im);
        let d = digamma(z + 1.0).unwrap() - digamma(z).unwrap() - 1.0 / z;
        prop_assert!(d.norm() < 1e-12 * (1.0 + digamma(z).unwrap().norm()));
    }

    #[test]
    fn nielsen_beta_functional_equation(re in 0.1..15.0f64, im in -10.0..10.0f64) {
        // β(z) + β(z + 1) = 1/z
        let z = Complex64::new(re, im);
        let d = nielsen_beta(z).unwrap() + nielsen_beta(z + 1.0).unwrap() - 1.0 / z;
        prop_assert!(d.norm() < 1e-12 * (1.0 + (1.0 / z).norm()));
    }

    #[test]
    fn laplace_j_shift(re in 0.2..30.0f64, im in -10.0..10.0f64) {
        // J(p + 2) = J(p) p / (p + 3)
        let p = Complex64::new(re, im);
        let lhs = laplace_j(p + 2.0).unwrap();
        let rhs = laplace_j(p).unwrap() * p / (p + 3.0);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm());
    }

    #[test]
    fn canonical_partition_of_unity(n in 1usize..=16, x in 1e-3..60.0f64) {
        let sum: f64 = (1..=n).map(|k| gamma_indicator_closed(k, n, x).unwrap()).sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
        prop_assert!((m_vector(n, x).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_of_indicator_lies_between_zero_and_identity(
        n in 1usize..=6, c in 0.0..3.0f64, len in 0.01..3.0f64, x in 0.01..10.0f64,
    ) {
        let g = gamma_matrix(n, &VerticalSymbol::indicator(c, c + len).unwrap(), x).unwrap();
        prop_assert!(g.symmetry_defect() < 1e-14);
        for e in sym_eigenvalues(&g.entries) {
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&e));
        }
    }

    #[test]
    fn gamma_is_monotone_in_the_symbol(
        n in 1usize..=5, c in 0.0..2.0f64, d1 in 0.05..2.0f64, extra in 0.01..2.0f64, x in 0.05..5.0f64,
    ) {
        let small = gamma_matrix(n, &VerticalSymbol::indicator(c, c + d1).unwrap(), x).unwrap();
        let large = gamma_matrix(n, &VerticalSymbol::indicator(c, c + d1 + extra).unwrap(), x).unwrap();
        for e in sym_eigenvalues(&(large.entries - small.entries)) {
            prop_assert!(e > -1e-12);
        }
    }

    #[test]
    fn p_gamma_is_a_rank_one_projection(n in 1usize..=8, x in 1e-3..200.0f64) {
        let p = p_gamma(n, Point::Finite(x)).unwrap();
        prop_assert!(p.idempotency_defect() < 1e-12);
        prop_assert!(p.symmetry_defect() == 0.0);
        prop_assert!((p.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kernel_is_hermitian(n in 1usize..=4, z in upper_point(), w in upper_point()) {
        let a = kernel_pt(n, z, w).unwrap();
        let b = kernel_pt(n, w, z).unwrap();
        let d = (&a.entries - b.entries.adjoint()).iter().map(|e| e.norm()).fold(0.0, f64::max);
        prop_assert!(d < 1e-12 * (1.0 + a.entries.norm()));
    }

    #[test]
    fn bergman_reduction(z in upper_point(), w in upper_point()) {
        let g = g_kernel(0, z, w);
        prop_assert_eq!(kernel_pt(1, z, w).unwrap().entry(1, 1), g);
        let k = kernel_kgamma(1, z, w, KGammaMethod::PhiRepresentation).unwrap();
        prop_assert!((k - g).norm() < 1e-10 * g.norm());
    }

    #[test]
    fn pure_states_are_gauge_invariant(seed in any::<u64>(), n in 1usize..=5, x in 0.05..5.0f64, phase in 0.0..std::f64::consts::TAU) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = GeneratorWord::random(&mut rng, Alphabet::ToeplitzSystem, n, 5).unwrap();
        let m = evaluate_word(&w, n, 2.0, Point::Finite(x)).unwrap();
        let v = CVector::from_fn(n, |j, _| Complex64::new(1.0 + j as f64, 0.5 - j as f64));
        let v = &v / Complex64::new(v.norm(), 0.0);
        let s = PureState::new(Point::Finite(x), v.clone()).unwrap();
        let t = PureState::new(Point::Finite(x), v * Complex64::from_polar(1.0, phase)).unwrap();
        let d = pure_state_apply(&s, &m).unwrap() - pure_state_apply(&t, &m).unwrap();
        prop_assert!(d.norm() < 1e-14);
    }

    #[test]
    fn words_round_trip_through_text(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = GeneratorWord::random(&mut rng, Alphabet::ProjectionSystem, n, 6).unwrap();
        prop_assert_eq!(w.to_string().parse::<GeneratorWord>().unwrap(), w);
    }

    #[test]
    fn floats_round_trip_through_csv_format(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn symbols_round_trip_through_text(c in 0.0..10.0f64, len in 1e-3..10.0f64) {
        let a = VerticalSymbol::indicator(c, c + len).unwrap();
        let b: VerticalSymbol = a.to_string().parse().unwrap();
        prop_assert_eq!(b.to_string(), a.to_string());
        prop_assert_eq!(b.evaluate(c), 1.0);
    }

    #[test]
    fn points_round_trip_through_text(z in upper_point()) {
        prop_assert_eq!(z.to_string().parse::<HalfPlanePoint>().unwrap(), z);
    }
}
