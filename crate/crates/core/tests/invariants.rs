use num_complex::Complex;
use open_xxz::params::{q_pochhammer, sample_generic_params, ChainMode};
use open_xxz::real::{convert, rel_diff};
use open_xxz::scalar::{determinant_crosschecks, scalar_product_determinant, SqrtBranch, SCALAR_TOL};
use open_xxz::spectral::{solve_all_bethe_roots, SolverOptions, SpectralContext};
use open_xxz::vectors::{build_bethe_vector, pairing, Side};
use open_xxz::{suites, DoubleDouble, SpectralContext64};
use proptest::prelude::*;

fn ctx(seed: u64, n: usize) -> SpectralContext64 {
    SpectralContext::new(sample_generic_params(seed, n, ChainMode::Inhomogeneous).unwrap())
}

fn spectral() -> impl Strategy<Value = Complex<f64>> {
    (0.6f64..1.6, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Complex::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn determinant_formula_for_random_kets(seed in 0u64..200, u1 in spectral(), u2 in spectral(), state in 0usize..4) {
        let c = ctx(seed, 2);
        let us = [u1, u2];
        prop_assume!(rel_diff(c.big_u(u1), c.big_u(u2)) > 1e-3);
        let v = solve_all_bethe_roots(&c, &SolverOptions::default()).unwrap().swap_remove(state);
        let r = scalar_product_determinant(&c, &us, &v, SqrtBranch::Principal).unwrap();
        // the trial harness redraws these as well
        prop_assume!(r.condition < suites::TRIAL_CONDITION_LIMIT);
        prop_assert!(r.relative_error <= SCALAR_TOL, "{:e}", r.relative_error);
        let routes = determinant_crosschecks(&c, &us, &v.roots).unwrap();
        prop_assert!(routes.passed());
    }

    #[test]
    fn pairing_is_symmetric_in_ket_roots(seed in 0u64..200, u1 in spectral(), u2 in spectral(), v1 in spectral(), v2 in spectral()) {
        let c = ctx(seed, 2);
        let m = c.params();
        let bra = build_bethe_vector(&[v1, v2], Side::Bra, m).unwrap();
        let a = pairing(&bra, &build_bethe_vector(&[u1, u2], Side::Ket, m).unwrap()).unwrap();
        let b = pairing(&bra, &build_bethe_vector(&[u2, u1], Side::Ket, m).unwrap()).unwrap();
        prop_assert!(rel_diff(a, b) < 1e-9);
    }

    #[test]
    fn pochhammer_shift(b in spectral(), q in spectral(), n in 0usize..8) {
        // (b; q)_{n+1} = (1 - b) (b q; q)_n
        let lhs = q_pochhammer(b, q, n + 1);
        let rhs = (Complex::new(1.0, 0.0) - b) * q_pochhammer(b * q, q, n);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
    }
}

#[test]
fn extended_precision_agrees_with_double() {
    let c64 = ctx(9, 2);
    let cdd: SpectralContext<DoubleDouble> = SpectralContext::new(c64.params().convert());
    let opts = SolverOptions::default();
    let r64 = solve_all_bethe_roots(&c64, &opts).unwrap();
    let rdd = solve_all_bethe_roots(&cdd, &opts).unwrap();
    let us = [Complex::new(0.9, 0.4), Complex::new(-0.7, 1.1)];
    let usdd: Vec<Complex<DoubleDouble>> = us.iter().map(|z| convert(*z)).collect();
    for (a, b) in r64.iter().zip(&rdd) {
        assert!(b.max_residual() < 1e-20, "{:e}", b.max_residual());
        let s64 = scalar_product_determinant(&c64, &us, a, SqrtBranch::Principal).unwrap();
        let sdd = scalar_product_determinant(&cdd, &usdd, b, SqrtBranch::Principal).unwrap();
        assert!(sdd.relative_error.hi() < 1e-20);
        assert!(rel_diff(s64.lhs_direct, convert(sdd.lhs_direct)) < 1e-9);
    }
}

#[test]
fn suites_are_deterministic() {
    let a = suites::scalar_product_trials::<f64>(3, 2, ChainMode::Inhomogeneous, 5).unwrap();
    let b = suites::scalar_product_trials::<f64>(3, 2, ChainMode::Inhomogeneous, 5).unwrap();
    assert_eq!(a, b);
    let c = suites::scalar_product_trials::<f64>(4, 2, ChainMode::Inhomogeneous, 5).unwrap();
    assert_ne!(a.report, c.report);
}

#[test]
fn homogeneous_chain_passes_all_suites() {
    for n in 1..=3 {
        let mode = ChainMode::Homogeneous;
        assert!(suites::verify_axioms::<f64>(30, n, mode).unwrap().passed());
        assert!(suites::solve_all::<f64>(30, n, mode).unwrap().0.passed());
        assert!(suites::scalar_product_trials::<f64>(30, n, mode, 1 << n).unwrap().report.passed());
        assert!(suites::offshell_trials::<f64>(30, n, mode, Some(3)).unwrap().passed());
    }
}
