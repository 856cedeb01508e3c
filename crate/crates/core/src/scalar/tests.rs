use num_complex::Complex;

use super::*;
use crate::params::{sample_generic_params, ChainMode, ModelParams};
use crate::linalg::CMatrix;
use crate::real::cx;
use crate::spectral::{solve_bethe_roots, SolverOptions};
use crate::DoubleDouble;

type C = Complex<f64>;

fn ctx(seed: u64, n: usize) -> SpectralContext<f64> {
    SpectralContext::new(sample_generic_params(seed, n, ChainMode::Inhomogeneous).unwrap())
}

fn onshell(c: &SpectralContext<f64>, idx: usize) -> BetheRoots<f64> {
    solve_bethe_roots(idx, c, &SolverOptions::default()).unwrap()
}

fn offshell(seed: u64, n: usize) -> Vec<C> {
    (0..n).map(|k| C::from_polar(0.75 + 0.11 * ((seed as usize + 2 * k) % 6) as f64, 0.3 + 1.1 * k as f64 + 0.37 * seed as f64)).collect()
}

#[test]
fn summation_identities() {
    let c = ctx(1, 3);
    let us = offshell(1, 4);
    let ws = offshell(7, 4);
    let q = c.q();
    for i in 0..4 {
        let wi = removed(&ws, i);
        let weight = |k: usize| c.big_q_set(us[k], &wi) / c.big_q_set(us[k], &removed(&us, k));
        let plain: C = (0..4).map(weight).sum();
        assert!((plain - 1.0).norm() < 1e-11);
        for a in [q, 1.0 / q, cx(0.4, 1.3)] {
            for j in 0..4 {
                let lhs: C = (0..4).map(|k| weight(k) * c.big_q_set(a * us[j], &removed(&us, k))).sum();
                let rhs = c.big_q_set(a * us[j], &wi);
                assert!((lhs - rhs).norm() < 1e-11 * rhs.norm().max(1.0));
            }
        }
    }
}

#[test]
fn w_matrix_determinant() {
    let c = ctx(2, 2);
    let us = offshell(2, 3);
    let ws = offshell(9, 3);
    let det = w_matrix(&c, &us, &ws).det();
    let expected = delta(&c, &ws) / (us.iter().map(|u| c.f(*u)).product::<C>() * delta(&c, &us));
    assert!(rel_diff(det, expected) < 1e-11);
}

#[test]
fn linear_system_is_singular_on_shell() {
    for n in 1..=3 {
        let c = ctx(10 + n as u64, n);
        for idx in 0..(1 << n) {
            let v = onshell(&c, idx);
            let sys = build_linear_system(&c, &offshell(idx as u64, n + 1), &v.roots, cx(0.6, 1.7)).unwrap();
            assert!(sys.det_l_relative() <= DET_L_TOL, "n={n} idx={idx}: {:e}", sys.det_l_relative());
            assert!(sys.omega_last_row_relative() <= DET_L_TOL);
            // Omega~ rows against M
            for i in 0..n {
                for j in 0..=n {
                    let uj = sys.u_ext[j];
                    let expected = sys.m[(i, j)]
                        / (c.big_u_derivative(v.roots[i]) * c.f(uj) * c.big_q_set(uj, &removed(&sys.u_ext, j)));
                    assert!(rel_diff(sys.omega_tilde[(i, j)], expected) < 1e-8);
                }
            }
        }
    }
}

#[test]
fn linear_system_rejects_offshell_dual() {
    let c = ctx(3, 2);
    let err = build_linear_system(&c, &offshell(1, 3), &offshell(2, 2), cx(0.6, 1.7)).unwrap_err();
    assert!(matches!(err, Error::OffShellDual { .. }));
}

#[test]
fn linear_system_rejects_collision() {
    let c = ctx(3, 2);
    let v = onshell(&c, 1);
    let mut us = offshell(1, 3);
    us[2] = 1.0 / (c.q() * us[0]);
    assert!(matches!(build_linear_system(&c, &us, &v.roots, cx(0.6, 1.7)), Err(Error::DegenerateDenominator(_))));
}

#[test]
fn null_vector_matches_pairings() {
    for n in 1..=3 {
        let c = ctx(20 + n as u64, n);
        let v = onshell(&c, (1 << n) - 1);
        let us = offshell(3, n + 1);
        let sys = build_linear_system(&c, &us, &v.roots, cx(0.6, 1.7)).unwrap();
        let bra = build_bethe_vector(&v.roots, Side::Bra, c.params()).unwrap();
        let x: Vec<C> = (0..=n)
            .map(|l| pairing(&bra, &build_bethe_vector(&removed(&us, l), Side::Ket, c.params()).unwrap()).unwrap())
            .collect();
        let null = sys.null_vector();
        let r0 = x[0] / null[0];
        for l in 1..=n {
            assert!(rel_diff(x[l] / null[l], r0) < 1e-7, "n={n} l={l}");
        }
        // X_l F(ubar_l) Delta(ubar_l) / det M_l does not depend on l
        let g = |l: usize| {
            let ul = removed(&us, l);
            let ml = CMatrix::from_fn(n, n, |i, j| sys.m[(i, if j < l { j } else { j + 1 })]);
            x[l] * ul.iter().map(|u| c.f(*u)).product::<C>() * delta(&c, &ul) / ml.det()
        };
        for l in 1..=n {
            assert!(rel_diff(g(l), g(0)) < 1e-7);
        }
    }
}

#[test]
fn jacobian_routes_agree() {
    for n in 1..=3 {
        let c = ctx(30 + n as u64, n);
        for idx in [0, (1 << n) - 1] {
            let v = onshell(&c, idx);
            let us = offshell(5, n + 1);
            let a = jacobian_analytic(&c, &us, &v.roots).unwrap();
            let b = jacobian_from_y(&c, &us, &v.roots).unwrap();
            assert!(row_relative_difference(&a, &b) < 1e-10, "n={n}");
        }
    }
}

#[test]
fn jacobian_matches_finite_differences() {
    let c = ctx(33, 2);
    let vs = offshell(4, 2);
    let u = cx(0.9, -0.6);
    let h = 1e-6;
    for i in 0..2 {
        let shift = |d: f64| {
            let mut w = vs.clone();
            w[i] += d;
            c.lambda(u, &w).unwrap()
        };
        let fd = (shift(h) - shift(-h)) / (2.0 * h);
        assert!(rel_diff(fd, d_lambda_dv(&c, u, &vs, i).unwrap()) < 1e-5);
    }
    let v = cx(1.2, 0.3);
    let q = c.q();
    let fd = (c.big_u(v + h) - c.big_u(v - h)) / (2.0 * h);
    let analytic = 2.0 * (q * v * v - 1.0 / (q * v * v)) / ((q - 1.0 / q).powi(2) * v);
    assert!(rel_diff(fd, analytic) < 1e-8);
    assert!(rel_diff(c.big_u_derivative(v), analytic) < 1e-14);
}

#[test]
fn four_routes_agree() {
    for n in 1..=3 {
        let c = ctx(40 + n as u64, n);
        for idx in 0..(1 << n) {
            let v = onshell(&c, idx);
            let report = determinant_crosschecks(&c, &offshell(idx as u64, n), &v.roots).unwrap();
            assert!(report.passed(), "n={n} idx={idx}: {:?}", report.failures().collect::<Vec<_>>());
        }
    }
}

#[test]
fn single_site_routes_by_hand() {
    let c = ctx(44, 1);
    let v = onshell(&c, 0).roots[0];
    let u = cx(1.3, 0.4);
    let q = c.q();
    let r = determinant_routes(&c, &[u], &[v]).unwrap();
    // d Lambda(u|v)/dv = dU(v) [Y(u|v) - Q(u, v) (phi(u) + phi(1/(q u)))] / Q(u, v)^2
    let quv = c.big_u(u) - c.big_u(v);
    let y = c.phi(u).unwrap() * (c.big_u(u / q) - c.big_u(v)) + c.phi(1.0 / (q * u)).unwrap() * (c.big_u(q * u) - c.big_u(v)) + c.h(u);
    let hand = c.big_u_derivative(v) * (y - quv * (c.phi(u).unwrap() + c.phi(1.0 / (q * u)).unwrap())) / quv;
    assert!(rel_diff(r.direct, hand) < 1e-11);
    let y_self = c.phi(u).unwrap() * (c.big_u(u / q) - c.big_u(u)) + c.phi(1.0 / (q * u)).unwrap() * (c.big_u(q * u) - c.big_u(u)) + c.h(u);
    assert!(rel_diff(r.y_form, c.big_u_derivative(v) * y_self / quv) < 1e-11);
    assert_eq!(r.b_det_closed, cone());
    assert!(rel_diff(r.jacobian, r.direct) < 1e-9);
}

#[test]
fn determinant_formula_matches_pairing() {
    for n in 1..=3 {
        let c = ctx(50 + n as u64, n);
        for idx in 0..(1 << n) {
            let v = onshell(&c, idx);
            let res = scalar_product_determinant(&c, &offshell(idx as u64 + 1, n), &v, SqrtBranch::Principal).unwrap();
            assert!(res.relative_error <= SCALAR_TOL, "n={n} idx={idx}: {:e}", res.relative_error);
            assert_eq!(res.relative_error, rel_diff(res.lhs_direct, res.rhs_determinant));
        }
    }
}

#[test]
fn flipped_branch_fails_for_odd_n() {
    let c = ctx(61, 1);
    let v = onshell(&c, 0);
    let res = scalar_product_determinant(&c, &offshell(1, 1), &v, SqrtBranch::Flipped).unwrap();
    assert!(res.relative_error > 0.5);
}

#[test]
fn permutation_invariance() {
    let c = ctx(62, 3);
    let v = onshell(&c, 2);
    let us = offshell(4, 3);
    let perm = vec![us[2], us[0], us[1]];
    let a = scalar_product_determinant(&c, &us, &v, SqrtBranch::Principal).unwrap();
    let b = scalar_product_determinant(&c, &perm, &v, SqrtBranch::Principal).unwrap();
    assert!(rel_diff(a.rhs_determinant, b.rhs_determinant) < 1e-9);
    assert!(rel_diff(a.lhs_direct, b.lhs_direct) < 1e-9);
}

#[test]
fn orbit_partner_rescales_both_sides_by_f() {
    let c = ctx(63, 2);
    let v = onshell(&c, 1);
    let us = offshell(6, 2);
    let mut partner = us.clone();
    partner[0] = 1.0 / (c.q() * us[0]);
    let a = scalar_product_determinant(&c, &us, &v, SqrtBranch::Principal).unwrap();
    let b = scalar_product_determinant(&c, &partner, &v, SqrtBranch::Principal).unwrap();
    let expected = c.f(us[0]) / c.f(partner[0]);
    assert!(rel_diff(b.rhs_determinant / a.rhs_determinant, expected) < 1e-9);
    assert!(rel_diff(b.lhs_direct / a.lhs_direct, expected) < 1e-9);
}

#[test]
fn coincident_offshell_roots_are_degenerate() {
    let c = ctx(64, 2);
    let v = onshell(&c, 0);
    let u = cx(0.8, 0.5);
    let err = scalar_product_determinant(&c, &[u, 1.0 / (c.q() * u)], &v, SqrtBranch::Principal).unwrap_err();
    assert!(matches!(err, Error::DegenerateDenominator(_)));
}

#[test]
fn asymptotic_suite_extended() {
    for n in 1..=2 {
        let c = ctx(70 + n as u64, n);
        let v = onshell(&c, 1);
        let m: ModelParams<DoubleDouble> = c.params().convert();
        let cd = SpectralContext::new(m);
        let vs: Vec<Complex<DoubleDouble>> = v.roots.iter().map(|z| crate::real::convert(*z)).collect();
        let report = asymptotic_scalar_suite(&cd, &vs, &AsymptoticScalarOptions::default()).unwrap();
        assert!(report.passed(), "n={n}: {:?}", report.failures().collect::<Vec<_>>());
    }
}
