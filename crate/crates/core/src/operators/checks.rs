//! Residuals of the defining algebraic relations.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{k_minus, k_plus, r_matrix, transfer_matrix, Operator};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::params::ModelParams;
use crate::real::{convert, Real};
use crate::report::{CheckRecord, VerificationReport};

/// Tolerance for the Yang-Baxter, reflection and dual reflection equations.
pub const ALGEBRA_TOL: f64 = 1e-12;

/// `||lhs - rhs|| / prod ||factors||`.
fn residual<T: Real>(lhs: &Operator<T>, rhs: &Operator<T>, factors: &[&Operator<T>]) -> T {
    let scale = factors.iter().fold(T::one(), |acc, f| acc * f.frobenius_norm());
    (lhs - rhs).frobenius_norm() / scale
}

/// `R_12(u/v) R_13(u) R_23(v) = R_23(v) R_13(u) R_12(u/v)` on `C^2 (x) C^2 (x) C^2`.
pub fn yang_baxter_residual<T: Real>(u: Complex<T>, v: Complex<T>, q: Complex<T>) -> Result<T> {
    let id = CMatrix::<T>::identity(2);
    let r12 = r_matrix(u / v, q)?.kron(&id);
    let r23 = id.kron(&r_matrix(v, q)?);
    // R_13 = P_23 R_12 P_23
    let p23 = id.kron(&r_matrix(Complex::new(T::one(), T::zero()), q)?);
    let r13 = p23.matmul(&r_matrix(u, q)?.kron(&id)).matmul(&p23);
    let lhs = r12.matmul(&r13).matmul(&r23);
    let rhs = r23.matmul(&r13).matmul(&r12);
    Ok(residual(&lhs, &rhs, &[&r12, &r13, &r23]))
}

/// Residuals of the reflection equation for `K^-` and the dual one for `K^+`.
pub fn reflection_residuals<T: Real>(m: &ModelParams<T>, u: Complex<T>, v: Complex<T>) -> Result<(T, T)> {
    let q = m.q();
    let id = CMatrix::<T>::identity(2);
    let r_minus = r_matrix(u / v, q)?;
    let r_plus = r_matrix(u * v, q)?;
    let k1 = k_minus(u, m)?.kron(&id);
    let k2 = id.kron(&k_minus(v, m)?);
    let lhs = r_minus.matmul(&k1).matmul(&r_plus).matmul(&k2);
    let rhs = k2.matmul(&r_plus).matmul(&k1).matmul(&r_minus);
    let re = residual(&lhs, &rhs, &[&r_minus, &k1, &r_plus, &k2]);

    let r_vu = r_matrix(v / u, q)?;
    let r_cross = r_matrix((q * q * u * v).inv(), q)?;
    let k1 = k_plus(u, m)?.kron(&id);
    let k2 = id.kron(&k_plus(v, m)?);
    let lhs = r_vu.matmul(&k1).matmul(&r_cross).matmul(&k2);
    let rhs = k2.matmul(&r_cross).matmul(&k1).matmul(&r_vu);
    let dre = residual(&lhs, &rhs, &[&r_vu, &k1, &r_cross, &k2]);
    Ok((re, dre))
}

/// `||[t(u), t(v)]|| / (||t(u)|| ||t(v)||)`.
pub fn commutativity_residual<T: Real>(m: &ModelParams<T>, u: Complex<T>, v: Complex<T>) -> Result<T> {
    let tu = transfer_matrix(u, m)?;
    let tv = transfer_matrix(v, m)?;
    Ok(tu.commutator(&tv).frobenius_norm() / (tu.frobenius_norm() * tv.frobenius_norm()))
}

/// `||t(u) - t(1/(q u))|| / ||t(u)||`.
pub fn crossing_residual<T: Real>(m: &ModelParams<T>, u: Complex<T>) -> Result<T> {
    let tu = transfer_matrix(u, m)?;
    let tc = transfer_matrix((m.q() * u).inv(), m)?;
    Ok((&tu - &tc).frobenius_norm() / tu.frobenius_norm())
}

/// Random spectral parameter with modulus in `[0.5, 2]`.
pub(crate) fn random_spectral(rng: &mut ChaCha8Rng) -> Complex<f64> {
    let r = rng.gen_range(0.5f64.ln()..2.0f64.ln()).exp();
    Complex::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Reflection and dual reflection residuals over `trials` random `(u, v)`;
/// the first trial uses `u = v`.
pub fn check_reflection_equations<T: Real>(m: &ModelParams<T>, trials: usize, seed: u64) -> Result<VerificationReport> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport::new();
    for trial in 0..trials {
        let u = random_spectral(&mut rng);
        let v = if trial == 0 { u } else { random_spectral(&mut rng) };
        let (re, dre) = reflection_residuals(m, convert(u), convert(v))?;
        for (name, value) in [("reflection_equation", re), ("dual_reflection_equation", dre)] {
            report.push(
                CheckRecord::new(name, value.to_f64_lossy(), ALGEBRA_TOL)
                    .with_input("seed", seed)
                    .with_input("u", (u.re, u.im))
                    .with_input("v", (v.re, v.im)),
            );
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{sample_generic_params, ChainMode};

    #[test]
    fn yang_baxter_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let (u, v, q) = (random_spectral(&mut rng), random_spectral(&mut rng), random_spectral(&mut rng));
            assert!(yang_baxter_residual(u, v, q).unwrap() < ALGEBRA_TOL);
        }
    }

    #[test]
    fn yang_baxter_detects_wrong_argument() {
        let (u, v, q) = (Complex::new(0.7, 0.3), Complex::new(1.2, -0.5), Complex::new(0.9, 0.6));
        let id = CMatrix::<f64>::identity(2);
        let r12 = r_matrix(u * v, q).unwrap().kron(&id);
        let r23 = id.kron(&r_matrix(v, q).unwrap());
        let p23 = id.kron(&r_matrix(Complex::new(1.0, 0.0), q).unwrap());
        let r13 = p23.matmul(&r_matrix(u, q).unwrap().kron(&id)).matmul(&p23);
        let bad = residual(&r12.matmul(&r13).matmul(&r23), &r23.matmul(&r13).matmul(&r12), &[&r12, &r13, &r23]);
        assert!(bad > 1e-3);
    }

    #[test]
    fn reflection_report() {
        let m: ModelParams<f64> = sample_generic_params(2, 2, ChainMode::Inhomogeneous).unwrap();
        let report = check_reflection_equations(&m, 10, 9).unwrap();
        assert_eq!(report.records.len(), 20);
        assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
        assert!(check_reflection_equations(&m, 0, 9).is_err());
    }

    #[test]
    fn transfer_matrices_commute_and_are_crossing_invariant() {
        for n in 1..=3 {
            let m: ModelParams<f64> = sample_generic_params(n as u64, n, ChainMode::Inhomogeneous).unwrap();
            let (u, v) = (Complex::new(0.8, 0.4), Complex::new(-0.3, 1.1));
            assert!(commutativity_residual(&m, u, v).unwrap() < 1e-12);
            assert!(crossing_residual(&m, u).unwrap() < 1e-12);
        }
    }
}
