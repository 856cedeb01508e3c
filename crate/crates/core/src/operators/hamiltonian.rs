use num_complex::Complex;

use super::local::embed;
use super::{transfer_matrix_derivative, Operator};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::params::{derive_hamiltonian_couplings, ModelParams};
use crate::real::{cone, czero, Real};

/// Condition number above which `t(1)` counts as singular.
const TRANSFER_CONDITION_LIMIT: f64 = 1e12;

/// `(sigma^3, sigma^+, sigma^-)` with `|0>` spin up.
pub fn pauli<T: Real>() -> [Operator<T>; 3] {
    let (o, z) = (cone::<T>(), czero::<T>());
    [
        CMatrix::from_rows(&[vec![o, z], vec![z, -o]]),
        CMatrix::from_rows(&[vec![z, o], vec![z, z]]),
        CMatrix::from_rows(&[vec![z, z], vec![o, z]]),
    ]
}

/// Spin-chain Hamiltonian assembled term by term from the boundary couplings.
pub fn hamiltonian_direct<T: Real>(m: &ModelParams<T>) -> Result<Operator<T>> {
    let n = m.n();
    if n < 2 {
        return Err(Error::InvalidInput("the Hamiltonian needs N >= 2".into()));
    }
    let h = derive_hamiltonian_couplings(m)?;
    let q = m.q();
    let delta = (q + q.inv()) / T::of(2.0);
    let [s3, sp, sm] = pauli::<T>();
    let two = Complex::new(T::of(2.0), T::zero());
    // sigma^x sigma^x + sigma^y sigma^y + Delta sigma^3 sigma^3
    let bond = &(&sp.kron(&sm) + &sm.kron(&sp)).scale(two) + &s3.kron(&s3).scale(delta);
    let left = &(&s3.scale(h.epsilon) + &sm.scale(h.kappa_minus)) + &sp.scale(h.kappa_plus);
    let right = &(&s3.scale(h.nu) + &sm.scale(h.tau_minus)) + &sp.scale(h.tau_plus);
    let mut out = &embed(&left, 0, n) + &embed(&right, n - 1, n);
    for j in 0..n - 1 {
        out = &out + &embed(&bond, j, n);
    }
    Ok(out)
}

/// Hamiltonian recovered from the logarithmic derivative of the transfer
/// matrix at `u = 1` on the homogeneous chain.
pub fn hamiltonian_from_transfer<T: Real>(m: &ModelParams<T>) -> Result<Operator<T>> {
    if !m.is_homogeneous() {
        return Err(Error::InvalidInput("transfer-matrix reconstruction needs x_i = 1".into()));
    }
    let (t, dt) = transfer_matrix_derivative(cone(), m)?;
    let lu = t.lu();
    let condition = lu.condition_1(&t);
    if !(condition.to_f64_lossy() < TRANSFER_CONDITION_LIMIT) {
        return Err(Error::NonInvertibleTransfer { condition: condition.to_f64_lossy() });
    }
    let inv = lu.inverse().map_err(|_| Error::NonInvertibleTransfer { condition: f64::INFINITY })?;
    let q = m.q();
    let c = q - q.inv();
    let s = q + q.inv();
    let two = T::of(2.0);
    let n = Complex::new(T::of(m.n() as f64), T::zero());
    let shift = n * s / two + c * c / (s * two);
    Ok(&dt.matmul(&inv).scale(c / two) - &CMatrix::identity(m.dim()).scale(shift))
}
