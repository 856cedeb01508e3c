//! Boundary normalization `eta` of the determinant formula and the constant
//! `nu_N` of its large-`u` limit.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::params::{ModelParams, GENERICITY_TOL};
use crate::real::{cabs, cone, cpow, i_unit, Real};

/// Sign convention for the unsquared boundary parameters entering `eta`.
/// `Flipped` multiplies `eta` by `(-1)^N`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SqrtBranch {
    #[default]
    Principal,
    Flipped,
}

impl SqrtBranch {
    pub fn other(self) -> Self {
        match self {
            Self::Principal => Self::Flipped,
            Self::Flipped => Self::Principal,
        }
    }
}

/// Default geometric ratio for the `Xi` matrices.
pub fn default_ratio<T: Real>() -> Complex<T> {
    Complex::from_polar(T::of(1.3), T::of(0.4))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EtaNu<T: Real> {
    pub eta: Complex<T>,
    /// `nu_N` as an `N x N` determinant.
    pub nu_determinant: Complex<T>,
    /// `nu_N` as a product of q-Pochhammer symbols.
    pub nu_product: Complex<T>,
}

/// `(b; q)_n`, failing when a factor vanishes.
fn pochhammer_checked<T: Real>(b: Complex<T>, q: Complex<T>, n: usize, name: &'static str) -> Result<Complex<T>> {
    let mut acc = cone::<T>();
    for k in 0..n {
        let term = b * cpow(q, k as i32);
        let f = cone::<T>() - term;
        if cabs(f) <= T::of(GENERICITY_TOL) * cabs(term).max(T::one()) {
            return Err(Error::PochhammerZero(name));
        }
        acc = acc * f;
    }
    Ok(acc)
}

/// `Xi^p_{ij} = prod_{k != j} (p a^{2i} - p^{-1} a^{2k}) / prod_{k != i} (a^{2i} - a^{2k})`, indices from 1.
pub fn xi_matrix<T: Real>(p: Complex<T>, a: Complex<T>, n: usize) -> CMatrix<T> {
    let a2 = |k: usize| cpow(a, 2 * k as i32);
    CMatrix::from_fn(n, n, |i, j| {
        let (i, j) = (i + 1, j + 1);
        let num = (1..=n).filter(|&k| k != j).fold(cone::<T>(), |acc, k| acc * (p * a2(i) - a2(k) / p));
        let den = (1..=n).filter(|&k| k != i).fold(cone::<T>(), |acc, k| acc * (a2(i) - a2(k)));
        num / den
    })
}

/// The matrix whose determinant is `nu_N`.
pub fn nu_matrix<T: Real>(m: &ModelParams<T>, a: Complex<T>) -> CMatrix<T> {
    let b = m.boundary();
    let n = m.n();
    let q = m.q();
    let diag = (b.kappa_tilde * b.tau_tilde).powu(2) + (b.kappa * b.tau).powu(2);
    let kktt = b.kappa * b.kappa_tilde * b.tau * b.tau_tilde;
    let r = b.mu * b.xi_tilde / (b.mu_tilde * b.xi);
    let (xi_inv, xi_q) = (xi_matrix(q.inv(), a, n), xi_matrix(q, a, n));
    CMatrix::from_fn(n, n, |i, j| {
        let d = if i == j { diag } else { Complex::new(T::zero(), T::zero()) };
        d + kktt * (r * xi_inv[(i, j)] + xi_q[(i, j)] / r)
    })
}

/// `eta` on the requested branch and both forms of `nu_N`.
pub fn eta_and_nu<T: Real>(m: &ModelParams<T>, branch: SqrtBranch) -> Result<EtaNu<T>> {
    let b = m.boundary();
    let n = m.n();
    let ni = n as i32;
    let q = m.q();
    let c = q - q.inv();
    let ratio = b.kappa_tilde * b.tau_tilde / (b.kappa * b.tau);
    let q2 = q * q;

    let head = (i_unit::<T>() * b.xi_tilde / (cpow(q, ni) * c * b.kappa_tilde * b.kappa * b.xi)).powu(n as u32);
    let top = pochhammer_checked(-ratio * b.mu_tilde * b.xi_tilde / (b.mu * b.xi) * cpow(q, 1 - 3 * ni), q2, n, "eta numerator")?;
    let den1 = pochhammer_checked((b.xi_tilde / b.xi).powu(2) * cpow(q, 2 - 4 * ni), q2 * q2, n, "eta denominator (q^4)")?;
    let den2 = pochhammer_checked(-ratio * b.mu_tilde * b.xi / (b.mu * b.xi_tilde) * cpow(q, 1 - ni), q2, n, "eta denominator (q^2)")?;
    let mut eta = head * top / (den1 * den2);
    if branch == SqrtBranch::Flipped && n % 2 == 1 {
        eta = -eta;
    }

    let other = pochhammer_checked(-ratio * b.mu * b.xi_tilde / (b.mu_tilde * b.xi) * cpow(q, 1 - ni), q2, n, "nu factor")?;
    let nu_product = (b.kappa * b.tau).powu(2 * n as u32) * den2 * other;
    let nu_determinant = nu_matrix(m, default_ratio()).det();
    Ok(EtaNu { eta, nu_determinant, nu_product })
}

/// `nu_N` at a chosen geometric ratio; the determinant does not depend on it.
pub fn nu_determinant_at<T: Real>(m: &ModelParams<T>, a: Complex<T>) -> Complex<T> {
    nu_matrix(m, a).det()
}
