//! Finite-dimensional realizations: R- and K-matrices, single- and
//! double-row monodromies, the transfer matrix and the Hamiltonian.
//!
//! Tensor order is `aux (x) site_1 (x) ... (x) site_N` with the auxiliary
//! space slowest; basis vector `|0>` is spin up.

mod checks;
mod hamiltonian;
mod local;
mod monodromy;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::params::ModelParams;
use crate::real::{cabs, cone, czero, Real};

pub use checks::{
    check_reflection_equations, commutativity_residual, ALGEBRA_TOL, crossing_residual, reflection_residuals, yang_baxter_residual,
};
pub(crate) use checks::random_spectral;
pub use hamiltonian::{hamiltonian_direct, hamiltonian_from_transfer, pauli};
pub use monodromy::{
    double_row_matrix, double_row_operators, hat_monodromy, monodromy, transfer_matrix, transfer_matrix_derivative,
    BlockMonodromy,
};

/// Dense operator on the quantum space or on `aux (x) quantum`.
pub type Operator<T> = CMatrix<T>;

fn check_u<T: Real>(u: Complex<T>) -> Result<()> {
    if cabs(u) == T::zero() || !(u.re.is_finite() && u.im.is_finite()) {
        return Err(Error::SingularParameter("spectral parameter must be finite and nonzero"));
    }
    Ok(())
}

fn normalization<T: Real>(q: Complex<T>) -> Result<Complex<T>> {
    let c = q - q.inv();
    if cabs(c) <= T::epsilon() * T::of(16.0) * cabs(q) {
        return Err(Error::SingularParameter("q - 1/q = 0"));
    }
    Ok(c)
}

fn r_entries<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>) -> Operator<T> {
    let z = czero();
    CMatrix::from_rows(&[vec![a, z, z, z], vec![z, b, c, z], vec![z, c, b, z], vec![z, z, z, a]])
}

/// Trigonometric R-matrix normalized by `1/(q - q^{-1})`.
pub fn r_matrix<T: Real>(u: Complex<T>, q: Complex<T>) -> Result<Operator<T>> {
    check_u(u)?;
    let c = normalization(q)?;
    let (ui, qi) = (u.inv(), q.inv());
    Ok(r_entries((q * u - qi * ui) / c, (u - ui) / c, cone()))
}

/// `dR/du`.
pub fn r_matrix_derivative<T: Real>(u: Complex<T>, q: Complex<T>) -> Result<Operator<T>> {
    check_u(u)?;
    let c = normalization(q)?;
    let u2i = (u * u).inv();
    Ok(r_entries((q + q.inv() * u2i) / c, (Complex::new(T::one(), T::zero()) + u2i) / c, czero()))
}

/// Right boundary matrix `K^-(u)`.
pub fn k_minus<T: Real>(u: Complex<T>, m: &ModelParams<T>) -> Result<Operator<T>> {
    check_u(u)?;
    let e = m.sklyanin();
    let [_, _, tau2, tau_t2] = m.squares();
    let ui = u.inv();
    let off = u * u - ui * ui;
    Ok(CMatrix::from_rows(&[
        vec![e.nu_minus * u + e.nu_plus * ui, tau2 * off],
        vec![tau_t2 * off, e.nu_minus * ui + e.nu_plus * u],
    ]))
}

pub fn k_minus_derivative<T: Real>(u: Complex<T>, m: &ModelParams<T>) -> Result<Operator<T>> {
    check_u(u)?;
    let e = m.sklyanin();
    let [_, _, tau2, tau_t2] = m.squares();
    let u2i = (u * u).inv();
    let two = T::of(2.0);
    let off = (u + u2i / u) * two;
    Ok(CMatrix::from_rows(&[
        vec![e.nu_minus - e.nu_plus * u2i, tau2 * off],
        vec![tau_t2 * off, e.nu_plus - e.nu_minus * u2i],
    ]))
}

/// Left boundary matrix `K^+(u)`.
pub fn k_plus<T: Real>(u: Complex<T>, m: &ModelParams<T>) -> Result<Operator<T>> {
    check_u(u)?;
    let e = m.sklyanin();
    let [kappa2, kappa_t2, _, _] = m.squares();
    let q = m.q();
    let (qu, qui) = (q * u, (q * u).inv());
    let off = qu * qu - qui * qui;
    Ok(CMatrix::from_rows(&[
        vec![e.eps_plus * qu + e.eps_minus * qui, kappa_t2 * off],
        vec![kappa2 * off, e.eps_minus * qu + e.eps_plus * qui],
    ]))
}

pub fn k_plus_derivative<T: Real>(u: Complex<T>, m: &ModelParams<T>) -> Result<Operator<T>> {
    check_u(u)?;
    let e = m.sklyanin();
    let [kappa2, kappa_t2, _, _] = m.squares();
    let q = m.q();
    let ui = u.inv();
    let qi = q.inv();
    let two = T::of(2.0);
    let off = (q * q * u + qi * qi * ui * ui * ui) * two;
    Ok(CMatrix::from_rows(&[
        vec![e.eps_plus * q - e.eps_minus * qi * ui * ui, kappa_t2 * off],
        vec![kappa2 * off, e.eps_minus * q - e.eps_plus * qi * ui * ui],
    ]))
}
