//! Reference states, modified creation and annihilation operators and the
//! Bethe vectors built from them.

mod asymptotic;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{bilinear, vec_axpy, vec_norm, vec_sub};
use crate::operators::{double_row_operators, transfer_matrix, Operator};
use crate::params::{ModifiedConstants, ModelParams};
use crate::real::{cabs, cone, cpow, i_unit, Real};
use crate::report::{CheckRecord, VerificationReport};
use crate::spectral::SpectralContext;

pub use asymptotic::{asymptotic_operator_suite, AsymptoticOperators, ASYMPTOTIC_BB_TOL, DOLAN_GRADY_TOL, EIGEN_TOL};

/// Tolerance of the off-shell action of the transfer matrix on Bethe vectors.
pub const OFFSHELL_TOL: f64 = 1e-9;

/// `|N>` and `<N|`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceStates<T: Real> {
    pub ket: Vec<Complex<T>>,
    pub bra: Vec<Complex<T>>,
}

fn tensor_product<T: Real>(factors: &[[Complex<T>; 2]]) -> Vec<Complex<T>> {
    factors.iter().fold(vec![cone()], |acc, f| acc.iter().flat_map(|a| [*a * f[0], *a * f[1]]).collect())
}

pub fn reference_states<T: Real>(m: &ModelParams<T>) -> ReferenceStates<T> {
    let b = m.boundary();
    let n = m.n() as i32;
    let i = i_unit::<T>();
    let site = |j: usize, ket: bool| {
        let qj = cpow(m.q(), n - j as i32 - 1);
        let x = m.x()[j];
        let top = if ket {
            i * qj * b.mu * b.tau / (b.mu_tilde * b.tau_tilde * x)
        } else {
            i * qj * b.mu * b.tau_tilde * x / (b.mu_tilde * b.tau)
        };
        [top, cone()]
    };
    let ket: Vec<_> = (0..m.n()).map(|j| site(j, true)).collect();
    let bra: Vec<_> = (0..m.n()).map(|j| site(j, false)).collect();
    ReferenceStates { ket: tensor_product(&ket), bra: tensor_product(&bra) }
}

/// `B(u, m)` and `C(u, m)` at one spectral parameter and shift.
#[derive(Clone, Debug, PartialEq)]
pub struct ModifiedOperators<T: Real> {
    pub b: Operator<T>,
    pub c: Operator<T>,
}

fn gamma_checked<T: Real>(k: &ModifiedConstants<T>, idx: i32) -> Result<Complex<T>> {
    if k.is_singular(idx) {
        return Err(Error::SingularGamma(vec![idx]));
    }
    Ok(k.gamma(idx))
}

/// `B + s (w A - u^{-1} D) - s^2 C` with `w = q u (u^2 - u^{-2}) / (q u^2 - q^{-1} u^{-2})`.
fn combination<T: Real>(u: Complex<T>, q: Complex<T>, s: Complex<T>, ops: &crate::operators::BlockMonodromy<T>) -> Operator<T> {
    let u2 = u * u;
    let w = q * u * (u2 - u2.inv()) / (q * u2 - (q * u2).inv());
    let mut out = &ops.b + &ops.a.scale(s * w);
    out = &out - &ops.d.scale(s / u);
    &out - &ops.c.scale(s * s)
}

/// Modified creation operator `B(u, m)`; needs `gamma_{m+1} != 0`.
pub fn modified_b<T: Real>(u: Complex<T>, midx: i32, m: &ModelParams<T>) -> Result<Operator<T>> {
    let k = ModifiedConstants::unchecked(m);
    let g = gamma_checked(&k, midx + 1)?;
    let q = m.q();
    let ops = double_row_operators(u, m)?;
    Ok(combination(u, q, k.beta * cpow(q, midx), &ops).scale(q * u / g))
}

/// Modified annihilation operator `C(u, m)`; needs `gamma_{m-1} != 0`.
pub fn modified_c<T: Real>(u: Complex<T>, midx: i32, m: &ModelParams<T>) -> Result<Operator<T>> {
    let k = ModifiedConstants::unchecked(m);
    let g = gamma_checked(&k, midx - 1)?;
    let q = m.q();
    let ops = double_row_operators(u, m)?;
    Ok(combination(u, q, k.alpha * cpow(q, -midx), &ops).scale(-q * u / g))
}

pub fn modified_operators<T: Real>(u: Complex<T>, midx: i32, m: &ModelParams<T>) -> Result<ModifiedOperators<T>> {
    Ok(ModifiedOperators { b: modified_b(u, midx, m)?, c: modified_c(u, midx, m)? })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Ket,
    Bra,
}

/// A Bethe vector (column) or dual Bethe vector (row) with the shifts used.
#[derive(Clone, Debug, PartialEq)]
pub struct BetheVector<T: Real> {
    pub components: Vec<Complex<T>>,
    pub roots: Vec<Complex<T>>,
    pub side: Side,
    pub m_sequence: Vec<i32>,
}

impl<T: Real> BetheVector<T> {
    pub fn norm(&self) -> T {
        vec_norm(&self.components)
    }
}

/// Shifts paired with `roots[0..N]`: `2(N-1), ..., 0` for kets, `2, ..., 2N` for bras.
pub fn m_sequence(n: usize, side: Side) -> Vec<i32> {
    let n = n as i32;
    match side {
        Side::Ket => (1..=n).map(|k| 2 * (n - k)).collect(),
        Side::Bra => (1..=n).map(|k| 2 * k).collect(),
    }
}

/// `B(u_1, 2(N-1)) ... B(u_N, 0)|N>` or `<N|C(v_1, 2) ... C(v_N, 2N)`.
pub fn build_bethe_vector<T: Real>(roots: &[Complex<T>], side: Side, m: &ModelParams<T>) -> Result<BetheVector<T>> {
    if roots.len() != m.n() {
        return Err(Error::InvalidInput(format!("{} roots for a chain of length {}", roots.len(), m.n())));
    }
    let refs = reference_states(m);
    let seq = m_sequence(m.n(), side);
    let components = match side {
        Side::Ket => {
            let mut v = refs.ket;
            for (u, &k) in roots.iter().zip(&seq).rev() {
                v = modified_b(*u, k, m)?.mul_vec(&v);
            }
            v
        }
        Side::Bra => {
            let mut w = refs.bra;
            for (u, &k) in roots.iter().zip(&seq) {
                w = modified_c(*u, k, m)?.vec_mul(&w);
            }
            w
        }
    };
    Ok(BetheVector { components, roots: roots.to_vec(), side, m_sequence: seq })
}

/// Bilinear `<bra|ket>`, no complex conjugation.
pub fn pairing<T: Real>(bra: &BetheVector<T>, ket: &BetheVector<T>) -> Result<Complex<T>> {
    if bra.side != Side::Bra || ket.side != Side::Ket {
        return Err(Error::InvalidInput("pairing expects (bra, ket)".into()));
    }
    Ok(bilinear(&bra.components, &ket.components))
}

/// `||t(u)|Psi> - Lambda|Psi> - sum_i c_i |Psi({u, ubar_i})>||` for one side,
/// relative to the largest term.
pub fn offshell_defect<T: Real>(roots: &[Complex<T>], side: Side, ctx: &SpectralContext<T>, u: Complex<T>) -> Result<T> {
    let m = ctx.params();
    let n = roots.len();
    let mut coefficients = Vec::with_capacity(n);
    let factor = |a: Complex<T>, b: Complex<T>| -> Result<Complex<T>> {
        let (ua, ub) = (ctx.big_u(a), ctx.big_u(b));
        let d = ua - ub;
        if cabs(d) <= T::epsilon() * T::of(64.0) * cabs(ua).max(cabs(ub)).max(T::one()) {
            return Err(Error::PoleCollision("u_i, {u, ubar_i}"));
        }
        Ok(d)
    };
    for i in 0..n {
        let mut den = factor(roots[i], u)?;
        for j in (0..n).filter(|&j| j != i) {
            den = den * factor(roots[i], roots[j])?;
        }
        coefficients.push(ctx.f(u) / ctx.f(roots[i]) * ctx.y(roots[i], roots)? / den);
    }
    let psi = build_bethe_vector(roots, side, m)?;
    let t = transfer_matrix(u, m)?;
    let lhs = match side {
        Side::Ket => t.mul_vec(&psi.components),
        Side::Bra => t.vec_mul(&psi.components),
    };
    let lambda = ctx.lambda(u, roots)?;
    let mut rhs: Vec<_> = psi.components.iter().map(|z| *z * lambda).collect();
    let mut scale = vec_norm(&lhs).max(vec_norm(&rhs));
    for (i, c) in coefficients.into_iter().enumerate() {
        let mut swapped = roots.to_vec();
        swapped[i] = u;
        let other = build_bethe_vector(&swapped, side, m)?;
        scale = scale.max(cabs(c) * other.norm());
        vec_axpy(&mut rhs, c, &other.components);
    }
    Ok(vec_norm(&vec_sub(&lhs, &rhs)) / scale)
}

/// Off-shell relations for the ket and the bra built on `roots`, probed at `u`.
pub fn offshell_residual<T: Real>(roots: &[Complex<T>], ctx: &SpectralContext<T>, u: Complex<T>) -> Result<VerificationReport> {
    let mut report = VerificationReport::new();
    for (name, side) in [("offshell_ket", Side::Ket), ("offshell_bra", Side::Bra)] {
        let value = offshell_defect(roots, side, ctx, u)?;
        report.push(
            CheckRecord::new(name, value.to_f64_lossy(), OFFSHELL_TOL)
                .with_input("n", ctx.n())
                .with_input("u", crate::real::to_pair(u)),
        );
    }
    Ok(report)
}
