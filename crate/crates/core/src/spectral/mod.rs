//! Scalar functions of the spectral parameter: `F`, `U`, `Q`, `V`, `phi`, `H`,
//! the transfer-matrix eigenvalue `Lambda` and the Bethe function `Y`, plus
//! the Bethe-root solver built on the TQ relation.

mod record;
mod solver;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::real::{cabs, cone, cpow, csqrt, Real};

pub use record::BetheRoots;
pub use solver::{
    lift_u_to_u, solve_all_bethe_roots, solve_bethe_roots, transfer_eigenstate, transfer_eigenstates, Eigenstate, SolverOptions, ONSHELL_TOL,
};

/// Model parameters with the constants of `phi` and `H` precomputed.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralContext<T: Real> {
    params: ModelParams<T>,
    q: Complex<T>,
    /// `(q - q^{-1})^2`.
    c2: Complex<T>,
    /// `-kappa kappa~ tau tau~`.
    phi_prefactor: Complex<T>,
    /// `(kappa tau)^2 + (kappa~ tau~)^2 + kappa kappa~ tau tau~ (...)`.
    h_prefactor: Complex<T>,
}

/// Values of the structure functions at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StructureValues<T: Real> {
    pub f: Complex<T>,
    pub u: Complex<T>,
    /// `Q(u, v)` when `v` was given.
    pub q: Option<Complex<T>>,
    pub v: Complex<T>,
}

impl<T: Real> SpectralContext<T> {
    pub fn new(params: ModelParams<T>) -> Self {
        let q = params.q();
        let b = *params.boundary();
        let c = q - q.inv();
        let n = params.n() as i32;
        let kktt = b.kappa * b.kappa_tilde * b.tau * b.tau_tilde;
        let h_prefactor = (b.kappa * b.tau).powu(2)
            + (b.kappa_tilde * b.tau_tilde).powu(2)
            + kktt
                * (b.xi * b.mu_tilde / (b.xi_tilde * b.mu) * cpow(q, n + 1)
                    + b.xi_tilde * b.mu / (b.xi * b.mu_tilde) * cpow(q, -n - 1));
        Self { params, q, c2: c * c, phi_prefactor: -kktt, h_prefactor }
    }

    pub fn params(&self) -> &ModelParams<T> {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn q(&self) -> Complex<T> {
        self.q
    }

    /// `F(u) = u^{-1} (q^2 u^2 - q^{-2} u^{-2}) / (q - q^{-1})`.
    pub fn f(&self, u: Complex<T>) -> Complex<T> {
        let q = self.q;
        let w = q * u * q * u;
        (w - w.inv()) / (u * (q - q.inv()))
    }

    /// `U(u) = (q u^2 + q^{-1} u^{-2}) / (q - q^{-1})^2`.
    pub fn big_u(&self, u: Complex<T>) -> Complex<T> {
        let w = self.q * u * u;
        (w + w.inv()) / self.c2
    }

    /// `dU/du`.
    pub fn big_u_derivative(&self, u: Complex<T>) -> Complex<T> {
        let w = self.q * u * u;
        (w - w.inv()) * T::of(2.0) / (self.c2 * u)
    }

    /// `Q(u, v) = U(u) - U(v)`.
    pub fn big_q(&self, u: Complex<T>, v: Complex<T>) -> Complex<T> {
        self.big_u(u) - self.big_u(v)
    }

    /// `Q(u, vbar) = prod_j Q(u, v_j)`.
    pub fn big_q_set(&self, u: Complex<T>, vs: &[Complex<T>]) -> Complex<T> {
        vs.iter().fold(cone(), |acc, v| acc * self.big_q(u, *v))
    }

    /// Same product from a precomputed `U(u)`.
    pub(crate) fn q_set_from_u(&self, uu: Complex<T>, vs: &[Complex<T>]) -> Complex<T> {
        vs.iter().fold(cone(), |acc, v| acc * (uu - self.big_u(*v)))
    }

    /// `V(u) = prod_i Q(q^{1/2} u, q^{-1/2} x_i)`. Both arguments enter only
    /// through `U`, where the square root of `q` appears squared.
    pub fn v(&self, u: Complex<T>) -> Complex<T> {
        let q = self.q;
        let w = q * q * u * u;
        let uu = (w + w.inv()) / self.c2;
        self.params.x().iter().fold(cone(), |acc, x| {
            let x2 = *x * *x;
            acc * (uu - (x2 + x2.inv()) / self.c2)
        })
    }

    fn crossing_denominator(&self, u: Complex<T>) -> Result<Complex<T>> {
        let (a, b) = (self.q * u * u, (self.q * u * u).inv());
        let den = a - b;
        if cabs(den) <= T::epsilon() * T::of(64.0) * (cabs(a) + cabs(b)) {
            return Err(Error::CrossingSingularity { re: u.re.to_f64_lossy(), im: u.im.to_f64_lossy() });
        }
        Ok(den)
    }

    pub fn phi(&self, u: Complex<T>) -> Result<Complex<T>> {
        let b = self.params.boundary();
        let ui = u.inv();
        let q = self.q;
        let w = q * u * q * u;
        let num = self.phi_prefactor
            * (b.xi_tilde * u + (b.xi_tilde * u).inv())
            * (u / b.xi + b.xi * ui)
            * (b.mu * u + (b.mu * u).inv())
            * (u / b.mu_tilde + b.mu_tilde * ui)
            * (w - w.inv());
        Ok(num / self.crossing_denominator(u)? * self.v(u))
    }

    pub fn h(&self, u: Complex<T>) -> Complex<T> {
        let q = self.q;
        let w = q * u * q * u;
        let u2 = u * u;
        self.h_prefactor * (u2 - u2.inv()) * (w - w.inv()) * self.v(u) * self.v((q * u).inv())
    }

    /// `phi(u) Q(u/q, vbar) + phi(1/(q u)) Q(q u, vbar)`, the root-dependent
    /// part of the Bethe function.
    pub(crate) fn y_dynamic(&self, u: Complex<T>, vs: &[Complex<T>]) -> Result<Complex<T>> {
        let q = self.q;
        Ok(self.phi(u)? * self.big_q_set(u / q, vs) + self.phi((q * u).inv())? * self.big_q_set(q * u, vs))
    }

    /// `Y(u|vbar) = phi(u) Q(u/q, vbar) + phi(1/(q u)) Q(q u, vbar) + H(u)`.
    pub fn y(&self, u: Complex<T>, vs: &[Complex<T>]) -> Result<Complex<T>> {
        Ok(self.y_dynamic(u, vs)? + self.h(u))
    }

    /// `Lambda(u|vbar) = Y(u|vbar) / Q(u, vbar)`.
    pub fn lambda(&self, u: Complex<T>, vs: &[Complex<T>]) -> Result<Complex<T>> {
        let uu = self.big_u(u);
        for (index, v) in vs.iter().enumerate() {
            let d = uu - self.big_u(*v);
            if cabs(d) <= T::epsilon() * T::of(64.0) * cabs(uu).max(T::one()) {
                return Err(Error::PoleAtRoot { index });
            }
        }
        Ok(self.y(u, vs)? / self.q_set_from_u(uu, vs))
    }

    /// Local scale `max(|phi(u) Q(u/q, vbar)|, |H(u)|)` for judging `|Y(u|vbar)|`.
    pub fn y_scale(&self, u: Complex<T>, vs: &[Complex<T>]) -> Result<T> {
        let a = cabs(self.phi(u)? * self.big_q_set(u / self.q, vs));
        Ok(a.max(cabs(self.h(u))))
    }

    /// `q^{1/2}` on the principal branch; every formula that needs it uses this one.
    pub fn q_half(&self) -> Complex<T> {
        csqrt(self.q)
    }
}

pub fn eval_structure_functions<T: Real>(u: Complex<T>, v: Option<Complex<T>>, ctx: &SpectralContext<T>) -> Result<StructureValues<T>> {
    if cabs(u) == T::zero() {
        return Err(Error::SingularParameter("spectral parameter must be nonzero"));
    }
    Ok(StructureValues { f: ctx.f(u), u: ctx.big_u(u), q: v.map(|v| ctx.big_q(u, v)), v: ctx.v(u) })
}

/// `(phi(u), H(u))`.
pub fn eval_phi_h<T: Real>(u: Complex<T>, ctx: &SpectralContext<T>) -> Result<(Complex<T>, Complex<T>)> {
    Ok((ctx.phi(u)?, ctx.h(u)))
}

pub fn eigenvalue_lambda<T: Real>(u: Complex<T>, roots: &[Complex<T>], ctx: &SpectralContext<T>) -> Result<Complex<T>> {
    ctx.lambda(u, roots)
}

pub fn bethe_function_y<T: Real>(u: Complex<T>, roots: &[Complex<T>], ctx: &SpectralContext<T>) -> Result<Complex<T>> {
    ctx.y(u, roots)
}
