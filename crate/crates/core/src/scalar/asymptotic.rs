//! Large-`u` behaviour of the eigenvalue, the Jacobian matrix, its
//! determinant and the scalar product along `u_i = u a^i`.

use num_complex::Complex;

use super::eta::{eta_and_nu, xi_matrix, SqrtBranch};
use super::{d_y_d_uj, jacobian_form_matrix, product, removed};
use crate::error::Result;
use crate::params::q_pochhammer;
use crate::real::{cabs, convert, cpow, i_unit, Real};
use crate::report::{CheckRecord, VerificationReport};
use crate::spectral::SpectralContext;
use crate::linalg::{bilinear, CMatrix};
use crate::vectors::{build_bethe_vector, m_sequence, modified_b, reference_states, Side};

pub const ASYMPTOTIC_SCALAR_TOL: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticScalarOptions {
    /// Geometric ratio `a` of the spectral parameters.
    pub ratio: Complex<f64>,
    pub phase: f64,
    /// Increasing magnitudes of `u`; the last two fix the fitted exponent.
    pub magnitudes: Vec<f64>,
}

impl Default for AsymptoticScalarOptions {
    fn default() -> Self {
        Self { ratio: Complex::from_polar(1.3, 0.4), phase: 0.21, magnitudes: vec![1e2, 1e3, 1e4] }
    }
}

struct Point<T: Real> {
    lambda: T,
    entries: T,
    determinant: T,
    scalar_ratio: T,
    /// `ln |<Psi(vbar)|Psi(ubar)>|`.
    log_lhs: f64,
}

fn evaluate<T: Real>(ctx: &SpectralContext<T>, vs: &[Complex<T>], a: Complex<T>, u: Complex<T>, bra: &[Complex<T>]) -> Result<Point<T>> {
    let m = ctx.params();
    let b = m.boundary();
    let n = m.n();
    let ni = n as i32;
    let q = m.q();
    let c = q - q.inv();
    let us: Vec<_> = (1..=ni).map(|i| u * cpow(a, i)).collect();
    let lead = |z: Complex<T>| cpow(q * z * z, ni + 2) / cpow(c, 2 * ni);
    let diag = (b.kappa_tilde * b.tau_tilde).powu(2) + (b.kappa * b.tau).powu(2);
    let kktt = b.kappa * b.kappa_tilde * b.tau * b.tau_tilde;
    let r = b.mu * b.xi_tilde / (b.mu_tilde * b.xi);
    let (xi_inv, xi_q) = (xi_matrix(q.inv(), a, n), xi_matrix(q, a, n));
    let one = T::one();

    let mut lambda_dev = T::zero();
    let mut entry_dev = T::zero();
    for i in 0..n {
        let li = lead(us[i]);
        let ratio = ctx.lambda(us[i], vs)? / (li * diag);
        lambda_dev = lambda_dev.max(cabs(ratio - one));
        let qi = ctx.big_q_set(us[i], &removed(&us, i));
        let predicted: Vec<_> = (0..n).map(|j| li * kktt * (r * xi_inv[(i, j)] + xi_q[(i, j)] / r)).collect();
        let scale = predicted.iter().fold(T::zero(), |s, z| s.max(cabs(*z)));
        for (j, p) in predicted.iter().enumerate() {
            let got = d_y_d_uj(ctx, us[i], &us, j)? / qi;
            entry_dev = entry_dev.max(cabs(got - *p) / scale);
        }
    }

    // Rows of the Jacobian form and each creation operator are divided by
    // their leading growth so nothing overflows at large |u|.
    let g = jacobian_form_matrix(ctx, &us, vs)?;
    let g = CMatrix::from_fn(n, n, |i, j| g[(i, j)] / lead(us[i]));
    let nu = eta_and_nu(m, SqrtBranch::Principal)?.nu_product;
    let growth = |z: Complex<T>| cpow(z, 2 * ni + 3);
    let weights = product(&us, |z| lead(z) * cpow(c, 2 * ni - 1) / (ctx.f(z) * cpow(q, ni) * growth(z)));
    let determinant = cabs(g.det() * weights / nu - one);

    let mut ket = reference_states(m).ket;
    for (z, &k) in us.iter().zip(&m_sequence(n, Side::Ket)).rev() {
        ket = modified_b(*z, k, m)?.scale(growth(*z).inv()).mul_vec(&ket);
    }
    let lhs = bilinear(bra, &ket);
    let bra_ref = bilinear(bra, &reference_states(m).ket);
    let ratio = b.kappa_tilde * b.tau_tilde / (b.kappa * b.tau);
    let q2 = q * q;
    let pred = bra_ref / cpow(c, 2 * ni * ni)
        * (i_unit::<T>() * b.kappa * b.xi_tilde / (b.kappa_tilde * b.xi) * b.tau * b.tau).powu(n as u32)
        * q_pochhammer(-ratio * b.xi_tilde * b.mu_tilde / (b.xi * b.mu) * cpow(q, 1 - 3 * ni), q2, n)
        * q_pochhammer(-ratio * b.mu * b.xi_tilde / (b.xi * b.mu_tilde) * cpow(q, 1 - ni), q2, n)
        / q_pochhammer((b.xi_tilde / b.xi).powu(2) * cpow(q, 2 - 4 * ni), q2 * q2, n);
    let log_lhs = cabs(lhs).to_f64_lossy().ln() + (2 * n + 3) as f64 * us.iter().map(|z| cabs(*z).to_f64_lossy().ln()).sum::<f64>();

    Ok(Point {
        lambda: lambda_dev,
        entries: entry_dev,
        determinant,
        scalar_ratio: cabs(lhs / pred - one),
        log_lhs,
    })
}

/// Leading large-`u` coefficients against direct evaluation for on-shell `vs`.
/// Checks at the largest magnitude are hard, the others informational.
pub fn asymptotic_scalar_suite<T: Real>(
    ctx: &SpectralContext<T>,
    vs: &[Complex<T>],
    opts: &AsymptoticScalarOptions,
) -> Result<VerificationReport> {
    let n = ctx.n();
    let a: Complex<T> = convert(opts.ratio);
    let bra = build_bethe_vector(vs, Side::Bra, ctx.params())?;
    let mut report = VerificationReport::new();
    let mut log_lhs = Vec::new();
    let last = opts.magnitudes.len().saturating_sub(1);
    for (k, &mag) in opts.magnitudes.iter().enumerate() {
        let u: Complex<T> = convert(Complex::from_polar(mag, opts.phase));
        let p = evaluate(ctx, vs, a, u, &bra.components)?;
        log_lhs.push(p.log_lhs);
        for (name, value) in [
            ("asymptotic_lambda", p.lambda),
            ("asymptotic_jacobian_entries", p.entries),
            ("asymptotic_determinant", p.determinant),
            ("asymptotic_scalar_ratio", p.scalar_ratio),
        ] {
            let record = CheckRecord::new(name, value.to_f64_lossy(), ASYMPTOTIC_SCALAR_TOL)
                .with_input("n", n)
                .with_input("magnitude", mag)
                .with_input("precision", T::LABEL);
            report.push(if k == last { record } else { record.soft() });
        }
    }
    if log_lhs.len() >= 2 {
        let (m0, m1) = (opts.magnitudes[last - 1], opts.magnitudes[last]);
        let slope = (log_lhs[last] - log_lhs[last - 1]) / (m1 / m0).ln();
        report.push(
            CheckRecord::deviation("asymptotic_exponent", slope, (n * (2 * n + 3)) as f64, ASYMPTOTIC_SCALAR_TOL)
                .with_input("n", n)
                .with_input("magnitudes", (m0, m1))
                .with_input("precision", T::LABEL),
        );
    }
    Ok(report)
}
