//! Scalar product of an on-shell dual Bethe vector with an off-shell Bethe
//! vector: the homogeneous linear system it satisfies, the Jacobian matrix
//! `M`, equivalent forms of `det M` and the closed determinant formula.

mod asymptotic;
mod eta;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::real::{cabs, cone, czero, rel_diff, Real};
use crate::report::{CheckRecord, VerificationReport};
use crate::spectral::{BetheRoots, SpectralContext, ONSHELL_TOL};
use crate::vectors::{build_bethe_vector, pairing, reference_states, BetheVector, Side};

pub use asymptotic::{asymptotic_scalar_suite, AsymptoticScalarOptions, ASYMPTOTIC_SCALAR_TOL};
pub use eta::{default_ratio, eta_and_nu, nu_determinant_at, nu_matrix, xi_matrix, EtaNu, SqrtBranch};

/// `|det L|` relative to the product of column maxima.
pub const DET_L_TOL: f64 = 1e-9;
/// Agreement of the two routes to `M`.
pub const JACOBIAN_TOL: f64 = 1e-9;
/// Agreement of the four forms of `det M`.
pub const ROUTES_TOL: f64 = 1e-8;
/// `det B` against its closed form.
pub const B_MATRIX_TOL: f64 = 1e-10;
/// Direct pairing against the determinant formula.
pub const SCALAR_TOL: f64 = 1e-7;

/// `set` without entry `i`.
pub fn removed<T: Real>(set: &[Complex<T>], i: usize) -> Vec<Complex<T>> {
    set.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, z)| *z).collect()
}

/// `set` with entry `i` replaced by `z`.
fn replaced<T: Real>(set: &[Complex<T>], i: usize, z: Complex<T>) -> Vec<Complex<T>> {
    let mut out = set.to_vec();
    out[i] = z;
    out
}

/// `Delta(ubar) = prod_{i<j} Q(u_i, u_j)`.
pub fn delta<T: Real>(ctx: &SpectralContext<T>, us: &[Complex<T>]) -> Complex<T> {
    let mut acc = cone();
    for i in 0..us.len() {
        for j in i + 1..us.len() {
            acc = acc * ctx.big_q(us[i], us[j]);
        }
    }
    acc
}

/// `Delta'(ubar) = prod_{i>j} Q(u_i, u_j)`.
pub fn delta_prime<T: Real>(ctx: &SpectralContext<T>, us: &[Complex<T>]) -> Complex<T> {
    let mut acc = cone();
    for i in 0..us.len() {
        for j in 0..i {
            acc = acc * ctx.big_q(us[i], us[j]);
        }
    }
    acc
}

fn product<T: Real>(us: &[Complex<T>], f: impl Fn(Complex<T>) -> Complex<T>) -> Complex<T> {
    us.iter().fold(cone(), |acc, u| acc * f(*u))
}

/// `d Lambda(u|vbar) / d v_i` from `d Q(a, vbar)/d v_i = -dU(v_i) Q(a, vbar_i)`.
pub fn d_lambda_dv<T: Real>(ctx: &SpectralContext<T>, u: Complex<T>, vs: &[Complex<T>], i: usize) -> Result<Complex<T>> {
    let q = ctx.q();
    let rest = removed(vs, i);
    let du = ctx.big_u_derivative(vs[i]);
    let qv = ctx.big_q_set(u, vs);
    let dyn_rest = ctx.phi(u)? * ctx.big_q_set(u / q, &rest) + ctx.phi((q * u).inv())? * ctx.big_q_set(q * u, &rest);
    Ok(-du * dyn_rest / qv + ctx.y(u, vs)? * du * ctx.big_q_set(u, &rest) / (qv * qv))
}

/// `dY(w|ubar)/dU(u_j) = -(phi(w) Q(w/q, ubar_j) + phi(1/(q w)) Q(q w, ubar_j))`.
fn d_y_d_uj<T: Real>(ctx: &SpectralContext<T>, w: Complex<T>, us: &[Complex<T>], j: usize) -> Result<Complex<T>> {
    Ok(-ctx.y_dynamic(w, &removed(us, j))?)
}

fn nonzero<T: Real>(z: Complex<T>, scale: T, what: &'static str) -> Result<Complex<T>> {
    if !(cabs(z) > T::epsilon() * T::of(64.0) * scale.max(T::one())) {
        return Err(Error::DegenerateDenominator(what));
    }
    Ok(z)
}

/// Rejects sets with two members equal in `U`.
fn check_distinct<T: Real>(ctx: &SpectralContext<T>, us: &[Complex<T>], what: &'static str) -> Result<()> {
    for i in 0..us.len() {
        for j in i + 1..us.len() {
            let (a, b) = (ctx.big_u(us[i]), ctx.big_u(us[j]));
            nonzero(a - b, cabs(a).max(cabs(b)), what)?;
        }
    }
    Ok(())
}

fn check_onshell<T: Real>(ctx: &SpectralContext<T>, vs: &[Complex<T>]) -> Result<()> {
    let residual = BetheRoots::new(vs.to_vec(), ctx)
        .map_err(|_| Error::DegenerateDenominator("Delta'(vbar)"))?
        .max_residual();
    if !(residual <= ONSHELL_TOL) {
        return Err(Error::OffShellDual { residual });
    }
    Ok(())
}

/// Entry-wise relative difference of two matrices, each entry judged against
/// the larger modulus in its row.
fn row_relative_difference<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    let mut worst = T::zero();
    for i in 0..a.rows() {
        let scale = (0..a.cols()).fold(T::zero(), |s, j| s.max(cabs(a[(i, j)])).max(cabs(b[(i, j)])));
        for j in 0..a.cols() {
            let d = cabs(a[(i, j)] - b[(i, j)]);
            worst = worst.max(if scale == T::zero() { d } else { d / scale });
        }
    }
    worst
}

/// `M_{ij} = Q(u_j, vbar) d Lambda(u_j|vbar)/d v_i` by differentiation.
pub fn jacobian_analytic<T: Real>(ctx: &SpectralContext<T>, us: &[Complex<T>], vs: &[Complex<T>]) -> Result<CMatrix<T>> {
    let mut m = CMatrix::zeros(vs.len(), us.len());
    for (j, u) in us.iter().enumerate() {
        let qv = ctx.big_q_set(*u, vs);
        for i in 0..vs.len() {
            m[(i, j)] = qv * d_lambda_dv(ctx, *u, vs, i)?;
        }
    }
    Ok(m)
}

/// `M_{ij} = dU(v_i) Y(u_j|{vbar_i, u_j}) / Q(u_j, v_i)`, valid on shell.
pub fn jacobian_from_y<T: Real>(ctx: &SpectralContext<T>, us: &[Complex<T>], vs: &[Complex<T>]) -> Result<CMatrix<T>> {
    let mut m = CMatrix::zeros(vs.len(), us.len());
    for (j, u) in us.iter().enumerate() {
        for i in 0..vs.len() {
            let y = ctx.y(*u, &replaced(vs, i, *u))?;
            m[(i, j)] = ctx.big_u_derivative(vs[i]) * y / ctx.big_q(*u, vs[i]);
        }
    }
    Ok(m)
}

/// The `N x len(us)` matrix `M`, cross-checked between the two routes.
pub fn jacobian_matrix_m<T: Real>(ctx: &SpectralContext<T>, us: &[Complex<T>], vs: &[Complex<T>]) -> Result<CMatrix<T>> {
    let a = jacobian_analytic(ctx, us, vs)?;
    let b = jacobian_from_y(ctx, us, vs)?;
    let relative = row_relative_difference(&a, &b).to_f64_lossy();
    if !(relative <= JACOBIAN_TOL) {
        return Err(Error::CrossCheckFailure { what: "Jacobian matrix M", relative });
    }
    Ok(a)
}

/// Matrices of the homogeneous system for `X_k = <Psi(vbar)|Psi(ubar_k)>`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarSystem<T: Real> {
    /// The `N + 1` off-shell parameters.
    pub u_ext: Vec<Complex<T>>,
    pub v: Vec<Complex<T>>,
    /// `wbar`; the last entry is the free parameter `w`.
    pub w_aux: Vec<Complex<T>>,
    pub l: CMatrix<T>,
    pub w: CMatrix<T>,
    pub omega: CMatrix<T>,
    pub omega_tilde: CMatrix<T>,
    /// `N x (N + 1)`.
    pub m: CMatrix<T>,
}

impl<T: Real> ScalarSystem<T> {
    /// `|det L| / prod_j max_k |L_kj|`.
    pub fn det_l_relative(&self) -> T {
        let n = self.l.cols();
        let scale = (0..n).fold(T::one(), |acc, j| acc * (0..n).fold(T::zero(), |s, k| s.max(cabs(self.l[(k, j)]))));
        cabs(self.l.det()) / scale
    }

    /// Largest entry of the last row of `Omega` relative to the largest entry of `Omega`.
    pub fn omega_last_row_relative(&self) -> T {
        let n = self.omega.rows();
        let row = (0..n).fold(T::zero(), |s, j| s.max(cabs(self.omega[(n - 1, j)])));
        row / self.omega.max_abs()
    }

    /// Null vector of `L` from the cofactors of its last row.
    pub fn null_vector(&self) -> Vec<Complex<T>> {
        let n = self.l.rows();
        (0..n)
            .map(|l| {
                let c = self.l.minor(n - 1, l).det();
                if (n - 1 + l).is_multiple_of(2) {
                    c
                } else {
                    -c
                }
            })
            .collect()
    }
}

/// `W_{ik} = Q(u_k, wbar_i) / (F(u_k) Q(u_k, ubar_k))` with `wbar_i` = `wbar` minus `w_i`.
pub fn w_matrix<T: Real>(ctx: &SpectralContext<T>, us: &[Complex<T>], ws: &[Complex<T>]) -> CMatrix<T> {
    CMatrix::from_fn(ws.len(), us.len(), |i, k| {
        ctx.big_q_set(us[k], &removed(ws, i)) / (ctx.f(us[k]) * ctx.big_q_set(us[k], &removed(us, k)))
    })
}

/// Builds `L`, `W`, `Omega = W L`, `Omega~` and `M` for the `N + 1` parameters
/// `u_ext`, on-shell `v` and auxiliary `w`.
pub fn build_linear_system<T: Real>(
    ctx: &SpectralContext<T>,
    u_ext: &[Complex<T>],
    v: &[Complex<T>],
    w: Complex<T>,
) -> Result<ScalarSystem<T>> {
    let n = v.len();
    if u_ext.len() != n + 1 {
        return Err(Error::InvalidInput(format!("expected {} off-shell parameters, got {}", n + 1, u_ext.len())));
    }
    check_onshell(ctx, v)?;
    check_distinct(ctx, u_ext, "Q(u_j, ubar_j)")?;
    for u in u_ext {
        nonzero(ctx.f(*u), T::one(), "F(u_j)")?;
    }
    let mut w_aux = v.to_vec();
    w_aux.push(w);
    check_distinct(ctx, &w_aux, "Q(v_i, w)")?;

    let mut l = CMatrix::zeros(n + 1, n + 1);
    for j in 0..=n {
        let qj = ctx.big_q_set(u_ext[j], &removed(u_ext, j));
        let lambda = ctx.lambda(u_ext[j], v)?;
        for k in 0..=n {
            let y = ctx.y(u_ext[j], &removed(u_ext, k))?;
            let mut entry = -ctx.f(u_ext[k]) / ctx.f(u_ext[j]) * y / qj;
            if k == j {
                entry = entry + lambda;
            }
            l[(k, j)] = entry;
        }
    }
    let wm = w_matrix(ctx, u_ext, &w_aux);
    let omega = wm.matmul(&l);
    let vdiag: Vec<Complex<T>> = (0..=n).map(|i| if i < n { ctx.big_q(v[i], w).inv() } else { czero() }).collect();
    let omega_tilde = CMatrix::from_diagonal(&vdiag).matmul(&omega);
    let m = jacobian_matrix_m(ctx, u_ext, v)?;
    Ok(ScalarSystem { u_ext: u_ext.to_vec(), v: v.to_vec(), w_aux, l, w: wm, omega, omega_tilde, m })
}

/// `det M` for `N` off-shell parameters, evaluated four ways.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeterminantRoutes<T: Real> {
    pub direct: Complex<T>,
    /// `dU(vbar) det(Y(u_j|{vbar_i, u_j}) / Q(u_j, v_i))`.
    pub y_form: Complex<T>,
    /// Through `det(B M) / det B` with the closed form of `det B`.
    pub b_form: Complex<T>,
    /// `dU(vbar) Delta'(vbar) Delta(ubar) det(delta_ij Lambda(u_i|vbar) + dY(u_i|ubar)/dU(u_j) / Q(u_i, ubar_i))`.
    pub jacobian: Complex<T>,
    /// `det B` computed numerically.
    pub b_det: Complex<T>,
    /// `Delta'(ubar) / Delta'(vbar)`.
    pub b_det_closed: Complex<T>,
}

/// `B_{kl} = Q(ubar, v_l) / (Q(u_k, v_l) Q(vbar_l, v_l))`.
pub fn b_matrix<T: Real>(ctx: &SpectralContext<T>, us: &[Complex<T>], vs: &[Complex<T>]) -> CMatrix<T> {
    CMatrix::from_fn(us.len(), vs.len(), |k, l| {
        product(us, |u| ctx.big_q(u, vs[l])) / (ctx.big_q(us[k], vs[l]) * product(&removed(vs, l), |v| ctx.big_q(v, vs[l])))
    })
}

pub fn determinant_routes<T: Real>(ctx: &SpectralContext<T>, us: &[Complex<T>], vs: &[Complex<T>]) -> Result<DeterminantRoutes<T>> {
    let n = vs.len();
    if us.len() != n {
        return Err(Error::InvalidInput(format!("expected {n} off-shell parameters, got {}", us.len())));
    }
    check_distinct(ctx, us, "Delta(ubar)")?;
    check_distinct(ctx, vs, "Delta'(vbar)")?;
    let du_v = product(vs, |v| ctx.big_u_derivative(v));

    let direct = jacobian_analytic(ctx, us, vs)?.det();

    let mut yq = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            yq[(i, j)] = ctx.y(us[j], &replaced(vs, i, us[j]))? / ctx.big_q(us[j], vs[i]);
        }
    }
    let y_form = du_v * yq.det();

    let b = b_matrix(ctx, us, vs);
    let b_det_closed = delta_prime(ctx, us) / delta_prime(ctx, vs);
    let b_form = du_v * b.matmul(&yq).det() / b_det_closed;

    let jacobian = du_v * delta_prime(ctx, vs) * delta(ctx, us) * jacobian_form_matrix(ctx, us, vs)?.det();
    Ok(DeterminantRoutes { direct, y_form, b_form, jacobian, b_det: b.det(), b_det_closed })
}

/// `delta_ij Lambda(u_i|vbar) + dY(u_i|ubar)/dU(u_j) / Q(u_i, ubar_i)`, whose
/// determinant times `dU(vbar) Delta'(vbar) Delta(ubar)` is `det M`.
pub fn jacobian_form_matrix<T: Real>(ctx: &SpectralContext<T>, us: &[Complex<T>], vs: &[Complex<T>]) -> Result<CMatrix<T>> {
    let n = us.len();
    let mut jm = CMatrix::zeros(n, n);
    for i in 0..n {
        let qi = ctx.big_q_set(us[i], &removed(us, i));
        let lambda = ctx.lambda(us[i], vs)?;
        for j in 0..n {
            let mut e = d_y_d_uj(ctx, us[i], us, j)? / qi;
            if i == j {
                e = e + lambda;
            }
            jm[(i, j)] = e;
        }
    }
    Ok(jm)
}

/// Pairwise relative differences of the four forms of `det M`, and `det B`.
pub fn determinant_crosschecks<T: Real>(ctx: &SpectralContext<T>, us: &[Complex<T>], vs: &[Complex<T>]) -> Result<VerificationReport> {
    let r = determinant_routes(ctx, us, vs)?;
    let values = [("direct", r.direct), ("y_form", r.y_form), ("b_form", r.b_form), ("jacobian", r.jacobian)];
    let mut report = VerificationReport::new();
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            report.push(
                CheckRecord::new("determinant_routes", rel_diff(values[i].1, values[j].1).to_f64_lossy(), ROUTES_TOL)
                    .with_input("pair", format!("{}/{}", values[i].0, values[j].0))
                    .with_input("n", vs.len()),
            );
        }
    }
    report.push(
        CheckRecord::new("b_matrix_determinant", rel_diff(r.b_det, r.b_det_closed).to_f64_lossy(), B_MATRIX_TOL)
            .with_input("n", vs.len()),
    );
    Ok(report)
}

/// Both sides of the determinant formula for one pair of root sets.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarResult<T: Real> {
    pub lhs_direct: Complex<T>,
    pub rhs_determinant: Complex<T>,
    pub eta: Complex<T>,
    /// `<Psi(vbar)|N>`.
    pub bra_reference: Complex<T>,
    pub relative_error: T,
    /// 1-norm condition number of the `N x N` matrix `M`.
    pub condition: T,
    pub branch: SqrtBranch,
}

/// Right-hand side of the determinant formula without `eta <Psi(vbar)|N>`,
/// and the condition number of `M`.
pub fn determinant_kernel<T: Real>(ctx: &SpectralContext<T>, us: &[Complex<T>], vs: &[Complex<T>]) -> Result<(Complex<T>, T)> {
    check_distinct(ctx, us, "Delta(ubar)")?;
    check_distinct(ctx, vs, "Delta'(vbar)")?;
    let du_v = product(vs, |v| ctx.big_u_derivative(v));
    let f_u = product(us, |u| ctx.f(u));
    nonzero(du_v, T::one(), "dU(vbar)")?;
    nonzero(f_u, T::one(), "F(ubar)")?;
    let m = jacobian_analytic(ctx, us, vs)?;
    let lu = m.lu();
    let denominator = du_v * delta_prime(ctx, vs) * f_u * delta(ctx, us);
    Ok((lu.det() / denominator, lu.condition_1(&m)))
}

/// Direct pairing against the determinant formula, reusing a built dual vector.
pub fn scalar_product_with_bra<T: Real>(
    ctx: &SpectralContext<T>,
    us: &[Complex<T>],
    bra: &BetheVector<T>,
    branch: SqrtBranch,
) -> Result<ScalarResult<T>> {
    let vs = &bra.roots;
    if us.len() != vs.len() {
        return Err(Error::InvalidInput(format!("expected {} off-shell parameters, got {}", vs.len(), us.len())));
    }
    check_onshell(ctx, vs)?;
    let (kernel, condition) = determinant_kernel(ctx, us, vs)?;
    let m = ctx.params();
    let ket = build_bethe_vector(us, Side::Ket, m)?;
    let lhs_direct = pairing(bra, &ket)?;
    let bra_reference = crate::linalg::bilinear(&bra.components, &reference_states(m).ket);
    let eta = eta_and_nu(m, branch)?.eta;
    let rhs_determinant = eta * bra_reference * kernel;
    Ok(ScalarResult {
        lhs_direct,
        rhs_determinant,
        eta,
        bra_reference,
        relative_error: rel_diff(lhs_direct, rhs_determinant),
        condition,
        branch,
    })
}

/// `<Psi(vbar)|Psi(ubar)>` directly and from the determinant formula.
pub fn scalar_product_determinant<T: Real>(
    ctx: &SpectralContext<T>,
    us: &[Complex<T>],
    v: &BetheRoots<T>,
    branch: SqrtBranch,
) -> Result<ScalarResult<T>> {
    check_onshell(ctx, &v.roots)?;
    let bra = build_bethe_vector(&v.roots, Side::Bra, ctx.params())?;
    scalar_product_with_bra(ctx, us, &bra, branch)
}

#[cfg(test)]
mod tests;
