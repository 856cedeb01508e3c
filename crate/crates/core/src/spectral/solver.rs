//! Bethe roots from a transfer-matrix eigenvector: sample the eigenvalue,
//! solve the TQ relation for the coefficients of `Q` as a polynomial in
//! `U(u)`, and lift its zeros back to spectral parameters.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BetheRoots, SpectralContext};
use crate::error::{Error, Result};
use crate::linalg::{eigenvector, least_squares, roots_monic, sorted_eigenvalues, CMatrix};
use crate::operators::transfer_matrix;
use crate::real::{cabs, convert, csqrt, Real};

/// On-shell tolerance on `|Y(u_i|ubar)| / scale`.
pub const ONSHELL_TOL: f64 = 1e-8;

/// Relative eigenvalue separation below which the requested state counts as degenerate.
const GAP_TOL: f64 = 1e-8;
/// Largest acceptable condition number of the coefficient system.
const CONDITION_LIMIT: f64 = 1e10;
/// Sample points closer than this (relative, in `U`) are redrawn.
const SAMPLE_SEPARATION: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    /// Point where the transfer matrix is diagonalized.
    pub probe: Complex<f64>,
    /// Radius range for the sample circle.
    pub radius: (f64, f64),
    /// Number of sample points; `None` means `N + 4`.
    pub samples: Option<usize>,
    pub seed: u64,
    pub tolerance: f64,
    /// Fail with [`Error::ResidualTooLarge`] instead of returning an off-shell set.
    pub strict: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            probe: Complex::new(1.1739, 0.3127),
            radius: (1.1, 1.5),
            samples: None,
            seed: 0x5eed,
            tolerance: ONSHELL_TOL,
            strict: true,
        }
    }
}

/// One eigenvector of the transfer matrix at the probe point.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenstate<T: Real> {
    pub index: usize,
    pub probe: Complex<T>,
    pub eigenvalue: Complex<T>,
    pub vector: Vec<Complex<T>>,
    /// Distance to the nearest other eigenvalue, relative to the spectral radius.
    pub relative_gap: T,
}

impl<T: Real> Eigenstate<T> {
    /// `<psi, t(u) psi> / <psi, psi>` (Hermitian product).
    pub fn rayleigh_quotient(&self, t: &CMatrix<T>) -> Complex<T> {
        let tv = t.mul_vec(&self.vector);
        let num = self.vector.iter().zip(&tv).fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * *b);
        let den = self.vector.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr());
        num / den
    }
}

fn eigenstate_from<T: Real>(t: &CMatrix<T>, ev: &[Complex<T>], index: usize, probe: Complex<T>) -> Result<Eigenstate<T>> {
    let lambda = ev[index];
    let radius = ev.iter().fold(T::zero(), |acc, z| acc.max(cabs(*z)));
    let gap = ev
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != index)
        .fold(T::infinity(), |acc, (_, z)| acc.min(cabs(*z - lambda)));
    let relative_gap = if radius == T::zero() { T::zero() } else { gap / radius };
    if !(relative_gap.to_f64_lossy() > GAP_TOL) && ev.len() > 1 {
        return Err(Error::IllConditioned {
            what: "transfer-matrix eigenvalue (degenerate at the probe point)",
            condition: 1.0 / relative_gap.to_f64_lossy(),
        });
    }
    let vector = eigenvector(t, lambda)?;
    Ok(Eigenstate { index, probe, eigenvalue: lambda, vector, relative_gap })
}

/// Eigenvector number `index` of `t(probe)`, eigenvalues sorted by (re, im).
pub fn transfer_eigenstate<T: Real>(ctx: &SpectralContext<T>, index: usize, probe: Complex<T>) -> Result<Eigenstate<T>> {
    let m = ctx.params();
    if index >= m.dim() {
        return Err(Error::InvalidInput(format!("eigen index {index} out of range for dimension {}", m.dim())));
    }
    let t = transfer_matrix(probe, m)?;
    let ev = sorted_eigenvalues(&t)?;
    eigenstate_from(&t, &ev, index, probe)
}

/// All eigenvectors of `t(probe)` in the order of [`transfer_eigenstate`].
pub fn transfer_eigenstates<T: Real>(ctx: &SpectralContext<T>, probe: Complex<T>) -> Result<Vec<Eigenstate<T>>> {
    let t = transfer_matrix(probe, ctx.params())?;
    let ev = sorted_eigenvalues(&t)?;
    (0..ev.len()).map(|index| eigenstate_from(&t, &ev, index, probe)).collect()
}

/// Inverse of `U`: the solution of `q u^2 + q^{-1} u^{-2} = (q - q^{-1})^2 U`
/// of largest modulus, with nonnegative real part (nonnegative imaginary part
/// when the real part vanishes).
pub fn lift_u_to_u<T: Real>(uval: Complex<T>, ctx: &SpectralContext<T>) -> Result<Complex<T>> {
    let q = ctx.q();
    let c = ctx.c2 * uval;
    // q w^2 - c w + q^{-1} = 0 for w = u^2; take the larger root first for accuracy
    let disc = csqrt(c * c - T::of(4.0));
    let big = if cabs(c + disc) >= cabs(c - disc) { c + disc } else { c - disc };
    let w1 = big / (q * T::of(2.0));
    let w2 = (q * q * w1).inv();
    let fail = || Error::LiftFailure { re: uval.re.to_f64_lossy(), im: uval.im.to_f64_lossy() };
    let candidates = [csqrt(w1), csqrt(w2)];
    if candidates.iter().any(|z| !(z.re.is_finite() && z.im.is_finite()) || cabs(*z) == T::zero()) {
        return Err(fail());
    }
    let key = |z: &Complex<T>| (cabs(*z), z.re, z.im);
    let [a, b] = candidates;
    let (ka, kb) = (key(&a), key(&b));
    let pick_a = ka.0 > kb.0 || (ka.0 == kb.0 && (ka.1 > kb.1 || (ka.1 == kb.1 && ka.2 >= kb.2)));
    Ok(if pick_a { a } else { b })
}

fn sample_points<T: Real>(ctx: &SpectralContext<T>, count: usize, opts: &SolverOptions) -> Result<Vec<Complex<T>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let r = rng.gen_range(opts.radius.0..=opts.radius.1);
    let mut points: Vec<Complex<T>> = Vec::with_capacity(count);
    let mut draws = 0;
    while points.len() < count {
        draws += 1;
        if draws > 100 * count {
            return Err(Error::IllConditioned { what: "sample point selection", condition: f64::INFINITY });
        }
        let p: Complex<T> = convert(Complex::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU)));
        let up = ctx.big_u(p);
        let separated = points.iter().all(|s| {
            let us = ctx.big_u(*s);
            cabs(up - us) > T::of(SAMPLE_SEPARATION) * (cabs(up) + cabs(us))
        });
        if separated && ctx.phi(p).is_ok() && ctx.phi((ctx.q() * p).inv()).is_ok() {
            points.push(p);
        }
    }
    Ok(points)
}

/// Sample points of the TQ fit and the transfer matrices there.
struct Samples<T: Real> {
    points: Vec<Complex<T>>,
    transfers: Vec<CMatrix<T>>,
}

fn samples<T: Real>(ctx: &SpectralContext<T>, opts: &SolverOptions) -> Result<Samples<T>> {
    let n = ctx.n();
    let count = opts.samples.unwrap_or(n + 4);
    if count < n + 2 {
        return Err(Error::InvalidInput(format!("need at least N + 2 = {} sample points", n + 2)));
    }
    let points = sample_points(ctx, count, opts)?;
    let transfers = points.iter().map(|p| transfer_matrix(*p, ctx.params())).collect::<Result<Vec<_>>>()?;
    Ok(Samples { points, transfers })
}

/// Bethe roots of transfer-matrix eigenstate `eigen_index`.
pub fn solve_bethe_roots<T: Real>(eigen_index: usize, ctx: &SpectralContext<T>, opts: &SolverOptions) -> Result<BetheRoots<T>> {
    let state = transfer_eigenstate(ctx, eigen_index, convert(opts.probe))?;
    roots_of_state(ctx, &state, &samples(ctx, opts)?, opts)
}

/// Roots of every eigenstate, sharing the diagonalization and the sample
/// transfer matrices; equal to calling [`solve_bethe_roots`] for each index.
pub fn solve_all_bethe_roots<T: Real>(ctx: &SpectralContext<T>, opts: &SolverOptions) -> Result<Vec<BetheRoots<T>>> {
    let s = samples(ctx, opts)?;
    transfer_eigenstates(ctx, convert(opts.probe))?.iter().map(|state| roots_of_state(ctx, state, &s, opts)).collect()
}

fn roots_of_state<T: Real>(ctx: &SpectralContext<T>, state: &Eigenstate<T>, s: &Samples<T>, opts: &SolverOptions) -> Result<BetheRoots<T>> {
    let n = ctx.n();
    let eigen_index = state.index;
    let count = s.points.len();
    let points = &s.points;
    let q = ctx.q();

    // Lambda Q(u) - phi(u) Q(u/q) - phi(1/(q u)) Q(q u) = H(u), Q = U^N + sum_r c_r U^r
    let mut a = CMatrix::zeros(count, n);
    let mut rhs = Vec::with_capacity(count);
    for (k, p) in points.iter().enumerate() {
        let lambda = state.rayleigh_quotient(&s.transfers[k]);
        let (phi_p, phi_c) = (ctx.phi(*p)?, ctx.phi((q * *p).inv())?);
        let (u0, um, up) = (ctx.big_u(*p), ctx.big_u(*p / q), ctx.big_u(q * *p));
        let entry = |r: u32| lambda * u0.powu(r) - phi_p * um.powu(r) - phi_c * up.powu(r);
        let mut row: Vec<Complex<T>> = (0..n as u32).map(entry).collect();
        let mut b = ctx.h(*p) - entry(n as u32);
        let scale = row.iter().fold(cabs(b), |acc, z| acc.max(cabs(*z)));
        if scale > T::zero() {
            row.iter_mut().for_each(|z| *z = *z / scale);
            b = b / scale;
        }
        for (j, z) in row.into_iter().enumerate() {
            a[(k, j)] = z;
        }
        rhs.push(b);
    }
    let ls = least_squares(&a, &rhs)?;
    let condition = ls.condition.to_f64_lossy();
    if !(condition < CONDITION_LIMIT) {
        return Err(Error::IllConditioned { what: "TQ coefficient system", condition });
    }

    let u_values = roots_monic(&ls.solution)?;
    let u_scale = u_values.iter().fold(T::one(), |acc, z| acc.max(cabs(*z)));
    for i in 0..n {
        for j in i + 1..n {
            let sep = cabs(u_values[i] - u_values[j]) / u_scale;
            if sep.to_f64_lossy() <= 1e-6 {
                return Err(Error::IllConditioned { what: "coincident roots in U", condition: 1.0 / sep.to_f64_lossy() });
            }
        }
    }
    let roots = u_values.iter().map(|z| lift_u_to_u(*z, ctx)).collect::<Result<Vec<_>>>()?;
    let mut out = BetheRoots::new(roots, ctx)?;
    out.eigen_index = Some(eigen_index);
    out.condition = condition;
    if opts.strict && out.max_residual() > opts.tolerance {
        return Err(Error::ResidualTooLarge { residual: out.max_residual(), tolerance: opts.tolerance });
    }
    out.onshell = out.max_residual() <= opts.tolerance;
    Ok(out)
}
